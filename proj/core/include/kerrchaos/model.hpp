// Copyright 2026 The kerrchaos Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <optional>
#include <string_view>

#include "kerrchaos/fock.hpp"

namespace kerrchaos {

enum class ChiModulation { constant, sinusoidal };

/// Shape of the drive modulation f(t) - f0.
enum class DriveModulation {
    constant,
    complex_exponential,           ///< f1 exp(+i delta t)
    complex_exponential_negative,  ///< f1 exp(-i delta t)
    sinusoidal,                    ///< f1 sin(delta t)
};

std::string_view to_string(ChiModulation kind) noexcept;
std::string_view to_string(DriveModulation kind) noexcept;
std::optional<ChiModulation> parse_chi_modulation(std::string_view text) noexcept;
std::optional<DriveModulation> parse_drive_modulation(std::string_view text) noexcept;

/// Physical parameters of the driven, damped Kerr oscillator in the frame
/// rotating at the drive frequency. All rates are in units of gamma; the
/// default gamma = 1 keeps every stored value a ratio to gamma.
struct ModelParams {
    double gamma = 1.0;
    double delta = 0.0;  ///< detuning omega_0 - omega
    double chi0 = 0.0;
    double chi1 = 0.0;
    double omega = 0.0;  ///< chi modulation frequency
    double f0 = 0.0;
    double f1 = 0.0;
    double small_delta = 0.0;  ///< drive modulation frequency
    double n_th = 0.0;         ///< bath occupancy
    ChiModulation chi_mod = ChiModulation::constant;
    DriveModulation f_mod = DriveModulation::constant;

    /// Throws invalid_parameter naming the offending field.
    void validate() const;

    friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Positive scale factor lambda of the amplitude map alpha -> lambda alpha.
class ScaleFactor {
public:
    explicit ScaleFactor(double lambda);
    double value() const noexcept { return lambda_; }

private:
    double lambda_;
};

double chi_at(const ModelParams& p, double t) noexcept;
Complex f_at(const ModelParams& p, double t) noexcept;

/// Upper bounds of |chi(t)| and |f(t)| over all t.
double chi_max(const ModelParams& p) noexcept;
double f_max(const ModelParams& p) noexcept;

/// Period of the active modulation: 2 pi / delta when the drive is modulated,
/// otherwise 2 pi / Omega when chi is; nullopt for a time-independent model.
std::optional<double> modulation_period(const ModelParams& p) noexcept;

/// (H / hbar) psi = Delta n psi + chi(t) n^2 psi + f(t) a+ psi + f*(t) a psi.
FockVector hamiltonian_apply(const ModelParams& p, double t, const FockVector& psi);

/// Rate prefactors: L1 = sqrt(c1) a with c1 = (N+1) gamma, L2 = sqrt(c2) a+ with c2 = N gamma.
double lindblad_rate(const ModelParams& p, int which);

/// L_which psi for which in {1, 2}.
FockVector lindblad_apply(const ModelParams& p, int which, const FockVector& psi);

/// Amplitude-scaling map: Delta -> Delta + chi0 (1 - 1/lambda^2), chi0,1 -> chi0,1 / lambda^2,
/// f0,1 -> lambda f0,1; gamma, Omega, delta and N unchanged.
ModelParams scale_params(const ModelParams& p, ScaleFactor lambda);

}  // namespace kerrchaos
