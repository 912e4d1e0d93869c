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

#include "kerrchaos/model.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "kerrchaos/error.hpp"

namespace kerrchaos {

std::string_view to_string(ChiModulation kind) noexcept {
    switch (kind) {
        case ChiModulation::constant: return "constant";
        case ChiModulation::sinusoidal: return "sinusoidal";
    }
    return "constant";
}

std::string_view to_string(DriveModulation kind) noexcept {
    switch (kind) {
        case DriveModulation::constant: return "constant";
        case DriveModulation::complex_exponential: return "complex_exponential";
        case DriveModulation::complex_exponential_negative: return "complex_exponential_negative";
        case DriveModulation::sinusoidal: return "sinusoidal";
    }
    return "constant";
}

std::optional<ChiModulation> parse_chi_modulation(std::string_view text) noexcept {
    if (text == "constant") return ChiModulation::constant;
    if (text == "sinusoidal") return ChiModulation::sinusoidal;
    return std::nullopt;
}

std::optional<DriveModulation> parse_drive_modulation(std::string_view text) noexcept {
    if (text == "constant") return DriveModulation::constant;
    if (text == "complex_exponential") return DriveModulation::complex_exponential;
    if (text == "complex_exponential_negative") return DriveModulation::complex_exponential_negative;
    if (text == "sinusoidal") return DriveModulation::sinusoidal;
    return std::nullopt;
}

void ModelParams::validate() const {
    auto check_finite = [](double v, const char* name) {
        if (!std::isfinite(v)) fail(ErrorKind::invalid_parameter, std::string(name) + " must be finite");
    };
    check_finite(gamma, "gamma");
    check_finite(delta, "delta");
    check_finite(chi0, "chi0");
    check_finite(chi1, "chi1");
    check_finite(omega, "omega");
    check_finite(f0, "f0");
    check_finite(f1, "f1");
    check_finite(small_delta, "small_delta");
    check_finite(n_th, "n_th");
    if (!(gamma > 0.0)) fail(ErrorKind::invalid_parameter, "gamma must be positive");
    if (n_th < 0.0) fail(ErrorKind::invalid_parameter, "n_th must be non-negative");
    if (chi_mod == ChiModulation::sinusoidal && !(omega > 0.0)) {
        fail(ErrorKind::invalid_parameter, "sinusoidal chi modulation requires omega > 0");
    }
    if (f_mod != DriveModulation::constant && !(small_delta > 0.0)) {
        fail(ErrorKind::invalid_parameter, "modulated drive requires small_delta > 0");
    }
}

ScaleFactor::ScaleFactor(double lambda) : lambda_(lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        fail(ErrorKind::invalid_parameter, "scale factor must be positive, got " + std::to_string(lambda));
    }
}

double chi_at(const ModelParams& p, double t) noexcept {
    if (p.chi_mod == ChiModulation::sinusoidal) return p.chi0 + p.chi1 * std::sin(p.omega * t);
    return p.chi0;
}

Complex f_at(const ModelParams& p, double t) noexcept {
    const double phase = p.small_delta * t;
    switch (p.f_mod) {
        case DriveModulation::constant:
            return {p.f0, 0.0};
        case DriveModulation::complex_exponential:
            return p.f0 + p.f1 * Complex{std::cos(phase), std::sin(phase)};
        case DriveModulation::complex_exponential_negative:
            return p.f0 + p.f1 * Complex{std::cos(phase), -std::sin(phase)};
        case DriveModulation::sinusoidal:
            return {p.f0 + p.f1 * std::sin(phase), 0.0};
    }
    return {p.f0, 0.0};
}

double chi_max(const ModelParams& p) noexcept {
    if (p.chi_mod == ChiModulation::sinusoidal) return std::abs(p.chi0) + std::abs(p.chi1);
    return std::abs(p.chi0);
}

double f_max(const ModelParams& p) noexcept {
    if (p.f_mod == DriveModulation::constant) return std::abs(p.f0);
    return std::abs(p.f0) + std::abs(p.f1);
}

std::optional<double> modulation_period(const ModelParams& p) noexcept {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    if (p.f_mod != DriveModulation::constant && p.small_delta > 0.0) return two_pi / p.small_delta;
    if (p.chi_mod == ChiModulation::sinusoidal && p.omega > 0.0) return two_pi / p.omega;
    return std::nullopt;
}

FockVector hamiltonian_apply(const ModelParams& p, double t, const FockVector& psi) {
    const std::size_t d = psi.dim();
    const double chi = chi_at(p, t);
    const Complex f = f_at(p, t);
    const Complex fc = std::conj(f);
    FockVector out(d);
    for (std::size_t n = 0; n < d; ++n) {
        const double nn = double(n);
        Complex v = (p.delta * nn + chi * nn * nn) * psi[n];
        if (n > 0) v += f * std::sqrt(nn) * psi[n - 1];
        if (n + 1 < d) v += fc * std::sqrt(nn + 1.0) * psi[n + 1];
        out[n] = v;
    }
    return out;
}

double lindblad_rate(const ModelParams& p, int which) {
    if (which == 1) return (p.n_th + 1.0) * p.gamma;
    if (which == 2) return p.n_th * p.gamma;
    fail(ErrorKind::invalid_parameter, "Lindblad channel must be 1 or 2");
}

FockVector lindblad_apply(const ModelParams& p, int which, const FockVector& psi) {
    const double amp = std::sqrt(lindblad_rate(p, which));
    FockVector out = which == 1 ? apply_annihilation(psi) : apply_creation(psi);
    out *= amp;
    return out;
}

ModelParams scale_params(const ModelParams& p, ScaleFactor lambda) {
    const double l = lambda.value();
    const double inv_l2 = 1.0 / (l * l);
    ModelParams s = p;
    s.delta = p.delta + p.chi0 * (1.0 - inv_l2);
    s.chi0 = p.chi0 * inv_l2;
    s.chi1 = p.chi1 * inv_l2;
    s.f0 = l * p.f0;
    s.f1 = l * p.f1;
    return s;
}

}  // namespace kerrchaos
