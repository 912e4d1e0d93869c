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

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "kerrchaos/fock.hpp"
#include "kerrchaos/model.hpp"
#include "kerrchaos/noise.hpp"
#include "kerrchaos/section.hpp"

namespace kerrchaos {

/// Time discretization of the diffusion equation.
///
/// `explicit_euler` is the plain Euler-Maruyama update of the full right-hand
/// side. `exponential_euler` propagates the diagonal generator
/// -i (Delta n + chi n^2) - (c1 n + c2 (n+1)) / 2 exactly over the step and
/// applies Euler-Maruyama to the remaining drive, bracket and noise terms;
/// both are first order in dt with Ito brackets taken at the step start.
/// `strang_split` applies the bracket and noise terms first, then half a
/// diagonal step, the drive exp(-i dt (f a+ + f* a)) (Taylor series to
/// rounding) and another half diagonal step; coherent states stay coherent
/// under the linear model and its fixed point is reproduced to O(dt^2).
enum class StepScheme { exponential_euler, explicit_euler, strang_split };

std::string_view to_string(StepScheme scheme) noexcept;
std::optional<StepScheme> parse_step_scheme(std::string_view text) noexcept;

struct TrajectoryConfig {
    double dt = 1e-3;
    double t_final = 10.0;
    std::size_t dim = 32;
    std::size_t sample_every = 10;
    double poincare_t0 = 0.0;
    std::size_t poincare_skip = 0;
    bool renorm = true;
    double leakage_threshold = 1e-4;
    StepScheme scheme = StepScheme::exponential_euler;

    void validate() const;
};

/// Stability guard value for a step of size dt; must not exceed kStabilityLimit.
///
/// explicit_euler:    dt (|Delta| + chi_max dim^2 + gamma dim)
/// exponential_euler, strang_split: dt (2 f_max sqrt(dim) + (2N+1) gamma dim)
double stability_guard(StepScheme scheme, double dt, std::size_t dim, const ModelParams& p) noexcept;
inline constexpr double kStabilityLimit = 0.1;

/// Effective step: the requested dt shrunk to divide the modulation period.
double effective_step(const TrajectoryConfig& cfg, const ModelParams& p);

/// Reusable single-trajectory stepper; holds the O(dim) workspace.
class QsdStepper {
public:
    QsdStepper(const ModelParams& p, std::size_t dim, double dt, StepScheme scheme, bool renorm);

    /// Advances psi from t to t + dt with increments dxi1 (channel L1) and
    /// dxi2 (channel L2). Returns | ||psi'|| - 1 | measured before any
    /// renormalization. Non-finite amplitudes raise a divergence error.
    double step(FockVector& psi, double t, Complex dxi1, Complex dxi2);

    bool needs_second_channel() const noexcept { return c2_ > 0.0; }
    double dt() const noexcept { return dt_; }

private:
    ModelParams p_;
    std::size_t dim_;
    double dt_;
    StepScheme scheme_;
    bool renorm_;
    double c1_;
    double c2_;
    std::vector<double> sqrt_n_;       // sqrt(n)
    std::vector<double> damping_;      // exp(-(c1 n + c2 (n+1)) dt / 2), top level without the c2 term
    std::vector<double> lossrate_;     // (c1 n + c2 (n+1)) / 2
    std::vector<double> half_damping_; // damping_ over dt / 2
    std::vector<Complex> increment_;
    std::vector<Complex> term_;

    void half_diagonal(double chi);
    void apply_drive(Complex f);
};

/// One step of the diffusion equation on a normalized state; checks the
/// stability guard and the configured scheme/renormalization.
FockVector qsd_step(const FockVector& psi, double t, const TrajectoryConfig& cfg, const ModelParams& p,
                    Complex dxi1, Complex dxi2);

struct TrajectoryRecord {
    std::vector<double> times;
    std::vector<Observables> observables;
    std::vector<double> norm_defects;
    PoincareSection poincare;
    FockVector final_state{2};
    double leakage = 0.0;  ///< max top-decile population over the samples
    double dt = 0.0;       ///< effective step
    std::size_t steps = 0;
};

/// Called with (step index, time, state) at the requested steps.
using StateObserver = std::function<void(std::size_t, double, const FockVector&)>;

struct ObserverHook {
    std::vector<std::size_t> steps;  ///< ascending
    StateObserver callback;
};

/// Integrates [0, t_final]. Observables are sampled every `sample_every`
/// steps (and at the end); Poincare points are taken exactly at
/// t_n = poincare_t0 + T n, n >= poincare_skip, since dt divides T.
TrajectoryRecord run_trajectory(const TrajectoryConfig& cfg, const ModelParams& p, const FockVector& psi0,
                                const NoiseStream& stream, const ObserverHook* hook = nullptr);

/// The single-trajectory section of a record; a time-independent model has none.
PoincareSection quantum_poincare(const TrajectoryRecord& record);

/// CSV: t,mean_n,re_a,im_a,mean_n2,mandel_q,norm_defect
void write_observables_csv(std::ostream& out, const std::vector<double>& times,
                           const std::vector<Observables>& observables, const std::vector<double>& norm_defects);
/// CSV: n,x,y
void write_section_csv(std::ostream& out, const PoincareSection& section);

}  // namespace kerrchaos
