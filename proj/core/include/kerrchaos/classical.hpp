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
#include <vector>

#include "kerrchaos/fock.hpp"
#include "kerrchaos/model.hpp"
#include "kerrchaos/section.hpp"

namespace kerrchaos {

/// Semiclassical amplitude alpha = <a>; x = Re alpha, y = Im alpha.
struct ClassicalState {
    Complex alpha{0.0, 0.0};
};

/// d alpha / dt = -(gamma/2) alpha - i (Delta + chi(t) (1 + 2|alpha|^2)) alpha - i f(t)
Complex classical_rhs(Complex alpha, double t, const ModelParams& p) noexcept;

/// One classical fourth-order Runge-Kutta step.
Complex rk4_step(Complex alpha, double t, double dt, const ModelParams& p) noexcept;

struct ClassicalSample {
    double t = 0.0;
    Complex alpha{0.0, 0.0};
};

/// Fixed-step RK4 from t = 0 to t_final (the last step is shortened to land
/// on t_final). Samples every `sample_every` steps plus the endpoint.
/// |alpha| > 1e6 raises a divergence error.
std::vector<ClassicalSample> integrate_classical(ClassicalState start, const ModelParams& p, double dt,
                                                 double t_final, std::size_t sample_every = 1);

/// Largest step not exceeding `dt` that divides `period` into whole steps.
double aligned_step(double period, double dt);
std::size_t steps_per_period(double period, double dt);

struct SectionRequest {
    double t0 = 0.0;
    std::size_t n_points = 1000;
    std::size_t skip = 200;
    double dt = 1e-3;
};

/// Strobes the classical flow at t_n = t0 + T n, T the modulation period,
/// discarding the first `skip` crossings. A time-independent model has no
/// section.
PoincareSection classical_poincare(const ModelParams& p, const SectionRequest& request,
                                   ClassicalState start = {});

struct LyapunovConfig {
    double dt = 1e-3;
    std::size_t horizon_periods = 2000;
    std::size_t renorm_periods = 1;
    std::size_t transient_periods = 200;
    double separation = 1e-8;
};

struct LyapunovReport {
    double estimate = 0.0;      ///< [1/time]
    double horizon = 0.0;       ///< averaging time
    double renorm_interval = 0.0;
    double transient = 0.0;
};

/// Two-trajectory Benettin estimate of the largest Lyapunov exponent. The
/// renormalization interval is the modulation period (1/gamma when the model
/// is time independent).
LyapunovReport lyapunov_largest(const ModelParams& p, ClassicalState start, const LyapunovConfig& config = {});

}  // namespace kerrchaos
