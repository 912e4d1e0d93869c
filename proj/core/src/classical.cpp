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

#include "kerrchaos/classical.hpp"

#include <cmath>
#include <string>

#include "kerrchaos/error.hpp"

namespace kerrchaos {

namespace {

constexpr double kBlowUp = 1e6;

void check_finite(Complex alpha, double t) {
    if (!(std::abs(alpha) <= kBlowUp)) {
        fail(ErrorKind::divergence, "classical amplitude blew up at t=" + std::to_string(t));
    }
}

}  // namespace

Complex classical_rhs(Complex alpha, double t, const ModelParams& p) noexcept {
    const Complex i{0.0, 1.0};
    const double chi = chi_at(p, t);
    return -0.5 * p.gamma * alpha - i * (p.delta + chi * (1.0 + 2.0 * std::norm(alpha))) * alpha - i * f_at(p, t);
}

Complex rk4_step(Complex alpha, double t, double dt, const ModelParams& p) noexcept {
    const double h2 = 0.5 * dt;
    const Complex k1 = classical_rhs(alpha, t, p);
    const Complex k2 = classical_rhs(alpha + h2 * k1, t + h2, p);
    const Complex k3 = classical_rhs(alpha + h2 * k2, t + h2, p);
    const Complex k4 = classical_rhs(alpha + dt * k3, t + dt, p);
    return alpha + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

std::vector<ClassicalSample> integrate_classical(ClassicalState start, const ModelParams& p, double dt,
                                                 double t_final, std::size_t sample_every) {
    require(dt > 0.0, ErrorKind::invalid_parameter, "dt must be positive");
    require(t_final >= 0.0, ErrorKind::invalid_parameter, "t_final must be non-negative");
    require(sample_every >= 1, ErrorKind::invalid_parameter, "sample_every must be at least 1");
    p.validate();

    const auto n_steps = static_cast<std::size_t>(std::ceil(t_final / dt - 1e-9));
    std::vector<ClassicalSample> samples;
    samples.reserve(n_steps / sample_every + 2);
    Complex alpha = start.alpha;
    samples.push_back({0.0, alpha});
    for (std::size_t k = 0; k < n_steps; ++k) {
        const double t = double(k) * dt;
        const double h = std::min(dt, t_final - t);
        alpha = rk4_step(alpha, t, h, p);
        check_finite(alpha, t + h);
        if ((k + 1) % sample_every == 0 || k + 1 == n_steps) {
            samples.push_back({k + 1 == n_steps ? t_final : double(k + 1) * dt, alpha});
        }
    }
    return samples;
}

std::size_t steps_per_period(double period, double dt) {
    require(period > 0.0 && dt > 0.0, ErrorKind::invalid_parameter, "period and dt must be positive");
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(period / dt - 1e-9)));
}

double aligned_step(double period, double dt) { return period / double(steps_per_period(period, dt)); }

PoincareSection classical_poincare(const ModelParams& p, const SectionRequest& request, ClassicalState start) {
    p.validate();
    const auto period = modulation_period(p);
    if (!period) fail(ErrorKind::no_section, "Poincare section needs a modulated drive or nonlinearity");
    require(request.t0 >= 0.0, ErrorKind::invalid_parameter, "section phase origin must be non-negative");

    const std::size_t per = steps_per_period(*period, request.dt);
    const double h = *period / double(per);

    Complex alpha = start.alpha;
    // Reach the phase origin with its own whole number of steps.
    if (request.t0 > 0.0) {
        const auto n0 = static_cast<std::size_t>(std::ceil(request.t0 / h - 1e-9));
        const double h0 = request.t0 / double(n0);
        for (std::size_t k = 0; k < n0; ++k) {
            alpha = rk4_step(alpha, double(k) * h0, h0, p);
            check_finite(alpha, double(k + 1) * h0);
        }
    }

    PoincareSection section;
    section.t0 = request.t0;
    section.period = *period;
    section.skipped = request.skip;
    section.provenance = SectionProvenance::classical;
    section.points.reserve(request.n_points);

    const std::size_t total = request.skip + request.n_points;
    for (std::size_t n = 0; n < total; ++n) {
        if (n >= request.skip) section.points.push_back({alpha.real(), alpha.imag()});
        if (n + 1 == total) break;
        const double t_start = request.t0 + double(n) * *period;
        for (std::size_t k = 0; k < per; ++k) alpha = rk4_step(alpha, t_start + double(k) * h, h, p);
        check_finite(alpha, t_start + *period);
    }
    return section;
}

LyapunovReport lyapunov_largest(const ModelParams& p, ClassicalState start, const LyapunovConfig& config) {
    p.validate();
    require(config.separation > 0.0, ErrorKind::invalid_parameter, "separation seed must be positive");
    require(config.horizon_periods > 0 && config.renorm_periods > 0, ErrorKind::invalid_parameter,
            "horizon and renormalization interval must be positive");

    const double period = modulation_period(p).value_or(1.0 / p.gamma);
    const std::size_t per = steps_per_period(period, config.dt);
    const double h = period / double(per);

    Complex a = start.alpha;
    double t = 0.0;
    std::size_t step = 0;
    auto advance = [&](Complex& z, double t_from) {
        for (std::size_t k = 0; k < per; ++k) z = rk4_step(z, t_from + double(k) * h, h, p);
    };
    for (std::size_t n = 0; n < config.transient_periods; ++n) {
        advance(a, t);
        ++step;
        t = double(step) * period;
        check_finite(a, t);
    }

    Complex b = a + Complex{config.separation, 0.0};
    double log_sum = 0.0;
    std::size_t renorms = 0;
    for (std::size_t n = 0; n < config.horizon_periods; ++n) {
        advance(a, t);
        advance(b, t);
        ++step;
        t = double(step) * period;
        check_finite(a, t);
        check_finite(b, t);
        if ((n + 1) % config.renorm_periods == 0 || n + 1 == config.horizon_periods) {
            const double d = std::abs(b - a);
            if (d == 0.0) {
                // Separation underflowed: contraction is at least this strong.
                log_sum += std::log(std::numeric_limits<double>::min() / config.separation);
                b = a + Complex{config.separation, 0.0};
            } else {
                log_sum += std::log(d / config.separation);
                b = a + (b - a) * (config.separation / d);
            }
            ++renorms;
        }
    }
    LyapunovReport report;
    report.horizon = double(config.horizon_periods) * period;
    report.estimate = log_sum / report.horizon;
    report.renorm_interval = double(config.renorm_periods) * period;
    report.transient = double(config.transient_periods) * period;
    return report;
}

}  // namespace kerrchaos
