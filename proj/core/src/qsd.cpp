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

#include "kerrchaos/qsd.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <string>

#include "kerrchaos/classical.hpp"
#include "kerrchaos/error.hpp"

namespace kerrchaos {

std::string_view to_string(StepScheme scheme) noexcept {
    switch (scheme) {
        case StepScheme::explicit_euler:
            return "explicit_euler";
        case StepScheme::strang_split:
            return "strang_split";
        case StepScheme::exponential_euler:
            break;
    }
    return "exponential_euler";
}

std::optional<StepScheme> parse_step_scheme(std::string_view text) noexcept {
    if (text == "exponential_euler") return StepScheme::exponential_euler;
    if (text == "explicit_euler") return StepScheme::explicit_euler;
    if (text == "strang_split") return StepScheme::strang_split;
    return std::nullopt;
}

void TrajectoryConfig::validate() const {
    require(dt > 0.0 && std::isfinite(dt), ErrorKind::invalid_parameter, "dt must be positive");
    require(t_final > 0.0 && std::isfinite(t_final), ErrorKind::invalid_parameter, "t_final must be positive");
    require(dim >= 2, ErrorKind::invalid_parameter, "dim must be at least 2");
    require(sample_every >= 1, ErrorKind::invalid_parameter, "sample_every must be at least 1");
    require(poincare_t0 >= 0.0, ErrorKind::invalid_parameter, "poincare_t0 must be non-negative");
    require(leakage_threshold > 0.0, ErrorKind::invalid_parameter, "leakage_threshold must be positive");
}

double stability_guard(StepScheme scheme, double dt, std::size_t dim, const ModelParams& p) noexcept {
    const double d = double(dim);
    if (scheme == StepScheme::explicit_euler) {
        return dt * (std::abs(p.delta) + chi_max(p) * d * d + p.gamma * d);
    }
    return dt * (2.0 * f_max(p) * std::sqrt(d) + (2.0 * p.n_th + 1.0) * p.gamma * d);
}

double effective_step(const TrajectoryConfig& cfg, const ModelParams& p) {
    const auto period = modulation_period(p);
    return period ? aligned_step(*period, cfg.dt) : cfg.dt;
}

QsdStepper::QsdStepper(const ModelParams& p, std::size_t dim, double dt, StepScheme scheme, bool renorm)
    : p_(p),
      dim_(dim),
      dt_(dt),
      scheme_(scheme),
      renorm_(renorm),
      c1_(lindblad_rate(p, 1)),
      c2_(lindblad_rate(p, 2)),
      sqrt_n_(dim + 1),
      damping_(dim),
      lossrate_(dim),
      half_damping_(dim),
      increment_(dim),
      term_(dim) {
    for (std::size_t n = 0; n <= dim; ++n) sqrt_n_[n] = std::sqrt(double(n));
    for (std::size_t n = 0; n < dim; ++n) {
        // truncated a a+ has no entry on the top level
        const double up = n + 1 < dim ? double(n + 1) : 0.0;
        lossrate_[n] = 0.5 * (c1_ * double(n) + c2_ * up);
        damping_[n] = std::exp(-lossrate_[n] * dt);
        half_damping_[n] = std::exp(-0.5 * lossrate_[n] * dt);
    }
}

void QsdStepper::half_diagonal(double chi) {
    const double h = 0.5 * dt_;
    Complex phase{1.0, 0.0};
    Complex ratio = std::exp(Complex{0.0, -h * (p_.delta + chi)});
    const Complex ratio_step = std::exp(Complex{0.0, -2.0 * chi * h});
    for (std::size_t n = 0; n < dim_; ++n) {
        increment_[n] *= half_damping_[n] * phase;
        phase *= ratio;
        ratio *= ratio_step;
    }
}

void QsdStepper::apply_drive(Complex f) {
    // exp(G) v with G = -i dt (f a+ + f* a); the guard keeps ||G|| <= 0.1.
    const Complex gp = Complex{0.0, -dt_} * f;
    const Complex gm = Complex{0.0, -dt_} * std::conj(f);
    if (gp == Complex{0.0, 0.0}) return;
    const std::size_t d = dim_;
    term_ = increment_;
    double sum2 = 0.0;
    for (std::size_t n = 0; n < d; ++n) sum2 += std::norm(increment_[n]);
    for (int k = 1; k <= 30; ++k) {
        const double inv_k = 1.0 / double(k);
        Complex below{0.0, 0.0};  // previous term_[n - 1] before overwrite
        double term2 = 0.0;
        for (std::size_t n = 0; n < d; ++n) {
            const Complex here = term_[n];
            Complex v{0.0, 0.0};
            if (n + 1 < d) v += gm * sqrt_n_[n + 1] * term_[n + 1];
            if (n > 0) v += gp * sqrt_n_[n] * below;
            below = here;
            term_[n] = v * inv_k;
            term2 += std::norm(term_[n]);
        }
        for (std::size_t n = 0; n < d; ++n) increment_[n] += term_[n];
        if (term2 <= 1e-34 * sum2) break;
    }
}

double QsdStepper::step(FockVector& psi, double t, Complex dxi1, Complex dxi2) {
    const Complex i{0.0, 1.0};
    const std::size_t d = dim_;
    const double norm2 = psi.norm_squared();
    const Complex alpha = mean_annihilation(psi) / norm2;
    const Complex alpha_c = std::conj(alpha);
    const double chi = chi_at(p_, t);
    const Complex f = f_at(p_, t);
    const double sc1 = std::sqrt(c1_);
    const double sc2 = std::sqrt(c2_);

    // psi' = (1 + c0) psi + ca a psi + cc a+ psi, before the diagonal part.
    const bool split = scheme_ == StepScheme::strang_split;
    const Complex fe = split ? Complex{0.0, 0.0} : f;
    const Complex ca = (c1_ * alpha_c - i * std::conj(fe)) * dt_ + sc1 * dxi1;
    const Complex cc = (c2_ * alpha - i * fe) * dt_ + sc2 * dxi2;
    const Complex c0 = -sc1 * dxi1 * alpha - sc2 * dxi2 * alpha_c;
    const double bracket_loss = 0.5 * (c1_ + c2_) * std::norm(alpha);

    auto offdiag = [&](std::size_t n) {
        Complex v = (1.0 + c0) * psi[n];
        if (n + 1 < d) v += ca * sqrt_n_[n + 1] * psi[n + 1];
        if (n > 0) v += cc * sqrt_n_[n] * psi[n - 1];
        return v;
    };

    if (split) {
        const double common = std::exp(-bracket_loss * dt_);
        for (std::size_t n = 0; n < d; ++n) increment_[n] = common * offdiag(n);
        const double tm = t + 0.5 * dt_;
        const double chi_mid = chi_at(p_, tm);
        half_diagonal(chi_mid);
        apply_drive(f_at(p_, tm));
        half_diagonal(chi_mid);
    } else if (scheme_ == StepScheme::exponential_euler) {
        const double common = std::exp(-bracket_loss * dt_);
        // exp(-i dt (Delta n + chi n^2)) by the ratio recurrence
        // r_n = exp(-i dt (Delta + chi (2n+1))), r_{n+1} = r_n exp(-2 i chi dt).
        Complex phase{1.0, 0.0};
        Complex ratio = std::exp(-i * dt_ * (p_.delta + chi));
        const Complex ratio_step = std::exp(-2.0 * i * chi * dt_);
        for (std::size_t n = 0; n < d; ++n) {
            increment_[n] = (common * damping_[n]) * phase * offdiag(n);
            phase *= ratio;
            ratio *= ratio_step;
        }
    } else {
        for (std::size_t n = 0; n < d; ++n) {
            const double nn = double(n);
            const Complex diag = -i * (p_.delta * nn + chi * nn * nn) - lossrate_[n] - bracket_loss;
            increment_[n] = offdiag(n) + diag * dt_ * psi[n];
        }
    }

    double new_norm2 = 0.0;
    for (std::size_t n = 0; n < d; ++n) {
        psi[n] = increment_[n];
        new_norm2 += std::norm(increment_[n]);
    }
    if (!std::isfinite(new_norm2)) {
        fail(ErrorKind::divergence, "non-finite amplitude in diffusion step at t=" + std::to_string(t));
    }
    const double new_norm = std::sqrt(new_norm2);
    const double defect = std::abs(new_norm - 1.0);
    if (renorm_) psi *= Complex{1.0 / new_norm, 0.0};
    return defect;
}

FockVector qsd_step(const FockVector& psi, double t, const TrajectoryConfig& cfg, const ModelParams& p,
                    Complex dxi1, Complex dxi2) {
    cfg.validate();
    p.validate();
    require(psi.dim() == cfg.dim, ErrorKind::dimension_mismatch, "state and configuration truncations differ");
    const double guard = stability_guard(cfg.scheme, cfg.dt, cfg.dim, p);
    if (guard > kStabilityLimit) {
        fail(ErrorKind::step_size, "step size violates the stability guard (" + std::to_string(guard) + " > " +
                                       std::to_string(kStabilityLimit) + ")");
    }
    QsdStepper stepper(p, cfg.dim, cfg.dt, cfg.scheme, cfg.renorm);
    FockVector out = psi;
    stepper.step(out, t, dxi1, dxi2);
    return out;
}

TrajectoryRecord run_trajectory(const TrajectoryConfig& cfg, const ModelParams& p, const FockVector& psi0,
                                const NoiseStream& stream, const ObserverHook* hook) {
    cfg.validate();
    p.validate();
    require(psi0.dim() == cfg.dim, ErrorKind::dimension_mismatch, "initial state and configuration truncations differ");
    require(std::abs(psi0.norm() - 1.0) <= 1e-10, ErrorKind::contract_violation, "initial state must be normalized");

    const auto period = modulation_period(p);
    const double dt = effective_step(cfg, p);
    const double guard = stability_guard(cfg.scheme, dt, cfg.dim, p);
    if (guard > kStabilityLimit) {
        fail(ErrorKind::step_size, "step size " + std::to_string(dt) + " violates the stability guard (" +
                                       std::to_string(guard) + " > " + std::to_string(kStabilityLimit) + ")");
    }
    const auto n_steps = static_cast<std::size_t>(std::ceil(cfg.t_final / dt - 1e-9));

    TrajectoryRecord rec;
    rec.dt = dt;
    rec.steps = n_steps;
    rec.poincare.provenance = SectionProvenance::quantum;
    rec.poincare.t0 = cfg.poincare_t0;
    rec.poincare.skipped = cfg.poincare_skip;

    std::size_t strobe_first = 0;
    std::size_t strobe_stride = 0;
    if (period) {
        rec.poincare.period = *period;
        strobe_stride = static_cast<std::size_t>(std::llround(*period / dt));
        strobe_first = static_cast<std::size_t>(std::llround(cfg.poincare_t0 / dt));
        if (std::abs(double(strobe_first) * dt - cfg.poincare_t0) > 1e-9 * std::max(1.0, cfg.poincare_t0)) {
            fail(ErrorKind::invalid_parameter, "poincare_t0 must be a whole number of steps");
        }
    }

    const std::size_t n_samples = n_steps / cfg.sample_every + 2;
    rec.times.reserve(n_samples);
    rec.observables.reserve(n_samples);
    rec.norm_defects.reserve(n_samples);

    QsdStepper stepper(p, cfg.dim, dt, cfg.scheme, cfg.renorm);
    const bool two_channels = stepper.needs_second_channel();
    FockVector psi = psi0;
    FockVector scratch(cfg.dim);
    double last_defect = 0.0;
    std::size_t hook_next = 0;

    auto normalized_view = [&]() -> const FockVector& {
        if (cfg.renorm) return psi;
        scratch = psi;
        scratch.normalize();
        return scratch;
    };

    for (std::size_t k = 0;; ++k) {
        const double t = double(k) * dt;
        const bool at_sample = (k % cfg.sample_every == 0) || k == n_steps;
        const bool at_strobe =
            period && k >= strobe_first && (k - strobe_first) % strobe_stride == 0 &&
            (k - strobe_first) / strobe_stride >= cfg.poincare_skip;
        const bool at_hook = hook && hook_next < hook->steps.size() && hook->steps[hook_next] == k;

        if (at_sample || at_strobe || at_hook) {
            const FockVector& state = normalized_view();
            if (at_sample) {
                rec.times.push_back(t);
                rec.observables.push_back(expectation_ladder(state));
                rec.norm_defects.push_back(last_defect);
                const double leak = state.top_decile_population();
                rec.leakage = std::max(rec.leakage, leak);
                if (leak > cfg.leakage_threshold) {
                    fail(ErrorKind::truncation, "truncation leakage " + std::to_string(leak) + " exceeds " +
                                                    std::to_string(cfg.leakage_threshold) + " at t=" +
                                                    std::to_string(t) + " (dim=" + std::to_string(cfg.dim) + ")");
                }
            }
            if (at_strobe) {
                const Complex a = mean_annihilation(state);
                rec.poincare.points.push_back({a.real(), a.imag()});
            }
            while (hook && hook_next < hook->steps.size() && hook->steps[hook_next] == k) {
                hook->callback(k, t, state);
                ++hook_next;
            }
        }
        if (k == n_steps) break;

        const Complex dxi1 = stream.increment(k, 0, dt);
        const Complex dxi2 = two_channels ? stream.increment(k, 1, dt) : Complex{0.0, 0.0};
        last_defect = stepper.step(psi, t, dxi1, dxi2);
        if (!cfg.renorm && last_defect > 0.1) {
            fail(ErrorKind::divergence, "norm drifted by " + std::to_string(last_defect) +
                                            " without renormalization at t=" + std::to_string(t + dt));
        }
    }
    rec.final_state = psi;
    return rec;
}

PoincareSection quantum_poincare(const TrajectoryRecord& record) {
    if (!(record.poincare.period > 0.0)) {
        fail(ErrorKind::no_section, "trajectory has no modulation period, so no Poincare section");
    }
    return record.poincare;
}

void write_observables_csv(std::ostream& out, const std::vector<double>& times,
                           const std::vector<Observables>& observables, const std::vector<double>& norm_defects) {
    out << "t,mean_n,re_a,im_a,mean_n2,mandel_q,norm_defect\n";
    out << std::setprecision(17);
    for (std::size_t k = 0; k < times.size(); ++k) {
        const auto& o = observables[k];
        out << times[k] << ',' << o.mean_n << ',' << o.mean_a.real() << ',' << o.mean_a.imag() << ','
            << o.mean_n2 << ',' << o.mandel_q << ',' << (k < norm_defects.size() ? norm_defects[k] : 0.0) << '\n';
    }
}

void write_section_csv(std::ostream& out, const PoincareSection& section) {
    out << "n,x,y\n";
    out << std::setprecision(17);
    for (std::size_t k = 0; k < section.points.size(); ++k) {
        out << (section.skipped + k) << ',' << section.points[k].x << ',' << section.points[k].y << '\n';
    }
}

}  // namespace kerrchaos
