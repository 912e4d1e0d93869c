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

#include "kerrchaos/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <iomanip>
#include <optional>
#include <ostream>
#include <string>
#include <thread>

#include "kerrchaos/error.hpp"

namespace kerrchaos {

namespace {

// Fixed so the reduction order never depends on the worker count.
constexpr std::size_t kBlockSize = 32;

struct TrajectoryOutput {
    std::vector<Observables> observables;
    std::vector<FockVector> snapshots;
    double leakage = 0.0;
    std::optional<Error> error;
};

struct Moments {
    double n = 0.0, n_sq = 0.0;
    double re = 0.0, re_sq = 0.0;
    double im = 0.0, im_sq = 0.0;
    double n2 = 0.0, n2_sq = 0.0;

    void add(const Observables& o) {
        n += o.mean_n;
        n_sq += o.mean_n * o.mean_n;
        re += o.mean_a.real();
        re_sq += o.mean_a.real() * o.mean_a.real();
        im += o.mean_a.imag();
        im_sq += o.mean_a.imag() * o.mean_a.imag();
        n2 += o.mean_n2;
        n2_sq += o.mean_n2 * o.mean_n2;
    }
};

double standard_error(double sum, double sum_sq, double m) {
    if (m < 2.0) return 0.0;
    const double mean = sum / m;
    const double var = std::max(0.0, (sum_sq - m * mean * mean) / (m - 1.0));
    return std::sqrt(var / m);
}

}  // namespace

void EnsembleConfig::validate() const {
    require(n_traj >= 1, ErrorKind::invalid_parameter, "n_traj must be at least 1");
    require(workers >= 1, ErrorKind::invalid_parameter, "workers must be at least 1");
    base.validate();
    for (double t : snapshot_times) {
        require(t >= 0.0 && t <= base.t_final + 1e-12, ErrorKind::invalid_parameter,
                "snapshot time " + std::to_string(t) + " outside [0, t_final]");
    }
}

EnsembleResult run_ensemble(const EnsembleConfig& cfg, const ModelParams& p, const FockVector& psi0) {
    cfg.validate();
    p.validate();
    require(psi0.dim() == cfg.base.dim, ErrorKind::dimension_mismatch, "initial state and configuration truncations differ");

    const double dt = effective_step(cfg.base, p);
    const auto n_steps = static_cast<std::size_t>(std::ceil(cfg.base.t_final / dt - 1e-9));

    // Snapshot steps in ascending order, remembering which request each serves.
    std::vector<std::size_t> order(cfg.snapshot_times.size());
    for (std::size_t s = 0; s < order.size(); ++s) order[s] = s;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return cfg.snapshot_times[a] < cfg.snapshot_times[b]; });
    ObserverHook hook;
    std::vector<std::size_t> snap_step(order.size());
    for (std::size_t s = 0; s < order.size(); ++s) {
        const auto k = std::min<std::size_t>(n_steps, std::size_t(std::llround(cfg.snapshot_times[order[s]] / dt)));
        snap_step[s] = k;
        hook.steps.push_back(k);
    }

    EnsembleResult res;
    res.n_traj = cfg.n_traj;
    res.dt = dt;
    for (std::size_t s = 0; s < order.size(); ++s) {
        res.requested_snapshot_times.push_back(cfg.snapshot_times[order[s]]);
        res.snapshots.push_back({double(snap_step[s]) * dt, DensityMatrix(cfg.base.dim)});
    }

    std::vector<Moments> moments;
    std::vector<TrajectoryOutput> block(kBlockSize);

    auto run_one = [&](std::size_t index, TrajectoryOutput& out) {
        out = TrajectoryOutput{};
        try {
            ObserverHook local;
            local.steps = hook.steps;
            out.snapshots.reserve(hook.steps.size());
            local.callback = [&out](std::size_t, double, const FockVector& psi) { out.snapshots.push_back(psi); };
            const auto rec = run_trajectory(cfg.base, p, psi0, NoiseStream(cfg.master_seed, index),
                                            local.steps.empty() ? nullptr : &local);
            if (index == 0 && res.times.empty()) res.times = rec.times;
            out.observables = rec.observables;
            out.leakage = rec.leakage;
        } catch (const Error& e) {
            out.error = e;
        } catch (const std::exception& e) {
            out.error = Error(ErrorKind::divergence, e.what());
        }
    };

    for (std::size_t first = 0; first < cfg.n_traj; first += kBlockSize) {
        const std::size_t count = std::min(kBlockSize, cfg.n_traj - first);
        const std::size_t workers = std::min(cfg.workers, count);
        if (workers <= 1) {
            for (std::size_t j = 0; j < count; ++j) run_one(first + j, block[j]);
        } else {
            std::atomic<std::size_t> next{0};
            std::vector<std::jthread> pool;
            pool.reserve(workers);
            for (std::size_t w = 0; w < workers; ++w) {
                pool.emplace_back([&] {
                    for (std::size_t j = next.fetch_add(1); j < count; j = next.fetch_add(1)) run_one(first + j, block[j]);
                });
            }
        }

        for (std::size_t j = 0; j < count; ++j) {
            if (block[j].error) {
                const Error& e = *block[j].error;
                fail(e.kind(), "trajectory " + std::to_string(first + j) + " (master seed " +
                                   std::to_string(cfg.master_seed) + ") failed: " + e.what());
            }
        }
        for (std::size_t j = 0; j < count; ++j) {
            const auto& out = block[j];
            if (moments.empty()) moments.resize(out.observables.size());
            for (std::size_t s = 0; s < out.observables.size(); ++s) moments[s].add(out.observables[s]);
            for (std::size_t s = 0; s < out.snapshots.size(); ++s) accumulate_outer(res.snapshots[s].rho, out.snapshots[s], 1.0);
            res.leakage_max = std::max(res.leakage_max, out.leakage);
        }
    }

    const double m = double(cfg.n_traj);
    res.mean_observables.resize(moments.size());
    res.standard_errors.resize(moments.size());
    for (std::size_t s = 0; s < moments.size(); ++s) {
        const auto& mo = moments[s];
        Observables o;
        o.mean_n = mo.n / m;
        o.mean_a = {mo.re / m, mo.im / m};
        o.mean_n2 = mo.n2 / m;
        o.mandel_q = mandel_q(o.mean_n, o.mean_n2);
        res.mean_observables[s] = o;
        res.standard_errors[s] = {standard_error(mo.n, mo.n_sq, m), standard_error(mo.re, mo.re_sq, m),
                                  standard_error(mo.im, mo.im_sq, m), standard_error(mo.n2, mo.n2_sq, m)};
    }
    for (auto& snap : res.snapshots) snap.rho.scale(1.0 / m);
    return res;
}

std::size_t snapshot_index(const EnsembleResult& res, double t) {
    for (std::size_t s = 0; s < res.snapshots.size(); ++s) {
        const double tol = 1e-9 * std::max(1.0, std::abs(t));
        if (std::abs(res.requested_snapshot_times[s] - t) <= tol || std::abs(res.snapshots[s].t - t) <= tol) return s;
    }
    fail(ErrorKind::unknown_snapshot, "no density snapshot at t=" + std::to_string(t));
}

WignerGrid snapshot_wigner(const EnsembleResult& res, double t, const GridSpec& spec, std::size_t workers) {
    return wigner_from_density(res.snapshots[snapshot_index(res, t)].rho, spec, workers);
}

std::vector<InterferenceReport> interference_scan(const EnsembleResult& res, const GridSpec& spec, std::size_t workers) {
    require(res.snapshots.size() >= 2, ErrorKind::contract_violation, "interference scan needs at least two snapshots");
    std::vector<InterferenceReport> out;
    out.reserve(res.snapshots.size());
    for (const auto& snap : res.snapshots) {
        const WignerGrid g = wigner_from_density(snap.rho, spec, workers);
        InterferenceReport r;
        r.t = snap.t;
        r.min_w = min_value(g);
        r.negativity = negativity_volume(g);
        r.flagged = r.min_w < kInterferenceFlag;
        out.push_back(r);
    }
    return out;
}

void write_standard_errors_csv(std::ostream& out, const EnsembleResult& res) {
    out << "t,se_mean_n,se_re_a,se_im_a,se_mean_n2\n" << std::setprecision(17);
    for (std::size_t s = 0; s < res.times.size(); ++s) {
        const auto& e = res.standard_errors[s];
        out << res.times[s] << ',' << e.mean_n << ',' << e.re_a << ',' << e.im_a << ',' << e.mean_n2 << '\n';
    }
}

void write_interference_csv(std::ostream& out, const std::vector<InterferenceReport>& reports) {
    out << "t,min_w,negativity,flagged\n" << std::setprecision(17);
    for (const auto& r : reports) out << r.t << ',' << r.min_w << ',' << r.negativity << ',' << (r.flagged ? 1 : 0) << '\n';
}

}  // namespace kerrchaos
