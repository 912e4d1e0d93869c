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

#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "kerrchaos/ensemble.hpp"
#include "kerrchaos/error.hpp"
#include "kerrchaos/master.hpp"

using namespace kerrchaos;

namespace {

constexpr Complex kI{0.0, 1.0};

ModelParams kerr_set() {
    ModelParams p;
    p.delta = -1.0;
    p.chi0 = 0.3;
    p.f0 = 1.0;
    return p;
}

ModelParams linear_set() {
    ModelParams p;
    p.delta = -1.0;
    p.f0 = 1.0;
    return p;
}

// <a>(t) of the driven linear oscillator; independent of the initial state
// beyond <a>(0).
Complex linear_mean_a(const ModelParams& p, Complex a0, double t) {
    const Complex rate = 0.5 * p.gamma + kI * p.delta;
    const Complex ss = -kI * p.f0 / rate;
    return ss + (a0 - ss) * std::exp(-rate * t);
}

EnsembleConfig small_config(std::size_t n_traj) {
    EnsembleConfig c;
    c.n_traj = n_traj;
    c.base.dim = 16;
    c.base.dt = 1e-3;
    c.base.t_final = 2.0;
    c.base.sample_every = 250;
    c.master_seed = 42;
    return c;
}

}  // namespace

TEST_SUITE("ensemble") {

TEST_CASE("a one-trajectory ensemble is that trajectory") {
    const auto cfg = small_config(1);
    const auto res = run_ensemble(cfg, kerr_set(), FockVector::basis(0, 16));
    const auto rec = run_trajectory(cfg.base, kerr_set(), FockVector::basis(0, 16), NoiseStream(42, 0));
    REQUIRE(res.times == rec.times);
    for (std::size_t k = 0; k < rec.times.size(); ++k) {
        CHECK(res.mean_observables[k].mean_n == rec.observables[k].mean_n);
        CHECK(res.mean_observables[k].mean_a == rec.observables[k].mean_a);
        CHECK(res.mean_observables[k].mean_n2 == rec.observables[k].mean_n2);
    }
    CHECK(res.n_traj == 1);
    CHECK(res.leakage_max == rec.leakage);
}

TEST_CASE("linear response within three standard errors") {
    auto cfg = small_config(500);
    cfg.base.t_final = 5.0;
    cfg.base.sample_every = 500;
    const ModelParams p = linear_set();

    SUBCASE("number-state start gives a genuinely stochastic ensemble") {
        const auto res = run_ensemble(cfg, p, FockVector::basis(1, 16));
        for (std::size_t k = 1; k < res.times.size(); ++k) {
            const Complex d = res.mean_observables[k].mean_a - linear_mean_a(p, 0.0, res.times[k]);
            CHECK(std::abs(d.real()) <= 3.0 * res.standard_errors[k].re_a);
            CHECK(std::abs(d.imag()) <= 3.0 * res.standard_errors[k].im_a);
        }
    }
    SUBCASE("vacuum start is deterministic and follows the closed form") {
        cfg.base.scheme = StepScheme::strang_split;
        const auto res = run_ensemble(cfg, p, FockVector::basis(0, 16));
        for (std::size_t k = 0; k < res.times.size(); ++k) {
            CHECK(std::abs(res.mean_observables[k].mean_a - linear_mean_a(p, 0.0, res.times[k])) <= 1e-6);
            CHECK(res.standard_errors[k].re_a <= 1e-7);
        }
    }
}

TEST_CASE("scheduling invariance") {
    auto cfg = small_config(40);
    cfg.snapshot_times = {1.0, 2.0};
    ModelParams p = kerr_set();
    p.n_th = 0.1;
    cfg.workers = 1;
    const auto ref = run_ensemble(cfg, p, FockVector::basis(0, 16));
    for (std::size_t w : {4u, 16u}) {
        cfg.workers = w;
        const auto res = run_ensemble(cfg, p, FockVector::basis(0, 16));
        REQUIRE(res.times.size() == ref.times.size());
        for (std::size_t k = 0; k < ref.times.size(); ++k) {
            CHECK(res.mean_observables[k].mean_n == ref.mean_observables[k].mean_n);
            CHECK(res.mean_observables[k].mean_a == ref.mean_observables[k].mean_a);
            CHECK(res.standard_errors[k].mean_n == ref.standard_errors[k].mean_n);
        }
        for (std::size_t s = 0; s < ref.snapshots.size(); ++s)
            CHECK(res.snapshots[s].rho.matrix() == ref.snapshots[s].rho.matrix());
    }
}

TEST_CASE("snapshots") {
    auto cfg = small_config(64);
    cfg.snapshot_times = {0.5, 2.0};
    const auto res = run_ensemble(cfg, kerr_set(), FockVector::basis(0, 16));
    REQUIRE(res.snapshots.size() == 2);
    CHECK(res.requested_snapshot_times == cfg.snapshot_times);
    for (const auto& s : res.snapshots) {
        CHECK(std::abs(s.rho.trace() - 1.0) <= 1e-12);
        CHECK(s.rho.hermiticity_defect() <= 1e-12);
        CHECK(s.rho.min_eigenvalue() >= -1e-12);
        // the sample at the same time carries the online mean
        std::size_t k = 0;
        while (std::abs(res.times[k] - s.t) > 1e-9) ++k;
        CHECK(std::abs(s.rho.observables().mean_n - res.mean_observables[k].mean_n) <= 1e-10);
    }
    CHECK(snapshot_index(res, 2.0) == 1);
    try {
        snapshot_index(res, 1.0);
        FAIL("expected unknown_snapshot");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::unknown_snapshot);
    }
    CHECK_THROWS_AS(snapshot_wigner(res, 1.3, GridSpec{}), Error);
}

TEST_CASE("vacuum snapshot gives the vacuum gaussian") {
    auto cfg = small_config(8);
    cfg.snapshot_times = {1.0};
    ModelParams p;
    p.delta = 0.3;
    const auto res = run_ensemble(cfg, p, FockVector::basis(0, 16));
    GridSpec g;
    g.extent = 3.0;
    g.n0 = g.n1 = 65;
    const auto w = snapshot_wigner(res, 1.0, g);
    for (std::size_t j = 0; j < 65; ++j)
        for (std::size_t i = 0; i < 65; ++i) {
            const double r2 = w.x(i, j) * w.x(i, j) + w.y(i, j) * w.y(i, j);
            CHECK(std::abs(w.at(i, j) - 2.0 / 3.14159265358979323846 * std::exp(-2.0 * r2)) <= 1e-10);
        }
}

TEST_CASE("interference scan") {
    GridSpec g;
    g.extent = 5.0;
    g.n0 = g.n1 = 96;
    SUBCASE("linear model never flags") {
        auto cfg = small_config(100);
        cfg.base.t_final = 4.0;
        cfg.snapshot_times = {1.0, 2.0, 3.0, 4.0};
        const auto res = run_ensemble(cfg, linear_set(), FockVector::basis(0, 16));
        const auto scan = interference_scan(res, g);
        REQUIRE(scan.size() == 4);
        for (const auto& r : scan) CHECK(!r.flagged);
        std::ostringstream out;
        write_interference_csv(out, scan);
        CHECK(out.str().rfind("t,min_w,negativity,flagged\n", 0) == 0);
    }
    SUBCASE("steady kerr state never flags") {
        // The M -> infinity ensemble state, from the master equation; finite
        // ensembles carry sampling noise of order 1/sqrt(M) in W.
        MasterConfig mc;
        mc.dim = 24;
        mc.t_final = 20.0;
        mc.sample_every = 20000;
        mc.snapshot_times = {15.0, 20.0};
        const auto m = integrate_master(DensityMatrix::pure(FockVector::basis(0, 24)), mc, kerr_set());
        EnsembleResult res;
        res.snapshots = m.snapshots;
        res.requested_snapshot_times = mc.snapshot_times;
        for (const auto& r : interference_scan(res, g)) {
            CHECK(!r.flagged);
            CHECK(r.min_w >= -1e-12);
        }
    }
    SUBCASE("a number-state start flags at t = 0") {
        auto cfg = small_config(4);
        cfg.snapshot_times = {0.0, 2.0};
        const auto res = run_ensemble(cfg, linear_set(), FockVector::basis(1, 16));
        CHECK(interference_scan(res, g).front().flagged);
    }
    SUBCASE("a single snapshot is refused") {
        auto cfg = small_config(4);
        cfg.snapshot_times = {1.0};
        const auto res = run_ensemble(cfg, linear_set(), FockVector::basis(0, 16));
        CHECK_THROWS_AS(interference_scan(res, g), Error);
    }
}

TEST_CASE("a failing trajectory aborts the run with its index and seed") {
    auto cfg = small_config(6);
    cfg.base.dim = 8;
    ModelParams p = linear_set();
    p.f0 = 4.0;
    try {
        run_ensemble(cfg, p, FockVector::basis(0, 8));
        FAIL("expected truncation");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::truncation);
        const std::string msg = e.what();
        CHECK(msg.find("trajectory 0") != std::string::npos);
        CHECK(msg.find("master seed 42") != std::string::npos);
    }
}

TEST_CASE("configuration checks") {
    auto cfg = small_config(0);
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg = small_config(2);
    cfg.snapshot_times = {3.0};
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg = small_config(2);
    cfg.workers = 0;
    CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("standard error layout") {
    const auto res = run_ensemble(small_config(4), kerr_set(), FockVector::basis(0, 16));
    std::ostringstream out;
    write_standard_errors_csv(out, res);
    CHECK(out.str().rfind("t,se_mean_n,se_re_a,se_im_a,se_mean_n2\n", 0) == 0);
}

}  // TEST_SUITE
