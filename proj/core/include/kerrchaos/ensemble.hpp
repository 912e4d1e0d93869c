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
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "kerrchaos/fock.hpp"
#include "kerrchaos/master.hpp"
#include "kerrchaos/model.hpp"
#include "kerrchaos/qsd.hpp"
#include "kerrchaos/wigner.hpp"

namespace kerrchaos {

struct EnsembleConfig {
    std::size_t n_traj = 1000;
    TrajectoryConfig base;
    /// Requested density snapshot times; each is taken at the nearest step of
    /// the effective dt.
    std::vector<double> snapshot_times;
    std::uint64_t master_seed = 1;
    std::size_t workers = 1;

    void validate() const;
};

struct ObservableErrors {
    double mean_n = 0.0;
    double re_a = 0.0;
    double im_a = 0.0;
    double mean_n2 = 0.0;
};

struct EnsembleResult {
    std::vector<double> times;
    std::vector<Observables> mean_observables;
    std::vector<ObservableErrors> standard_errors;
    std::vector<double> requested_snapshot_times;
    std::vector<DensitySnapshot> snapshots;  ///< .t is the step-aligned time actually used
    double leakage_max = 0.0;
    std::size_t n_traj = 0;
    double dt = 0.0;
};

/// Runs trajectories 0..n_traj-1 with streams (master_seed, index) and
/// averages them. Trajectories are integrated in fixed-size blocks and every
/// sum is reduced in ascending index order, so the result is bit-identical
/// for any worker count. A failing trajectory aborts the run; the error names
/// the lowest failing index and the seed.
EnsembleResult run_ensemble(const EnsembleConfig& cfg, const ModelParams& p, const FockVector& psi0);

/// Index of the snapshot taken for `t` (a requested or an aligned time);
/// unknown times raise unknown_snapshot.
std::size_t snapshot_index(const EnsembleResult& res, double t);

WignerGrid snapshot_wigner(const EnsembleResult& res, double t, const GridSpec& spec, std::size_t workers = 1);

struct InterferenceReport {
    double t = 0.0;
    double min_w = 0.0;
    double negativity = 0.0;
    bool flagged = false;  ///< min W < -1e-3 (2/pi)
};

inline constexpr double kInterferenceFlag = -1e-3 * 2.0 / 3.14159265358979323846;

/// Negativity metrics for every snapshot (at least two are required).
std::vector<InterferenceReport> interference_scan(const EnsembleResult& res, const GridSpec& spec,
                                                  std::size_t workers = 1);

/// CSV: t,se_mean_n,se_re_a,se_im_a,se_mean_n2
void write_standard_errors_csv(std::ostream& out, const EnsembleResult& res);
/// CSV: t,min_w,negativity,flagged
void write_interference_csv(std::ostream& out, const std::vector<InterferenceReport>& reports);

}  // namespace kerrchaos
