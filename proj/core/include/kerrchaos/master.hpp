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
#include <iosfwd>
#include <vector>

#include "kerrchaos/fock.hpp"
#include "kerrchaos/model.hpp"

namespace kerrchaos {

// Dense Lindblad integration for small truncations. Serves as ground truth
// for the trajectory ensembles, so it favours plain fixed-step RK4 over speed.

struct MasterConfig {
    double dt = 1e-3;
    double t_final = 10.0;
    std::size_t dim = 30;
    std::size_t sample_every = 10;
    std::vector<double> snapshot_times;

    void validate() const;
};

/// d rho/dt = -i [H(t), rho] + sum_i (L_i rho L_i+ - {L_i+ L_i, rho} / 2).
/// The output is Hermitian and traceless for Hermitian input.
DensityMatrix lindblad_rhs(const DensityMatrix& rho, double t, const ModelParams& p);

struct DensitySnapshot {
    double t = 0.0;
    DensityMatrix rho{2};
};

struct MasterResult {
    std::vector<double> times;
    std::vector<Observables> observables;
    std::vector<DensitySnapshot> snapshots;
    double max_trace_defect = 0.0;  ///< before per-step renormalization
    double max_hermiticity_defect = 0.0;
    DensityMatrix final_state{2};
};

/// RK4 in time; the trace is renormalized after every step and a defect above
/// 1e-6 is a step-size error.
MasterResult integrate_master(const DensityMatrix& rho0, const MasterConfig& cfg, const ModelParams& p);

/// Density snapshot text layout: a line `dim,<d>`, a line `t,<t>`, then d
/// rows of 2d comma-separated numbers re(rho_n0),im(rho_n0),re(rho_n1),...
void write_density(std::ostream& out, const DensitySnapshot& snapshot);
DensitySnapshot read_density(std::istream& in);

}  // namespace kerrchaos
