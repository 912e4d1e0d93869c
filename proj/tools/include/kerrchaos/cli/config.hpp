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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kerrchaos/model.hpp"
#include "kerrchaos/qsd.hpp"
#include "kerrchaos/wigner.hpp"

namespace kerrchaos::cli {

enum class Command { classical_poincare, lyapunov, trajectory, ensemble, wigner, scaling_check, validate };

std::string_view to_string(Command command) noexcept;
std::optional<Command> parse_command(std::string_view text) noexcept;

enum class InitialState { vacuum, coherent, fock };

std::string_view to_string(InitialState state) noexcept;
std::optional<InitialState> parse_initial_state(std::string_view text) noexcept;

/// Everything a run needs. Physical quantities are ratios to gamma.
struct RunConfig {
    Command command = Command::trajectory;
    std::string output_dir = "out";

    ModelParams params;
    double lambda = 1.0;  ///< scale factor applied to params (and the classical start)

    InitialState initial_state = InitialState::vacuum;
    double alpha0_re = 0.0;
    double alpha0_im = 0.0;
    std::size_t fock_n = 0;

    // numerics
    double dt = 1e-3;
    double t_final = 10.0;
    std::size_t dim = 32;
    std::size_t sample_every = 10;
    StepScheme scheme = StepScheme::exponential_euler;
    bool renorm = true;
    double leakage_threshold = 1e-4;
    std::size_t n_traj = 1000;
    std::uint64_t seed = 1;
    std::uint64_t trajectory_index = 0;

    // sections and Lyapunov
    double poincare_t0 = 0.0;
    std::size_t n_points = 1000;
    std::size_t skip_periods = 200;
    std::size_t horizon_periods = 2000;
    std::size_t transient_periods = 200;
    std::size_t renorm_periods = 1;
    double separation = 1e-8;

    // phase-space grids
    GridKind grid_kind = GridKind::cartesian;
    double grid_extent = 0.0;  ///< 0 selects the truncation-based default
    std::size_t grid_n0 = 256;
    std::size_t grid_n1 = 256;
    std::vector<double> snapshot_times;
    std::vector<double> contour_levels;
    std::string density_file;  ///< wigner: read rho from here instead of integrating

    // validate
    std::vector<double> check_times{2.0, 5.0, 10.0};
    double tolerance_se = 3.0;
    double tolerance_rel = 0.03;
    double overlap_threshold = 0.5;  ///< scaling-check pass mark

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Parses the flat `key = value` grammar: one assignment per line, `#`
/// comments, values are numbers, booleans, quoted strings, bare words or
/// `[a, b, ...]` number lists. Unknown keys, type mismatches and constraint
/// violations raise ErrorKind::config naming the key and the line.
RunConfig parse_config(std::string_view text);

/// Canonical text form; parse_config(serialize(c)) == c.
std::string serialize(const RunConfig& cfg);

/// Constraint checks shared by the parser and programmatic callers.
void validate(const RunConfig& cfg);

/// Model parameters after applying lambda.
ModelParams effective_params(const RunConfig& cfg);

/// Keys accepted by the parser, in canonical order.
std::vector<std::string> known_keys();

}  // namespace kerrchaos::cli
