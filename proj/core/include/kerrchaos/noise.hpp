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

#include <array>
#include <cstdint>

#include "kerrchaos/fock.hpp"

namespace kerrchaos {

/// Philox4x32-10 block: a keyed bijection on 128-bit counters.
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key) noexcept;

/// Complex Wiener increments for one trajectory.
///
/// Each increment is a pure function of (master_seed, trajectory_index,
/// step_index, channel): the seed is the Philox key and the remaining three
/// indices form the counter, so streams never overlap and no state is carried
/// between steps.
class NoiseStream {
public:
    NoiseStream(std::uint64_t master_seed, std::uint64_t trajectory_index) noexcept
        : master_seed_(master_seed), trajectory_index_(trajectory_index) {}

    std::uint64_t master_seed() const noexcept { return master_seed_; }
    std::uint64_t trajectory_index() const noexcept { return trajectory_index_; }

    /// Two independent standard normals from Box-Muller.
    std::array<double, 2> standard_normals(std::uint64_t step_index, std::uint32_t channel) const noexcept;

    /// d xi = sqrt(dt/2) (g1 + i g2): E[d xi] = 0, E[d xi^2] = 0, E[|d xi|^2] = dt.
    Complex increment(std::uint64_t step_index, std::uint32_t channel, double dt) const noexcept;

private:
    std::uint64_t master_seed_;
    std::uint64_t trajectory_index_;
};

/// First increment of channel 0; convenience for one-off draws.
Complex sample_noise(const NoiseStream& stream, double dt) noexcept;

}  // namespace kerrchaos
