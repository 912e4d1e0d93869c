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

#include "kerrchaos/noise.hpp"

#include <cmath>
#include <numbers>

namespace kerrchaos {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) noexcept {
    const std::uint64_t p = std::uint64_t(a) * std::uint64_t(b);
    hi = std::uint32_t(p >> 32);
    lo = std::uint32_t(p);
}

// 53-bit uniform in the open interval (0, 1).
inline double open_uniform(std::uint32_t hi, std::uint32_t lo) noexcept {
    const std::uint64_t bits = ((std::uint64_t(hi) << 32) | lo) >> 11;
    return (double(bits) + 0.5) * 0x1.0p-53;
}

}  // namespace

PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) noexcept {
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, ctr[0], hi0, lo0);
        mulhilo(kMul1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

std::array<double, 2> NoiseStream::standard_normals(std::uint64_t step_index,
                                                    std::uint32_t channel) const noexcept {
    const PhiloxCounter ctr{std::uint32_t(step_index), std::uint32_t(step_index >> 32),
                            std::uint32_t(trajectory_index_),
                            (std::uint32_t(trajectory_index_ >> 32) & 0x00FFFFFFu) | (channel << 24)};
    const PhiloxKey key{std::uint32_t(master_seed_), std::uint32_t(master_seed_ >> 32)};
    const PhiloxCounter r = philox4x32_10(ctr, key);
    const double u1 = open_uniform(r[0], r[1]);
    const double u2 = open_uniform(r[2], r[3]);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

Complex NoiseStream::increment(std::uint64_t step_index, std::uint32_t channel, double dt) const noexcept {
    const auto g = standard_normals(step_index, channel);
    const double s = std::sqrt(0.5 * dt);
    return {s * g[0], s * g[1]};
}

Complex sample_noise(const NoiseStream& stream, double dt) noexcept { return stream.increment(0, 0, dt); }

}  // namespace kerrchaos
