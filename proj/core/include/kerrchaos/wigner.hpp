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
#include <optional>
#include <string_view>
#include <vector>

#include "kerrchaos/fock.hpp"

namespace kerrchaos {

enum class GridKind { cartesian, polar };

std::string_view to_string(GridKind kind) noexcept;
std::optional<GridKind> parse_grid_kind(std::string_view text) noexcept;

/// Phase-space sampling. Cartesian: nodes x, y in [-extent, extent]
/// (n0 x n1 nodes). Polar: r in [0, extent], theta in [0, 2 pi) (n0 radii,
/// n1 angles).
inline constexpr std::size_t kMinGridNodes = 64;

struct GridSpec {
    GridKind kind = GridKind::cartesian;
    double extent = 4.0;
    std::size_t n0 = 256;
    std::size_t n1 = 256;

    void validate() const;
};

/// Symmetric square covering |x|, |y| <= sqrt(dim)/sqrt(2) + 3 with 256^2 nodes.
GridSpec default_grid(std::size_t dim);

/// Real quasidistribution W sampled on a grid; values are row-major with the
/// second axis outer: values[i1 * n0 + i0].
struct WignerGrid {
    GridKind kind = GridKind::cartesian;
    std::vector<double> axis0;  ///< x or r
    std::vector<double> axis1;  ///< y or theta
    std::vector<double> values;
    std::size_t dim_used = 0;
    double max_imag_residue = 0.0;

    double at(std::size_t i0, std::size_t i1) const { return values[i1 * axis0.size() + i0]; }
    /// Cartesian position of node (i0, i1).
    double x(std::size_t i0, std::size_t i1) const;
    double y(std::size_t i0, std::size_t i1) const;
};

/// Sqrt(n!/(n+k)!) x^{k/2} e^{-x/2} L_n^k(x), the bounded Laguerre function,
/// evaluated by the upward three-term recurrence in n with dynamic rescaling.
double laguerre_function(std::size_t n, std::size_t k, double x);

/// Phase-space coefficient of |n><m| (evaluated as W_mn):
/// (2/pi) (-1)^n sqrt(n!/m!) e^{i(m-n) theta} (2r)^{m-n} e^{-2 r^2} L_n^{m-n}(4 r^2) for m >= n,
/// and the mirrored form for n > m, so that W_mn = conj(W_nm).
Complex wigner_coeff(std::size_t m, std::size_t n, double r, double theta);

/// W(r, theta) = sum_{n,m} rho_nm W_mn(r, theta) on every grid node, split by
/// rows over `workers` threads (results do not depend on the split). An
/// imaginary residue above 1e-6 signals a non-Hermitian input and raises an
/// inconsistent-density error.
WignerGrid wigner_from_density(const DensityMatrix& rho, const GridSpec& spec, std::size_t workers = 1);

/// Single-point evaluation, same convention as the grid.
double wigner_at(const DensityMatrix& rho, double x, double y);

/// Trapezoidal quadrature of W (Cartesian) or of W r dr dtheta (polar).
double integrate_grid(const WignerGrid& grid);
double integrate_abs_grid(const WignerGrid& grid);
double min_value(const WignerGrid& grid);
double max_value(const WignerGrid& grid);

/// integral |W| - 1, clamped at zero.
double negativity_volume(const WignerGrid& grid);

/// CSV: x,y,W (polar nodes are converted to Cartesian positions).
void write_wigner_csv(std::ostream& out, const WignerGrid& grid);
/// Gnuplot `nonuniform matrix` text: first row n0 then the axis0 values, then
/// one row per axis1 value.
void write_wigner_matrix(std::ostream& out, const WignerGrid& grid);

}  // namespace kerrchaos
