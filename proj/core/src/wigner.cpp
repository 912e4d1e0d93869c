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

#include "kerrchaos/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <string>
#include <thread>

#include "kerrchaos/error.hpp"

namespace kerrchaos {

namespace {

constexpr double kTwoOverPi = 2.0 / std::numbers::pi;
constexpr double kRescaleAbove = 1e150;
constexpr double kRescaleFactor = 1e-150;
const double kRescaleLog = 150.0 * std::log(10.0);

// Walks l_n^k(x) for n = 0, 1, ... keeping value = mantissa * exp(log_scale).
class LaguerreWalker {
public:
    LaguerreWalker(std::size_t k, double x) : k_(double(k)), x_(x) {
        if (x == 0.0) {
            zero_ = k != 0;
            log_scale_ = 0.0;
        } else {
            log_scale_ = 0.5 * k_ * std::log(x) - 0.5 * x - 0.5 * std::lgamma(k_ + 1.0);
        }
        factor_ = zero_ ? 0.0 : std::exp(log_scale_);
    }

    double value() const noexcept { return cur_ * factor_; }

    void advance() noexcept {
        if (zero_) return;
        // l_{n+1} = ((2n+k+1-x) l_n - sqrt(n (n+k)) l_{n-1}) / sqrt((n+1)(n+k+1))
        const double next =
            ((2.0 * n_ + k_ + 1.0 - x_) * cur_ - std::sqrt(n_ * (n_ + k_)) * prev_) / std::sqrt((n_ + 1.0) * (n_ + k_ + 1.0));
        prev_ = cur_;
        cur_ = next;
        n_ += 1.0;
        if (std::abs(cur_) > kRescaleAbove) {
            cur_ *= kRescaleFactor;
            prev_ *= kRescaleFactor;
            log_scale_ += kRescaleLog;
            factor_ = std::exp(log_scale_);
        }
    }

private:
    double k_;
    double x_;
    double n_ = 0.0;
    double prev_ = 0.0;
    double cur_ = 1.0;
    double log_scale_ = 0.0;
    double factor_ = 1.0;
    bool zero_ = false;
};

// rho split into bands k = m - n with the (-1)^n sign folded in.
struct Bands {
    std::size_t dim = 0;
    std::vector<std::vector<Complex>> upper;  // (-1)^n rho_{n, n+k}
    std::vector<std::vector<Complex>> lower;  // (-1)^n rho_{n+k, n}
    std::vector<bool> active;
};

Bands split_bands(const DensityMatrix& rho) {
    Bands b;
    b.dim = rho.dim();
    b.upper.resize(b.dim);
    b.lower.resize(b.dim);
    b.active.resize(b.dim);
    for (std::size_t k = 0; k < b.dim; ++k) {
        double band_max = 0.0;
        for (std::size_t n = 0; n + k < b.dim; ++n) {
            const double sign = (n % 2 == 0) ? 1.0 : -1.0;
            b.upper[k].push_back(sign * rho(n, n + k));
            b.lower[k].push_back(sign * rho(n + k, n));
            band_max = std::max({band_max, std::abs(rho(n, n + k)), std::abs(rho(n + k, n))});
        }
        b.active[k] = band_max > 1e-15;
    }
    return b;
}

// Full complex sum sum_{n,m} rho_nm W_mn at polar point (r, theta).
Complex evaluate(const Bands& b, double r, double theta) {
    const double x = 4.0 * r * r;
    Complex total{0.0, 0.0};
    for (std::size_t k = 0; k < b.dim; ++k) {
        if (!b.active[k]) continue;
        if (x == 0.0 && k > 0) break;
        LaguerreWalker walker(k, x);
        Complex up{0.0, 0.0};
        Complex lo{0.0, 0.0};
        const auto& u = b.upper[k];
        const auto& l = b.lower[k];
        for (std::size_t n = 0; n < u.size(); ++n) {
            const double v = walker.value();
            up += u[n] * v;
            lo += l[n] * v;
            walker.advance();
        }
        if (k == 0) {
            total += up;
        } else {
            const Complex ph{std::cos(double(k) * theta), std::sin(double(k) * theta)};
            total += ph * up + std::conj(ph) * lo;
        }
    }
    return kTwoOverPi * total;
}

}  // namespace

std::string_view to_string(GridKind kind) noexcept { return kind == GridKind::polar ? "polar" : "cartesian"; }

std::optional<GridKind> parse_grid_kind(std::string_view text) noexcept {
    if (text == "cartesian") return GridKind::cartesian;
    if (text == "polar") return GridKind::polar;
    return std::nullopt;
}

void GridSpec::validate() const {
    require(extent > 0.0 && std::isfinite(extent), ErrorKind::invalid_parameter, "grid extent must be positive");
    require(n0 >= kMinGridNodes && n1 >= kMinGridNodes, ErrorKind::invalid_parameter,
            "grid needs at least " + std::to_string(kMinGridNodes) + " nodes per axis");
}

GridSpec default_grid(std::size_t dim) {
    return {GridKind::cartesian, std::sqrt(double(dim)) / std::sqrt(2.0) + 3.0, 256, 256};
}

double WignerGrid::x(std::size_t i0, std::size_t i1) const {
    return kind == GridKind::cartesian ? axis0[i0] : axis0[i0] * std::cos(axis1[i1]);
}

double WignerGrid::y(std::size_t i0, std::size_t i1) const {
    return kind == GridKind::cartesian ? axis1[i1] : axis0[i0] * std::sin(axis1[i1]);
}

double laguerre_function(std::size_t n, std::size_t k, double x) {
    require(x >= 0.0, ErrorKind::invalid_parameter, "Laguerre argument must be non-negative");
    LaguerreWalker walker(k, x);
    for (std::size_t j = 0; j < n; ++j) walker.advance();
    return walker.value();
}

Complex wigner_coeff(std::size_t m, std::size_t n, double r, double theta) {
    const std::size_t lo = std::min(m, n);
    const std::size_t k = std::max(m, n) - lo;
    const double l = laguerre_function(lo, k, 4.0 * r * r);
    const double sign = (lo % 2 == 0) ? 1.0 : -1.0;
    const double phase = (double(m) - double(n)) * theta;
    return kTwoOverPi * sign * l * Complex{std::cos(phase), std::sin(phase)};
}

WignerGrid wigner_from_density(const DensityMatrix& rho, const GridSpec& spec, std::size_t workers) {
    spec.validate();
    const Bands bands = split_bands(rho);

    WignerGrid g;
    g.kind = spec.kind;
    g.dim_used = rho.dim();
    g.axis0.resize(spec.n0);
    g.axis1.resize(spec.n1);
    if (spec.kind == GridKind::cartesian) {
        for (std::size_t i = 0; i < spec.n0; ++i) g.axis0[i] = -spec.extent + 2.0 * spec.extent * double(i) / double(spec.n0 - 1);
        for (std::size_t j = 0; j < spec.n1; ++j) g.axis1[j] = -spec.extent + 2.0 * spec.extent * double(j) / double(spec.n1 - 1);
    } else {
        for (std::size_t i = 0; i < spec.n0; ++i) g.axis0[i] = spec.extent * double(i) / double(spec.n0 - 1);
        for (std::size_t j = 0; j < spec.n1; ++j) g.axis1[j] = 2.0 * std::numbers::pi * double(j) / double(spec.n1);
    }
    g.values.assign(spec.n0 * spec.n1, 0.0);
    std::vector<double> residue_by_row(spec.n1, 0.0);

    auto fill_rows = [&](std::size_t row_begin, std::size_t row_end) {
        for (std::size_t j = row_begin; j < row_end; ++j) {
            double worst = 0.0;
            for (std::size_t i = 0; i < spec.n0; ++i) {
                double r, theta;
                if (spec.kind == GridKind::cartesian) {
                    r = std::hypot(g.axis0[i], g.axis1[j]);
                    theta = std::atan2(g.axis1[j], g.axis0[i]);
                } else {
                    r = g.axis0[i];
                    theta = g.axis1[j];
                }
                const Complex w = evaluate(bands, r, theta);
                g.values[j * spec.n0 + i] = w.real();
                worst = std::max(worst, std::abs(w.imag()));
            }
            residue_by_row[j] = worst;
        }
    };

    workers = std::max<std::size_t>(1, std::min(workers, spec.n1));
    if (workers == 1) {
        fill_rows(0, spec.n1);
    } else {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (spec.n1 + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t b = w * chunk;
            const std::size_t e = std::min(spec.n1, b + chunk);
            if (b < e) pool.emplace_back(fill_rows, b, e);
        }
    }
    g.max_imag_residue = *std::max_element(residue_by_row.begin(), residue_by_row.end());
    if (g.max_imag_residue > 1e-6) {
        fail(ErrorKind::inconsistent_density,
             "Wigner sum has imaginary residue " + std::to_string(g.max_imag_residue) + "; density is not Hermitian");
    }
    return g;
}

double wigner_at(const DensityMatrix& rho, double x, double y) {
    const Bands bands = split_bands(rho);
    return evaluate(bands, std::hypot(x, y), std::atan2(y, x)).real();
}

namespace {

// Trapezoid weights along one axis.
std::vector<double> trapezoid(const std::vector<double>& axis) {
    std::vector<double> w(axis.size(), 0.0);
    for (std::size_t i = 0; i + 1 < axis.size(); ++i) {
        const double h = axis[i + 1] - axis[i];
        w[i] += 0.5 * h;
        w[i + 1] += 0.5 * h;
    }
    return w;
}

template <class F>
double integrate_with(const WignerGrid& g, F&& transform) {
    const std::size_t n0 = g.axis0.size();
    const std::size_t n1 = g.axis1.size();
    double total = 0.0;
    if (g.kind == GridKind::cartesian) {
        const auto w0 = trapezoid(g.axis0);
        const auto w1 = trapezoid(g.axis1);
        for (std::size_t j = 0; j < n1; ++j)
            for (std::size_t i = 0; i < n0; ++i) total += w0[i] * w1[j] * transform(g.values[j * n0 + i]);
    } else {
        // periodic in theta: uniform weights 2 pi / n1
        const auto w0 = trapezoid(g.axis0);
        const double wt = 2.0 * std::numbers::pi / double(n1);
        for (std::size_t j = 0; j < n1; ++j)
            for (std::size_t i = 0; i < n0; ++i) total += w0[i] * g.axis0[i] * wt * transform(g.values[j * n0 + i]);
    }
    return total;
}

}  // namespace

double integrate_grid(const WignerGrid& grid) {
    return integrate_with(grid, [](double v) { return v; });
}

double integrate_abs_grid(const WignerGrid& grid) {
    return integrate_with(grid, [](double v) { return std::abs(v); });
}

double min_value(const WignerGrid& grid) { return *std::min_element(grid.values.begin(), grid.values.end()); }
double max_value(const WignerGrid& grid) { return *std::max_element(grid.values.begin(), grid.values.end()); }

double negativity_volume(const WignerGrid& grid) { return std::max(0.0, integrate_abs_grid(grid) - 1.0); }

void write_wigner_csv(std::ostream& out, const WignerGrid& grid) {
    out << "x,y,W\n" << std::setprecision(17);
    for (std::size_t j = 0; j < grid.axis1.size(); ++j)
        for (std::size_t i = 0; i < grid.axis0.size(); ++i)
            out << grid.x(i, j) << ',' << grid.y(i, j) << ',' << grid.at(i, j) << '\n';
}

void write_wigner_matrix(std::ostream& out, const WignerGrid& grid) {
    out << std::setprecision(17) << grid.axis0.size();
    for (double a : grid.axis0) out << ' ' << a;
    out << '\n';
    for (std::size_t j = 0; j < grid.axis1.size(); ++j) {
        out << grid.axis1[j];
        for (std::size_t i = 0; i < grid.axis0.size(); ++i) out << ' ' << grid.at(i, j);
        out << '\n';
    }
}

}  // namespace kerrchaos
