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
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include "kerrchaos/contour.hpp"
#include "kerrchaos/error.hpp"
#include "kerrchaos/wigner.hpp"

using namespace kerrchaos;

namespace {

constexpr double kTwoOverPi = 2.0 / std::numbers::pi;

DensityMatrix mixture01(std::size_t dim) {
    DensityMatrix rho(dim);
    rho(0, 0) = 0.5;
    rho(1, 1) = 0.5;
    return rho;
}

DensityMatrix random_density(std::size_t dim, unsigned seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> g;
    Eigen::MatrixXcd a(dim, dim);
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c) a(r, c) = Complex(g(gen), g(gen));
    Eigen::MatrixXcd rho = a * a.adjoint();
    rho /= rho.trace().real();
    return DensityMatrix(std::move(rho));
}

// Hermite functions of the quadrature x = Re(alpha), normalized so that
// |phi_0(x)|^2 = sqrt(2/pi) e^{-2x^2}.
std::vector<double> hermite_functions(std::size_t count, double x) {
    const double q = std::sqrt(2.0) * x;
    std::vector<double> h(count);
    h[0] = std::pow(2.0 / std::numbers::pi, 0.25) * std::exp(-x * x);
    if (count > 1) h[1] = std::sqrt(2.0) * q * h[0];
    for (std::size_t n = 2; n < count; ++n)
        h[n] = std::sqrt(2.0 / double(n)) * q * h[n - 1] - std::sqrt(double(n - 1) / double(n)) * h[n - 2];
    return h;
}

double position_density(const DensityMatrix& rho, double x) {
    const auto h = hermite_functions(rho.dim(), x);
    Complex sum{0.0, 0.0};
    for (std::size_t n = 0; n < rho.dim(); ++n)
        for (std::size_t m = 0; m < rho.dim(); ++m) sum += rho(n, m) * h[n] * h[m];
    return sum.real();
}

GridSpec square(double extent, std::size_t n) {
    GridSpec g;
    g.extent = extent;
    g.n0 = g.n1 = n;
    return g;
}

}  // namespace

TEST_SUITE("wigner") {

TEST_CASE("coefficient examples") {
    for (double theta : {0.0, 1.1, -2.0}) {
        CHECK(std::abs(wigner_coeff(0, 0, 0.0, theta) - kTwoOverPi) <= 1e-15);
        CHECK(wigner_coeff(1, 1, 0.0, theta).real() == doctest::Approx(-kTwoOverPi).epsilon(1e-15));
    }
    for (double r : {0.1, 0.7, 1.9})
        CHECK(std::abs(wigner_coeff(0, 0, r, 0.3) - kTwoOverPi * std::exp(-2.0 * r * r)) <= 1e-15);
    // (2/pi) (2r) e^{-2r^2} L_0^1(4r^2) at r = 1/2
    const Complex w10 = wigner_coeff(1, 0, 0.5, 0.0);
    CHECK(w10.real() == doctest::Approx(0.386129).epsilon(1e-6));
    CHECK(std::abs(w10 - kTwoOverPi * std::exp(-0.5)) <= 1e-15);
    CHECK(std::abs(w10.imag()) <= 1e-16);
}

TEST_CASE("coefficient conjugate symmetry") {
    for (std::size_t m = 0; m < 40; m += 3)
        for (std::size_t n = 0; n < 40; n += 5)
            for (double r : {0.2, 1.3, 3.1}) {
                const Complex a = wigner_coeff(m, n, r, 0.77);
                const Complex b = std::conj(wigner_coeff(n, m, r, 0.77));
                CHECK(std::abs(a - b) <= 1e-14 * std::max(1.0, std::abs(a)));
            }
}

TEST_CASE("laguerre function against the explicit sum") {
    // sqrt(n!/(n+k)!) x^{k/2} e^{-x/2} L_n^k(x), L_n^k(x) = sum_j (-1)^j C(n+k, n-j) x^j / j!
    auto direct = [](std::size_t n, std::size_t k, double x) {
        long double sum = 0.0L, binom = 1.0L;
        for (std::size_t j = 0; j < n; ++j) binom = binom * (long double)(n + k - j) / (long double)(j + 1);
        // binom = C(n+k, n)
        long double term = binom;
        for (std::size_t j = 0;; ++j) {
            sum += term;
            if (j == n) break;
            term *= -(long double)x * (long double)(n - j) / ((long double)(k + j + 1) * (long double)(j + 1));
        }
        long double ratio = 1.0L;
        for (std::size_t j = 1; j <= k; ++j) ratio /= (long double)(n + j);
        return double(sum * std::sqrt(ratio) * std::pow((long double)x, 0.5L * (long double)k) *
                      std::exp(-0.5L * (long double)x));
    };
    for (std::size_t n : {0u, 1u, 2u, 5u, 12u})
        for (std::size_t k : {0u, 1u, 3u, 7u})
            for (double x : {0.0, 0.4, 2.5, 9.0}) {
                const double v = direct(n, k, x);
                CHECK(laguerre_function(n, k, x) == doctest::Approx(v).epsilon(1e-12));
            }
}

TEST_CASE("grid examples") {
    SUBCASE("vacuum") {
        const auto g = wigner_from_density(DensityMatrix::pure(FockVector::basis(0, 12)), square(3.0, 65));
        for (std::size_t j = 0; j < 65; ++j)
            for (std::size_t i = 0; i < 65; ++i) {
                const double r2 = g.x(i, j) * g.x(i, j) + g.y(i, j) * g.y(i, j);
                CHECK(std::abs(g.at(i, j) - kTwoOverPi * std::exp(-2.0 * r2)) <= 1e-10);
            }
        CHECK(min_value(g) >= -1e-12);
        CHECK(negativity_volume(wigner_from_density(DensityMatrix::pure(FockVector::basis(0, 12)),
                                                    square(4.0, 256))) <= 1e-9);
    }
    SUBCASE("coherent state is a displaced gaussian") {
        const Complex a0(1.0, 0.5);
        const auto g = wigner_from_density(DensityMatrix::pure(coherent_state(a0, 40)), square(4.0, 81));
        double worst = 0.0;
        for (std::size_t j = 0; j < 81; ++j)
            for (std::size_t i = 0; i < 81; ++i) {
                const Complex z(g.x(i, j), g.y(i, j));
                worst = std::max(worst, std::abs(g.at(i, j) - kTwoOverPi * std::exp(-2.0 * std::norm(z - a0))));
            }
        CHECK(worst <= 1e-6);
        CHECK(min_value(g) >= -1e-12);
    }
    SUBCASE("mixture vanishes at the origin") {
        CHECK(std::abs(wigner_at(mixture01(4), 0.0, 0.0)) <= 1e-15);
    }
    SUBCASE("large truncation stays stable") {
        const Complex a0(-5.0, 3.0);
        const auto rho = DensityMatrix::pure(coherent_state(a0, 256));
        for (double dx : {0.0, 0.3, -0.8}) {
            const Complex z = a0 + Complex(dx, 0.5 * dx);
            CHECK(std::abs(wigner_at(rho, z.real(), z.imag()) - kTwoOverPi * std::exp(-2.0 * std::norm(z - a0))) <=
                  1e-6);
        }
    }
}

TEST_CASE("normalization on cartesian and polar grids") {
    const auto rho = random_density(10, 3);
    const auto cart = wigner_from_density(rho, default_grid(10));
    CHECK(integrate_grid(cart) == doctest::Approx(1.0).epsilon(1e-3));
    GridSpec polar = default_grid(10);
    polar.kind = GridKind::polar;
    const auto pol = wigner_from_density(rho, polar);
    CHECK(integrate_grid(pol) == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(cart.max_imag_residue <= 1e-9);
}

TEST_CASE("negativity volume") {
    // |1>: W = (2/pi)(4r^2 - 1) e^{-2r^2}; the negative lobe r < 1/2 carries
    // (2 e^{-1/2} - 1), and the volume is twice that.
    const double analytic = 2.0 * (2.0 * std::exp(-0.5) - 1.0);
    const auto g1 = wigner_from_density(DensityMatrix::pure(FockVector::basis(1, 20)), square(4.0, 256));
    CHECK(analytic == doctest::Approx(0.42612).epsilon(1e-5));
    CHECK(std::abs(negativity_volume(g1) - analytic) <= 1e-3);
    CHECK(min_value(g1) <= -0.63);  // origin is not a node of an even grid
    CHECK(wigner_at(DensityMatrix::pure(FockVector::basis(1, 20)), 0.0, 0.0) == doctest::Approx(-kTwoOverPi));
    const auto gm = wigner_from_density(mixture01(20), square(4.0, 256));
    CHECK(negativity_volume(gm) <= 1e-3);
}

TEST_CASE("marginal equals the position distribution") {
    const auto rho = random_density(6, 11);
    const double L = 7.0;
    const std::size_t n = 1401;
    const double h = 2.0 * L / double(n - 1);
    for (double x : {-1.3, -0.2, 0.0, 0.55, 1.7}) {
        double sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double y = -L + h * double(j);
            sum += (j == 0 || j + 1 == n ? 0.5 : 1.0) * wigner_at(rho, x, y);
        }
        CHECK(std::abs(sum * h - position_density(rho, x)) <= 1e-6);
    }
}

TEST_CASE("worker count does not change the grid") {
    const auto rho = random_density(12, 5);
    const auto a = wigner_from_density(rho, square(4.0, 96), 1);
    const auto b = wigner_from_density(rho, square(4.0, 96), 7);
    CHECK(a.values == b.values);
}

TEST_CASE("grid errors") {
    CHECK_THROWS_AS(wigner_from_density(mixture01(4), square(3.0, 32)), Error);
    DensityMatrix bad = mixture01(4);
    bad(0, 1) = Complex(0.0, 0.2);  // not hermitian: W acquires an imaginary part
    try {
        wigner_from_density(bad, square(3.0, 64));
        FAIL("expected an inconsistent-density error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::inconsistent_density);
    }
    CHECK(parse_grid_kind(to_string(GridKind::polar)) == GridKind::polar);
    CHECK(!parse_grid_kind("hex"));
}

TEST_CASE("serialization layouts") {
    const auto g = wigner_from_density(DensityMatrix::pure(FockVector::basis(0, 4)), square(2.0, 64));
    std::ostringstream csv, mat;
    write_wigner_csv(csv, g);
    write_wigner_matrix(mat, g);
    CHECK(csv.str().rfind("x,y,W\n", 0) == 0);
    std::size_t lines = 0;
    for (char c : csv.str()) lines += c == '\n';
    CHECK(lines == 64 * 64 + 1);
    CHECK(!mat.str().empty());
}

}  // TEST_SUITE

TEST_SUITE("contour") {

TEST_CASE("vacuum level 1/pi is a circle of radius sqrt(ln2 / 2)") {
    const auto g = wigner_from_density(DensityMatrix::pure(FockVector::basis(0, 8)), square(2.0, 256));
    const std::vector<double> levels{1.0 / std::numbers::pi};
    const auto lines = contour_export(g, levels);
    REQUIRE(lines.size() == 1);
    CHECK(lines[0].closed);
    CHECK(lines[0].points.size() >= 32);
    const double r0 = std::sqrt(std::log(2.0) / 2.0);
    CHECK(r0 == doctest::Approx(0.5887).epsilon(1e-4));
    for (const auto& p : lines[0].points) CHECK(std::hypot(p.x, p.y) == doctest::Approx(r0).epsilon(2e-3));
}

TEST_CASE("levels outside the range give nothing") {
    const auto g = wigner_from_density(DensityMatrix::pure(FockVector::basis(0, 8)), square(2.0, 64));
    const std::vector<double> levels{1.0};
    CHECK(contour_export(g, levels).empty());
}

TEST_CASE("fock one has an inner negative ring") {
    const auto g = wigner_from_density(DensityMatrix::pure(FockVector::basis(1, 8)), square(3.0, 128));
    const std::vector<double> levels{-0.3, 0.05};
    const auto lines = contour_export(g, levels);
    std::size_t neg = 0, pos = 0;
    for (const auto& l : lines) (l.level < 0 ? neg : pos) += 1;
    CHECK(neg == 1);
    CHECK(pos == 2);  // the positive ring has inner and outer edges
    CHECK(!contour_vertices(lines).empty());
    std::ostringstream out;
    write_contours_csv(out, lines);
    CHECK(out.str().rfind("level,segment_id,x,y\n", 0) == 0);
}

}  // TEST_SUITE
