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

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace kerrchaos {

using Complex = std::complex<double>;

/// Pure state in the truncated number basis |0>, ..., |dim-1>.
///
/// Operators act matrix-free: a, a+, n and n^2 are band or diagonal, so every
/// action below is O(dim).
class FockVector {
public:
    /// Zero vector of the given truncation (dim >= 2).
    explicit FockVector(std::size_t dim);
    explicit FockVector(std::vector<Complex> amps);

    static FockVector basis(std::size_t n, std::size_t dim);

    std::size_t dim() const noexcept { return amps_.size(); }

    Complex& operator[](std::size_t n) noexcept { return amps_[n]; }
    const Complex& operator[](std::size_t n) const noexcept { return amps_[n]; }

    std::span<Complex> amplitudes() noexcept { return amps_; }
    std::span<const Complex> amplitudes() const noexcept { return amps_; }

    double norm() const noexcept;
    double norm_squared() const noexcept;

    /// Scales to unit norm; a zero vector is an invalid-state error.
    void normalize();

    /// Population in the top ceil(dim/10) levels.
    double top_decile_population() const noexcept;

    FockVector& operator+=(const FockVector& other);
    FockVector& operator-=(const FockVector& other);
    FockVector& operator*=(Complex factor) noexcept;

    /// this += factor * other
    void axpy(Complex factor, const FockVector& other);

    friend bool operator==(const FockVector&, const FockVector&) = default;

private:
    std::vector<Complex> amps_;
};

FockVector operator+(FockVector lhs, const FockVector& rhs);
FockVector operator-(FockVector lhs, const FockVector& rhs);
FockVector operator*(Complex factor, FockVector v);

/// <lhs|rhs>, antilinear in the first argument.
Complex inner(const FockVector& lhs, const FockVector& rhs);

FockVector apply_annihilation(const FockVector& psi);
FockVector apply_creation(const FockVector& psi);
FockVector apply_number(const FockVector& psi);
FockVector apply_number_squared(const FockVector& psi);

/// Truncated coherent state, renormalized. Requires |alpha|^2 + 5|alpha| + 10 <= dim.
FockVector coherent_state(Complex alpha, std::size_t dim);

/// Per-state moments of the oscillator mode.
struct Observables {
    double mean_n = 0.0;
    Complex mean_a{0.0, 0.0};
    double mean_n2 = 0.0;
    double mandel_q = 0.0;
};

/// Mandel Q from first and second moments; 0 when mean_n <= 1e-12.
double mandel_q(double mean_n, double mean_n2) noexcept;

/// Moments of a normalized state (norm defect above 1e-6 is a contract violation).
Observables expectation_ladder(const FockVector& psi);

/// <psi|a|psi> without normalization checks.
Complex mean_annihilation(const FockVector& psi) noexcept;

/// Hermitian, trace-one (once normalized) operator in the number basis.
class DensityMatrix {
public:
    explicit DensityMatrix(std::size_t dim);
    explicit DensityMatrix(Eigen::MatrixXcd entries);

    static DensityMatrix pure(const FockVector& psi);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(entries_.rows()); }

    Complex operator()(std::size_t n, std::size_t m) const { return entries_(n, m); }
    Complex& operator()(std::size_t n, std::size_t m) { return entries_(n, m); }

    const Eigen::MatrixXcd& matrix() const noexcept { return entries_; }
    Eigen::MatrixXcd& matrix() noexcept { return entries_; }

    Complex trace() const { return entries_.trace(); }
    double hermiticity_defect() const;
    /// Smallest eigenvalue of the Hermitian part.
    double min_eigenvalue() const;

    void scale(double factor) { entries_ *= factor; }
    /// Divides by the real trace.
    void normalize_trace();

    Observables observables() const;

private:
    Eigen::MatrixXcd entries_;
};

/// rho += weight |psi><psi|, filling both triangles from one product so the
/// result stays exactly Hermitian.
void accumulate_outer(DensityMatrix& rho, const FockVector& psi, double weight);

}  // namespace kerrchaos
