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

#include "kerrchaos/fock.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "kerrchaos/error.hpp"

namespace kerrchaos {

namespace {

void check_dim(std::size_t dim) {
    if (dim < 2) {
        fail(ErrorKind::invalid_state,
             "Fock truncation must be at least 2, got " + std::to_string(dim));
    }
}

void check_same_dim(std::size_t a, std::size_t b) {
    if (a != b) {
        fail(ErrorKind::dimension_mismatch,
             "dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
    }
}

}  // namespace

FockVector::FockVector(std::size_t dim) : amps_(dim, Complex{0.0, 0.0}) { check_dim(dim); }

FockVector::FockVector(std::vector<Complex> amps) : amps_(std::move(amps)) {
    check_dim(amps_.size());
}

FockVector FockVector::basis(std::size_t n, std::size_t dim) {
    FockVector v(dim);
    if (n >= dim) {
        fail(ErrorKind::invalid_state,
             "number state " + std::to_string(n) + " outside truncation " + std::to_string(dim));
    }
    v[n] = 1.0;
    return v;
}

double FockVector::norm_squared() const noexcept {
    double s = 0.0;
    for (const auto& c : amps_) s += std::norm(c);
    return s;
}

double FockVector::norm() const noexcept { return std::sqrt(norm_squared()); }

void FockVector::normalize() {
    const double nrm = norm();
    if (!(nrm > 0.0) || !std::isfinite(nrm)) {
        fail(ErrorKind::invalid_state, "cannot normalize a zero or non-finite state");
    }
    const double inv = 1.0 / nrm;
    for (auto& c : amps_) c *= inv;
}

double FockVector::top_decile_population() const noexcept {
    const std::size_t n = amps_.size();
    const std::size_t top = (n + 9) / 10;
    double s = 0.0;
    for (std::size_t k = n - top; k < n; ++k) s += std::norm(amps_[k]);
    return s;
}

FockVector& FockVector::operator+=(const FockVector& other) {
    check_same_dim(dim(), other.dim());
    for (std::size_t k = 0; k < amps_.size(); ++k) amps_[k] += other.amps_[k];
    return *this;
}

FockVector& FockVector::operator-=(const FockVector& other) {
    check_same_dim(dim(), other.dim());
    for (std::size_t k = 0; k < amps_.size(); ++k) amps_[k] -= other.amps_[k];
    return *this;
}

FockVector& FockVector::operator*=(Complex factor) noexcept {
    for (auto& c : amps_) c *= factor;
    return *this;
}

void FockVector::axpy(Complex factor, const FockVector& other) {
    check_same_dim(dim(), other.dim());
    for (std::size_t k = 0; k < amps_.size(); ++k) amps_[k] += factor * other.amps_[k];
}

FockVector operator+(FockVector lhs, const FockVector& rhs) { return lhs += rhs; }
FockVector operator-(FockVector lhs, const FockVector& rhs) { return lhs -= rhs; }
FockVector operator*(Complex factor, FockVector v) { return v *= factor; }

Complex inner(const FockVector& lhs, const FockVector& rhs) {
    check_same_dim(lhs.dim(), rhs.dim());
    Complex s{0.0, 0.0};
    for (std::size_t k = 0; k < lhs.dim(); ++k) s += std::conj(lhs[k]) * rhs[k];
    return s;
}

FockVector apply_annihilation(const FockVector& psi) {
    const std::size_t d = psi.dim();
    FockVector out(d);
    for (std::size_t n = 0; n + 1 < d; ++n) out[n] = std::sqrt(double(n + 1)) * psi[n + 1];
    return out;
}

FockVector apply_creation(const FockVector& psi) {
    const std::size_t d = psi.dim();
    FockVector out(d);
    for (std::size_t n = 1; n < d; ++n) out[n] = std::sqrt(double(n)) * psi[n - 1];
    return out;
}

FockVector apply_number(const FockVector& psi) {
    FockVector out(psi.dim());
    for (std::size_t n = 0; n < psi.dim(); ++n) out[n] = double(n) * psi[n];
    return out;
}

FockVector apply_number_squared(const FockVector& psi) {
    FockVector out(psi.dim());
    for (std::size_t n = 0; n < psi.dim(); ++n) out[n] = double(n) * double(n) * psi[n];
    return out;
}

FockVector coherent_state(Complex alpha, std::size_t dim) {
    check_dim(dim);
    const double r = std::abs(alpha);
    if (r * r + 5.0 * r + 10.0 > double(dim)) {
        fail(ErrorKind::truncation, "coherent amplitude |alpha|=" + std::to_string(r) +
                                        " needs a truncation above " + std::to_string(dim));
    }
    FockVector psi(dim);
    // c_n = exp(-|a|^2/2) a^n / sqrt(n!) built by c_n = c_{n-1} a / sqrt(n)
    Complex c = std::exp(-0.5 * r * r);
    psi[0] = c;
    for (std::size_t n = 1; n < dim; ++n) {
        c *= alpha / std::sqrt(double(n));
        psi[n] = c;
    }
    psi.normalize();
    return psi;
}

double mandel_q(double mean_n, double mean_n2) noexcept {
    if (mean_n <= 1e-12) return 0.0;
    return (mean_n2 - mean_n * mean_n - mean_n) / mean_n;
}

Complex mean_annihilation(const FockVector& psi) noexcept {
    Complex s{0.0, 0.0};
    for (std::size_t n = 0; n + 1 < psi.dim(); ++n) {
        s += std::conj(psi[n]) * std::sqrt(double(n + 1)) * psi[n + 1];
    }
    return s;
}

Observables expectation_ladder(const FockVector& psi) {
    const double nrm = psi.norm();
    if (std::abs(nrm - 1.0) > 1e-6) {
        fail(ErrorKind::contract_violation,
             "expectation_ladder needs a normalized state, norm=" + std::to_string(nrm));
    }
    Observables obs;
    for (std::size_t n = 0; n < psi.dim(); ++n) {
        const double p = std::norm(psi[n]);
        obs.mean_n += double(n) * p;
        obs.mean_n2 += double(n) * double(n) * p;
    }
    obs.mean_a = mean_annihilation(psi);
    obs.mandel_q = mandel_q(obs.mean_n, obs.mean_n2);
    return obs;
}

DensityMatrix::DensityMatrix(std::size_t dim) : entries_(Eigen::MatrixXcd::Zero(Eigen::Index(dim), Eigen::Index(dim))) {
    check_dim(dim);
}

DensityMatrix::DensityMatrix(Eigen::MatrixXcd entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols()) {
        fail(ErrorKind::dimension_mismatch, "density matrix must be square");
    }
    check_dim(std::size_t(entries_.rows()));
}

DensityMatrix DensityMatrix::pure(const FockVector& psi) {
    DensityMatrix rho(psi.dim());
    accumulate_outer(rho, psi, 1.0);
    return rho;
}

double DensityMatrix::hermiticity_defect() const {
    return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
    const Eigen::MatrixXcd herm = 0.5 * (entries_ + entries_.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

void DensityMatrix::normalize_trace() {
    const double tr = entries_.trace().real();
    if (!(tr > 0.0)) fail(ErrorKind::invalid_state, "density matrix has non-positive trace");
    entries_ /= tr;
}

Observables DensityMatrix::observables() const {
    Observables obs;
    const std::size_t d = dim();
    for (std::size_t n = 0; n < d; ++n) {
        const double p = entries_(Eigen::Index(n), Eigen::Index(n)).real();
        obs.mean_n += double(n) * p;
        obs.mean_n2 += double(n) * double(n) * p;
    }
    // Tr(rho a) = sum_n sqrt(n+1) rho_{n+1,n}
    for (std::size_t n = 0; n + 1 < d; ++n) {
        obs.mean_a += std::sqrt(double(n + 1)) * entries_(Eigen::Index(n + 1), Eigen::Index(n));
    }
    obs.mandel_q = mandel_q(obs.mean_n, obs.mean_n2);
    return obs;
}

void accumulate_outer(DensityMatrix& rho, const FockVector& psi, double weight) {
    if (rho.dim() != psi.dim()) check_same_dim(rho.dim(), psi.dim());
    if (!(weight > 0.0)) fail(ErrorKind::invalid_parameter, "outer-product weight must be positive");
    auto& m = rho.matrix();
    const Eigen::Index d = m.rows();
    for (Eigen::Index j = 0; j < d; ++j) {
        const Complex cj = std::conj(psi[std::size_t(j)]);
        m(j, j) += weight * std::norm(psi[std::size_t(j)]);
        for (Eigen::Index i = j + 1; i < d; ++i) {
            const Complex v = weight * psi[std::size_t(i)] * cj;
            m(i, j) += v;
            m(j, i) += std::conj(v);
        }
    }
}

}  // namespace kerrchaos
