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

#include "kerrchaos/master.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "kerrchaos/error.hpp"

namespace kerrchaos {

void MasterConfig::validate() const {
    require(dt > 0.0, ErrorKind::invalid_parameter, "dt must be positive");
    require(t_final > 0.0, ErrorKind::invalid_parameter, "t_final must be positive");
    require(dim >= 2, ErrorKind::invalid_parameter, "dim must be at least 2");
    require(sample_every >= 1, ErrorKind::invalid_parameter, "sample_every must be at least 1");
    for (double t : snapshot_times) {
        require(t >= 0.0 && t <= t_final + 1e-12, ErrorKind::invalid_parameter,
                "snapshot time " + std::to_string(t) + " outside [0, t_final]");
    }
}

DensityMatrix lindblad_rhs(const DensityMatrix& rho, double t, const ModelParams& p) {
    using Eigen::Index;
    const Index d = Index(rho.dim());
    const auto& r = rho.matrix();
    const double chi = chi_at(p, t);
    const Complex f = f_at(p, t);
    const Complex fc = std::conj(f);
    const double c1 = lindblad_rate(p, 1);
    const double c2 = lindblad_rate(p, 2);
    const Complex i{0.0, 1.0};

    std::vector<double> sq(std::size_t(d) + 1);
    for (std::size_t n = 0; n < sq.size(); ++n) sq[n] = std::sqrt(double(n));
    // diagonal of the truncated a a+
    auto up = [d](Index n) { return n + 1 < d ? double(n + 1) : 0.0; };

    // H rho via the tridiagonal H: h_n on the diagonal, f sqrt(n) below, f* sqrt(n+1) above.
    Eigen::MatrixXcd h_rho(d, d);
    for (Index col = 0; col < d; ++col) {
        for (Index n = 0; n < d; ++n) {
            const double nn = double(n);
            Complex v = (p.delta * nn + chi * nn * nn) * r(n, col);
            if (n > 0) v += f * sq[std::size_t(n)] * r(n - 1, col);
            if (n + 1 < d) v += fc * sq[std::size_t(n + 1)] * r(n + 1, col);
            h_rho(n, col) = v;
        }
    }

    DensityMatrix out{static_cast<std::size_t>(d)};
    auto& o = out.matrix();
    for (Index col = 0; col < d; ++col) {
        for (Index n = 0; n < d; ++n) {
            // rho H = (H rho)+ for Hermitian rho
            Complex v = -i * (h_rho(n, col) - std::conj(h_rho(col, n)));
            // L1 = sqrt(c1) a
            Complex diss = -0.5 * c1 * double(n + col) * r(n, col);
            if (n + 1 < d && col + 1 < d) diss += c1 * sq[std::size_t(n + 1)] * sq[std::size_t(col + 1)] * r(n + 1, col + 1);
            // L2 = sqrt(c2) a+
            if (c2 > 0.0) {
                diss += -0.5 * c2 * (up(n) + up(col)) * r(n, col);
                if (n > 0 && col > 0) diss += c2 * sq[std::size_t(n)] * sq[std::size_t(col)] * r(n - 1, col - 1);
            }
            o(n, col) = v + diss;
        }
    }
    return out;
}

namespace {

std::size_t step_index_of(double t, double dt, const char* what) {
    const auto k = static_cast<std::size_t>(std::llround(t / dt));
    if (std::abs(double(k) * dt - t) > 1e-9 * std::max(1.0, t)) {
        fail(ErrorKind::invalid_parameter, std::string(what) + " " + std::to_string(t) + " is not a multiple of dt");
    }
    return k;
}

}  // namespace

MasterResult integrate_master(const DensityMatrix& rho0, const MasterConfig& cfg, const ModelParams& p) {
    cfg.validate();
    p.validate();
    require(rho0.dim() == cfg.dim, ErrorKind::dimension_mismatch, "initial density and configuration truncations differ");
    require(std::abs(rho0.trace().real() - 1.0) <= 1e-9, ErrorKind::contract_violation, "initial density needs unit trace");

    const auto n_steps = static_cast<std::size_t>(std::ceil(cfg.t_final / cfg.dt - 1e-9));
    const double dt = cfg.dt;
    std::vector<std::size_t> snap_steps;
    for (double t : cfg.snapshot_times) snap_steps.push_back(step_index_of(t, dt, "snapshot time"));

    MasterResult res;
    DensityMatrix rho = rho0;
    DensityMatrix tmp(cfg.dim);
    for (std::size_t k = 0;; ++k) {
        const double t = double(k) * dt;
        if (k % cfg.sample_every == 0 || k == n_steps) {
            res.times.push_back(t);
            res.observables.push_back(rho.observables());
        }
        for (std::size_t s = 0; s < snap_steps.size(); ++s) {
            if (snap_steps[s] == k) res.snapshots.push_back({cfg.snapshot_times[s], rho});
        }
        if (k == n_steps) break;

        const DensityMatrix k1 = lindblad_rhs(rho, t, p);
        tmp.matrix() = rho.matrix() + (0.5 * dt) * k1.matrix();
        const DensityMatrix k2 = lindblad_rhs(tmp, t + 0.5 * dt, p);
        tmp.matrix() = rho.matrix() + (0.5 * dt) * k2.matrix();
        const DensityMatrix k3 = lindblad_rhs(tmp, t + 0.5 * dt, p);
        tmp.matrix() = rho.matrix() + dt * k3.matrix();
        const DensityMatrix k4 = lindblad_rhs(tmp, t + dt, p);
        rho.matrix() += (dt / 6.0) * (k1.matrix() + 2.0 * k2.matrix() + 2.0 * k3.matrix() + k4.matrix());

        // Keep the iterate exactly Hermitian; RK4 combinations only drift by rounding.
        rho.matrix() = 0.5 * (rho.matrix() + rho.matrix().adjoint()).eval();
        const double tr = rho.trace().real();
        if (!std::isfinite(tr)) fail(ErrorKind::divergence, "master equation diverged at t=" + std::to_string(t + dt));
        const double defect = std::abs(tr - 1.0);
        res.max_trace_defect = std::max(res.max_trace_defect, defect);
        if (defect > 1e-6) {
            fail(ErrorKind::step_size, "trace defect " + std::to_string(defect) + " at t=" + std::to_string(t + dt) +
                                           "; reduce dt");
        }
        rho.scale(1.0 / tr);
    }
    res.max_hermiticity_defect = rho.hermiticity_defect();
    res.final_state = rho;
    return res;
}

void write_density(std::ostream& out, const DensitySnapshot& snapshot) {
    const auto& m = snapshot.rho.matrix();
    out << std::setprecision(17);
    out << "dim," << m.rows() << '\n';
    out << "t," << snapshot.t << '\n';
    for (Eigen::Index n = 0; n < m.rows(); ++n) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c > 0) out << ',';
            out << m(n, c).real() << ',' << m(n, c).imag();
        }
        out << '\n';
    }
}

DensitySnapshot read_density(std::istream& in) {
    std::string line;
    auto header = [&](const char* key) {
        if (!std::getline(in, line)) fail(ErrorKind::io, std::string("density file: missing ") + key);
        const std::string prefix = std::string(key) + ",";
        if (line.rfind(prefix, 0) != 0) fail(ErrorKind::io, std::string("density file: expected ") + key);
        return line.substr(prefix.size());
    };
    const auto dim = static_cast<std::size_t>(std::stoul(header("dim")));
    const double t = std::stod(header("t"));
    DensitySnapshot snap{t, DensityMatrix(dim)};
    for (std::size_t n = 0; n < dim; ++n) {
        if (!std::getline(in, line)) fail(ErrorKind::io, "density file: truncated matrix");
        std::istringstream row(line);
        std::string cell;
        for (std::size_t c = 0; c < dim; ++c) {
            double re = 0.0, im = 0.0;
            if (!std::getline(row, cell, ',')) fail(ErrorKind::io, "density file: short row");
            re = std::stod(cell);
            if (!std::getline(row, cell, ',')) fail(ErrorKind::io, "density file: short row");
            im = std::stod(cell);
            snap.rho(n, c) = Complex{re, im};
        }
    }
    return snap;
}

}  // namespace kerrchaos
