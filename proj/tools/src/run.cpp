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

#include "kerrchaos/cli/run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include "kerrchaos/classical.hpp"
#include "kerrchaos/contour.hpp"
#include "kerrchaos/ensemble.hpp"
#include "kerrchaos/master.hpp"
#include "kerrchaos/qsd.hpp"
#include "kerrchaos/section.hpp"
#include "kerrchaos/wigner.hpp"

#ifndef KERRCHAOS_VERSION
#define KERRCHAOS_VERSION "0.0.0"
#endif

namespace kerrchaos::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class Artifacts {
public:
    explicit Artifacts(fs::path dir) : dir_(std::move(dir)) {}

    std::ofstream open(const std::string& name) {
        std::ofstream out(dir_ / name);
        if (!out) fail(ErrorKind::io, "cannot write " + (dir_ / name).string());
        names_.push_back(name);
        return out;
    }

    const std::vector<std::string>& names() const noexcept { return names_; }

private:
    fs::path dir_;
    std::vector<std::string> names_;
};

struct Outcome {
    json summary = json::object();
    std::optional<double> leakage;
    std::optional<double> effective_dt;
    int exit_code = kExitOk;
};

Complex start_alpha(const RunConfig& cfg) { return cfg.lambda * Complex(cfg.alpha0_re, cfg.alpha0_im); }

FockVector initial_state(const RunConfig& cfg) {
    switch (cfg.initial_state) {
        case InitialState::coherent: return coherent_state(start_alpha(cfg), cfg.dim);
        case InitialState::fock: return FockVector::basis(cfg.fock_n, cfg.dim);
        case InitialState::vacuum: break;
    }
    return FockVector::basis(0, cfg.dim);
}

TrajectoryConfig trajectory_config(const RunConfig& cfg) {
    TrajectoryConfig t;
    t.dt = cfg.dt;
    t.t_final = cfg.t_final;
    t.dim = cfg.dim;
    t.sample_every = cfg.sample_every;
    t.poincare_t0 = cfg.poincare_t0;
    t.poincare_skip = cfg.skip_periods;
    t.renorm = cfg.renorm;
    t.leakage_threshold = cfg.leakage_threshold;
    t.scheme = cfg.scheme;
    return t;
}

GridSpec grid_spec(const RunConfig& cfg) {
    GridSpec g = default_grid(cfg.dim);
    g.kind = cfg.grid_kind;
    g.n0 = cfg.grid_n0;
    g.n1 = cfg.grid_n1;
    if (cfg.grid_extent > 0.0) g.extent = cfg.grid_extent;
    return g;
}

SectionRequest section_request(const RunConfig& cfg) {
    SectionRequest r;
    r.t0 = cfg.poincare_t0;
    r.n_points = cfg.n_points;
    r.skip = cfg.skip_periods;
    r.dt = cfg.dt;
    return r;
}

std::string format_lambda(double lambda) {
    std::ostringstream s;
    s << lambda;
    return s.str();
}

json wigner_summary(const WignerGrid& g) {
    json j;
    j["min"] = min_value(g);
    j["max"] = max_value(g);
    j["integral"] = integrate_grid(g);
    j["negativity_volume"] = negativity_volume(g);
    j["max_imag_residue"] = g.max_imag_residue;
    j["dim_used"] = g.dim_used;
    j["grid"] = {{"kind", std::string(to_string(g.kind))}, {"n0", g.axis0.size()}, {"n1", g.axis1.size()}};
    return j;
}

void write_wigner_products(Artifacts& art, const RunConfig& cfg, const WignerGrid& g, const std::string& stem) {
    auto mat = art.open(stem + ".dat");
    write_wigner_matrix(mat, g);
    auto csv = art.open(stem + ".csv");
    write_wigner_csv(csv, g);
    if (!cfg.contour_levels.empty() && g.kind == GridKind::cartesian) {
        const auto lines = contour_export(g, cfg.contour_levels);
        auto out = art.open(stem + "_contours.csv");
        write_contours_csv(out, lines);
    }
}

void write_ensemble_csv(std::ostream& out, const EnsembleResult& r) {
    out << "t,mean_n,re_a,im_a,mean_n2,mandel_q,se_mean_n,se_re_a,se_im_a,se_mean_n2\n" << std::setprecision(17);
    for (std::size_t s = 0; s < r.times.size(); ++s) {
        const auto& o = r.mean_observables[s];
        const auto& e = r.standard_errors[s];
        out << r.times[s] << ',' << o.mean_n << ',' << o.mean_a.real() << ',' << o.mean_a.imag() << ',' << o.mean_n2
            << ',' << o.mandel_q << ',' << e.mean_n << ',' << e.re_a << ',' << e.im_a << ',' << e.mean_n2 << '\n';
    }
}

Outcome run_classical_poincare(const RunConfig& cfg, Artifacts& art) {
    const ModelParams p = effective_params(cfg);
    const auto sec = classical_poincare(p, section_request(cfg), ClassicalState{start_alpha(cfg)});
    auto out = art.open("section.csv");
    write_section_csv(out, sec);
    Outcome o;
    const auto clusters = cluster_points(sec.points, 1e-3);
    o.summary = {{"points", sec.points.size()},
                 {"period", sec.period},
                 {"skipped_periods", sec.skipped},
                 {"diameter", diameter(sec.points)},
                 {"clusters", clusters.count}};
    o.effective_dt = aligned_step(sec.period, cfg.dt);
    return o;
}

Outcome run_lyapunov(const RunConfig& cfg, Artifacts& art) {
    const ModelParams p = effective_params(cfg);
    LyapunovConfig lc;
    lc.dt = cfg.dt;
    lc.horizon_periods = cfg.horizon_periods;
    lc.transient_periods = cfg.transient_periods;
    lc.renorm_periods = cfg.renorm_periods;
    lc.separation = cfg.separation;
    const auto rep = lyapunov_largest(p, ClassicalState{start_alpha(cfg)}, lc);
    Outcome o;
    o.summary = {{"estimate", rep.estimate},
                 {"classification", rep.estimate > 0.0 ? "chaotic" : "regular"},
                 {"horizon", rep.horizon},
                 {"renorm_interval", rep.renorm_interval},
                 {"transient", rep.transient}};
    auto out = art.open("lyapunov.json");
    out << o.summary.dump(2) << '\n';
    return o;
}

Outcome run_trajectory_cmd(const RunConfig& cfg, Artifacts& art) {
    const ModelParams p = effective_params(cfg);
    const auto rec = run_trajectory(trajectory_config(cfg), p, initial_state(cfg),
                                    NoiseStream(cfg.seed, cfg.trajectory_index));
    {
        auto out = art.open("observables.csv");
        write_observables_csv(out, rec.times, rec.observables, rec.norm_defects);
    }
    if (modulation_period(p)) {
        auto out = art.open("section.csv");
        write_section_csv(out, rec.poincare);
    }
    {
        auto out = art.open("final_state.csv");
        out << "n,re,im\n" << std::setprecision(17);
        for (std::size_t n = 0; n < rec.final_state.dim(); ++n)
            out << n << ',' << rec.final_state[n].real() << ',' << rec.final_state[n].imag() << '\n';
    }
    double n_min = 0.0, n_max = 0.0;
    if (!rec.observables.empty()) {
        const auto [lo, hi] = std::minmax_element(rec.observables.begin(), rec.observables.end(),
                                                  [](const auto& a, const auto& b) { return a.mean_n < b.mean_n; });
        n_min = lo->mean_n;
        n_max = hi->mean_n;
    }
    Outcome o;
    o.leakage = rec.leakage;
    o.effective_dt = rec.dt;
    o.summary = {{"steps", rec.steps},
                 {"samples", rec.times.size()},
                 {"section_points", rec.poincare.points.size()},
                 {"mean_n_min", n_min},
                 {"mean_n_max", n_max}};
    return o;
}

Outcome run_ensemble_cmd(const RunConfig& cfg, const ExecOptions& opt, Artifacts& art) {
    const ModelParams p = effective_params(cfg);
    EnsembleConfig ec;
    ec.n_traj = cfg.n_traj;
    ec.base = trajectory_config(cfg);
    ec.snapshot_times = cfg.snapshot_times;
    ec.master_seed = cfg.seed;
    ec.workers = opt.workers;
    const auto res = run_ensemble(ec, p, initial_state(cfg));
    {
        auto out = art.open("observables.csv");
        write_ensemble_csv(out, res);
    }
    {
        auto out = art.open("standard_errors.csv");
        write_standard_errors_csv(out, res);
    }
    const GridSpec spec = grid_spec(cfg);
    json snaps = json::array();
    for (std::size_t s = 0; s < res.snapshots.size(); ++s) {
        const std::string stem = "snapshot_" + std::to_string(s);
        {
            auto out = art.open(stem + "_density.txt");
            write_density(out, res.snapshots[s]);
        }
        const auto g = wigner_from_density(res.snapshots[s].rho, spec, opt.workers);
        write_wigner_products(art, cfg, g, stem + "_wigner");
        json j = wigner_summary(g);
        j["requested_t"] = res.requested_snapshot_times[s];
        j["t"] = res.snapshots[s].t;
        snaps.push_back(j);
    }
    if (res.snapshots.size() >= 2) {
        const auto reports = interference_scan(res, spec, opt.workers);
        auto out = art.open("interference.csv");
        write_interference_csv(out, reports);
    }
    Outcome o;
    o.leakage = res.leakage_max;
    o.effective_dt = res.dt;
    o.summary = {{"n_traj", res.n_traj}, {"samples", res.times.size()}, {"snapshots", snaps}};
    return o;
}

Outcome run_wigner_cmd(const RunConfig& cfg, const ExecOptions& opt, Artifacts& art) {
    DensitySnapshot snap;
    if (!cfg.density_file.empty()) {
        std::ifstream in(cfg.density_file);
        if (!in) fail(ErrorKind::io, "cannot read density file " + cfg.density_file);
        snap = read_density(in);
    } else {
        MasterConfig mc;
        mc.dt = cfg.dt;
        mc.t_final = cfg.t_final;
        mc.dim = cfg.dim;
        mc.sample_every = cfg.sample_every;
        const auto res = integrate_master(DensityMatrix::pure(initial_state(cfg)), mc, effective_params(cfg));
        snap = {res.times.empty() ? cfg.t_final : res.times.back(), res.final_state};
        auto out = art.open("density.txt");
        write_density(out, snap);
    }
    const auto g = wigner_from_density(snap.rho, grid_spec(cfg), opt.workers);
    write_wigner_products(art, cfg, g, "wigner");
    Outcome o;
    o.summary = wigner_summary(g);
    o.summary["t"] = snap.t;
    auto out = art.open("wigner.json");
    out << o.summary.dump(2) << '\n';
    return o;
}

Outcome run_scaling_check(const RunConfig& cfg, Artifacts& art) {
    const double lambda = cfg.lambda;
    const ModelParams base = cfg.params;
    const ModelParams scaled_p = scale_params(base, ScaleFactor(lambda));
    const Complex a0(cfg.alpha0_re, cfg.alpha0_im);
    const auto req = section_request(cfg);
    const auto s1 = classical_poincare(base, req, ClassicalState{a0});
    const auto sl = classical_poincare(scaled_p, req, ClassicalState{lambda * a0});
    {
        auto out = art.open("section_lambda1.csv");
        write_section_csv(out, s1);
    }
    {
        auto out = art.open("section_lambda" + format_lambda(lambda) + ".csv");
        write_section_csv(out, sl);
    }
    const auto back = scaled(sl.points, 1.0 / lambda);
    const double score = attractor_similarity(s1.points, back, 64);
    Outcome o;
    o.summary = {{"lambda", lambda},
                 {"bhattacharyya", score},
                 {"bins", 64},
                 {"threshold", cfg.overlap_threshold},
                 {"pass", score >= cfg.overlap_threshold},
                 {"scaled_params",
                  {{"delta_over_gamma", scaled_p.delta},
                   {"chi0_over_gamma", scaled_p.chi0},
                   {"chi1_over_gamma", scaled_p.chi1},
                   {"f0_over_gamma", scaled_p.f0},
                   {"f1_over_gamma", scaled_p.f1}}}};
    auto out = art.open("scaling.json");
    out << o.summary.dump(2) << '\n';
    return o;
}

std::size_t nearest_sample(const std::vector<double>& times, double t) {
    std::size_t best = 0;
    for (std::size_t s = 1; s < times.size(); ++s)
        if (std::abs(times[s] - t) < std::abs(times[best] - t)) best = s;
    return best;
}

Outcome run_validate(const RunConfig& cfg, const ExecOptions& opt, Artifacts& art) {
    const ModelParams p = effective_params(cfg);
    EnsembleConfig ec;
    ec.n_traj = cfg.n_traj;
    ec.base = trajectory_config(cfg);
    ec.master_seed = cfg.seed;
    ec.workers = opt.workers;
    const FockVector psi0 = initial_state(cfg);
    const auto ens = run_ensemble(ec, p, psi0);

    MasterConfig mc;
    mc.dt = ens.dt;
    mc.t_final = cfg.t_final;
    mc.dim = cfg.dim;
    mc.sample_every = cfg.sample_every;
    const auto oracle = integrate_master(DensityMatrix::pure(psi0), mc, p);

    json rows = json::array();
    bool all_pass = true;
    auto csv = art.open("validate.csv");
    csv << "t,qsd_mean_n,standard_error,oracle_mean_n,abs_error,bound,pass\n" << std::setprecision(17);
    for (double t : cfg.check_times) {
        const std::size_t qi = nearest_sample(ens.times, t);
        const std::size_t mi = nearest_sample(oracle.times, t);
        const double qsd = ens.mean_observables[qi].mean_n;
        const double se = ens.standard_errors[qi].mean_n;
        const double ref = oracle.observables[mi].mean_n;
        const double err = std::abs(qsd - ref);
        const double bound = std::max(cfg.tolerance_se * se, cfg.tolerance_rel * std::abs(ref));
        const bool pass = err <= bound;
        all_pass = all_pass && pass;
        rows.push_back({{"t", ens.times[qi]},
                        {"qsd_mean_n", qsd},
                        {"standard_error", se},
                        {"oracle_mean_n", ref},
                        {"abs_error", err},
                        {"bound", bound},
                        {"pass", pass}});
        csv << ens.times[qi] << ',' << qsd << ',' << se << ',' << ref << ',' << err << ',' << bound << ','
            << (pass ? 1 : 0) << '\n';
    }
    Outcome o;
    o.leakage = ens.leakage_max;
    o.effective_dt = ens.dt;
    o.summary = {{"pass", all_pass},
                 {"tolerance", {{"standard_errors", cfg.tolerance_se}, {"relative", cfg.tolerance_rel}}},
                 {"n_traj", cfg.n_traj},
                 {"oracle_max_trace_defect", oracle.max_trace_defect},
                 {"rows", rows}};
    auto out = art.open("validate.json");
    out << o.summary.dump(2) << '\n';
    o.exit_code = all_pass ? kExitOk : kExitTolerance;
    return o;
}

Outcome dispatch(const RunConfig& cfg, const ExecOptions& opt, Artifacts& art) {
    switch (cfg.command) {
        case Command::classical_poincare: return run_classical_poincare(cfg, art);
        case Command::lyapunov: return run_lyapunov(cfg, art);
        case Command::trajectory: return run_trajectory_cmd(cfg, art);
        case Command::ensemble: return run_ensemble_cmd(cfg, opt, art);
        case Command::wigner: return run_wigner_cmd(cfg, opt, art);
        case Command::scaling_check: return run_scaling_check(cfg, art);
        case Command::validate: return run_validate(cfg, opt, art);
    }
    fail(ErrorKind::config, "unsupported command");
}

std::string utc_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream s;
    s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return s.str();
}

// Removes the staging directory unless released.
class StagingGuard {
public:
    explicit StagingGuard(fs::path dir) : dir_(std::move(dir)) {}
    StagingGuard(const StagingGuard&) = delete;
    StagingGuard& operator=(const StagingGuard&) = delete;
    ~StagingGuard() {
        if (!released_) {
            std::error_code ec;
            fs::remove_all(dir_, ec);
        }
    }
    void release() noexcept { released_ = true; }

private:
    fs::path dir_;
    bool released_ = false;
};

}  // namespace

int exit_code_for(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::config:
        case ErrorKind::invalid_parameter:
        case ErrorKind::invalid_state:
        case ErrorKind::dimension_mismatch:
        case ErrorKind::step_size:
        case ErrorKind::no_section:
        case ErrorKind::unknown_snapshot:
            return kExitConfig;
        case ErrorKind::divergence:
        case ErrorKind::truncation:
            return kExitDivergence;
        case ErrorKind::contract_violation:
        case ErrorKind::inconsistent_density:
        case ErrorKind::io:
            return kExitInternal;
    }
    return kExitInternal;
}

json error_record(ErrorKind kind, const std::string& message) {
    return {{"error", {{"kind", std::string(to_string(kind))}, {"message", message}, {"exit_code", exit_code_for(kind)}}}};
}

std::string tool_version() { return KERRCHAOS_VERSION; }

fs::path resolve_output_dir(const RunConfig& cfg, const ExecOptions& options) {
    fs::path dir(cfg.output_dir);
    if (dir.is_relative() && !options.output_root.empty()) dir = options.output_root / dir;
    return dir;
}

ExecResult execute(const RunConfig& cfg, const ExecOptions& options) {
    validate(cfg);
    require(options.workers >= 1, ErrorKind::config, "--workers must be at least 1");
    const fs::path target = resolve_output_dir(cfg, options);

    if (fs::exists(target)) {
        if (!options.force) {
            fail(ErrorKind::config, "output directory " + target.string() + " exists (pass --force to replace it)");
        }
        if (!fs::exists(target / "manifest.json")) {
            fail(ErrorKind::config, "refusing to replace " + target.string() + ": not an artifact directory");
        }
    }
    const fs::path parent = target.has_parent_path() ? target.parent_path() : fs::path(".");
    std::error_code ec;
    fs::create_directories(parent, ec);
    if (ec) fail(ErrorKind::io, "cannot create " + parent.string() + ": " + ec.message());
    const fs::path staging = parent / ("." + target.filename().string() + ".staging-" + std::to_string(::getpid()));
    fs::remove_all(staging, ec);
    fs::create_directories(staging, ec);
    if (ec) fail(ErrorKind::io, "cannot create " + staging.string() + ": " + ec.message());
    StagingGuard guard(staging);

    const std::string started = utc_now();
    const auto t0 = std::chrono::steady_clock::now();
    Artifacts art(staging);
    Outcome outcome = dispatch(cfg, options, art);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    json manifest;
    manifest["tool"] = "kerrchaos";
    manifest["version"] = tool_version();
    manifest["command"] = std::string(to_string(cfg.command));
    manifest["config_text"] = serialize(cfg);
    manifest["seed"] = {{"master_seed", cfg.seed}, {"trajectory_index", cfg.trajectory_index}};
    manifest["workers"] = options.workers;
    manifest["started_utc"] = started;
    manifest["wall_clock_seconds"] = wall;
    manifest["units"] = "parameters are ratios to gamma; times in units of 1/gamma";
    manifest["leakage"] = outcome.leakage ? json(*outcome.leakage) : json(nullptr);
    manifest["effective_dt"] = outcome.effective_dt ? json(*outcome.effective_dt) : json(nullptr);
    manifest["artifacts"] = art.names();
    manifest["summary"] = outcome.summary;
    manifest["exit_code"] = outcome.exit_code;
    {
        std::ofstream out(staging / "manifest.json");
        if (!out) fail(ErrorKind::io, "cannot write manifest");
        out << manifest.dump(2) << '\n';
    }

    if (fs::exists(target)) fs::remove_all(target);
    fs::rename(staging, target, ec);
    if (ec) fail(ErrorKind::io, "cannot move results into " + target.string() + ": " + ec.message());
    guard.release();

    return {outcome.exit_code, target, outcome.summary};
}

RunConfig config_from_manifest(const fs::path& manifest) {
    std::ifstream in(manifest);
    if (!in) fail(ErrorKind::config, "cannot read manifest " + manifest.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        fail(ErrorKind::config, "manifest " + manifest.string() + " is not valid JSON: " + e.what());
    }
    if (!j.contains("config_text") || !j["config_text"].is_string()) {
        fail(ErrorKind::config, "manifest " + manifest.string() + " has no config_text");
    }
    return parse_config(j["config_text"].get<std::string>());
}

}  // namespace kerrchaos::cli
