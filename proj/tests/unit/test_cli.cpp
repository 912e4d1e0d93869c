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

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <unistd.h>

#include <json.hpp>

#include "kerrchaos/cli/config.hpp"
#include "kerrchaos/cli/run.hpp"
#include "kerrchaos/error.hpp"

using namespace kerrchaos;
using namespace kerrchaos::cli;
namespace fs = std::filesystem;

namespace {

class TempDir {
public:
    TempDir() {
        static int counter = 0;
        path_ = fs::temp_directory_path() /
                ("kerrchaos-cli-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    const fs::path& path() const noexcept { return path_; }

private:
    fs::path path_;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::size_t count_lines(const fs::path& p) {
    const std::string s = slurp(p);
    return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

std::string config_error(const std::string& text) {
    try {
        parse_config(text);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::config);
        return e.what();
    }
    FAIL("expected a config error for: " << text);
    return {};
}

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

ExecOptions options_in(const TempDir& dir) {
    ExecOptions o;
    o.output_root = dir.path();
    o.workers = 2;
    return o;
}

const char* kSmallKerr = R"(command = validate
delta_over_gamma = -1
chi0_over_gamma = 0.3
f0_over_gamma = 1
dim = 20
t_final = 5
sample_every = 100
n_traj = 200
seed = 7
check_times = [2, 5]
)";

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("parse echoes the given ratios and defaults the rest") {
    const RunConfig c = parse_config(R"(# regular-drive set
command = trajectory
delta_over_gamma = -15
chi0_over_gamma = 2
f0_over_gamma = 5.8
f1_over_gamma = 4.8
small_delta_over_gamma = 2
drive_modulation = complex_exponential
)");
    RunConfig expect;
    expect.command = Command::trajectory;
    expect.params.delta = -15.0;
    expect.params.chi0 = 2.0;
    expect.params.f0 = 5.8;
    expect.params.f1 = 4.8;
    expect.params.small_delta = 2.0;
    expect.params.f_mod = DriveModulation::complex_exponential;
    CHECK(c == expect);
}

TEST_CASE("config errors name the key and line") {
    const std::string mismatch = config_error("command = trajectory\nchi0_over_gamma = \"abc\"\n");
    CHECK(contains(mismatch, "chi0_over_gamma"));
    CHECK(contains(mismatch, "line 2"));
    CHECK(contains(mismatch, "type mismatch"));
    CHECK(contains(config_error(""), "command required"));
    CHECK(contains(config_error("# only a comment\n"), "command required"));
    const std::string unknown = config_error("command = trajectory\nchi_over_gamma = 1\n");
    CHECK(contains(unknown, "chi_over_gamma"));
    CHECK(contains(unknown, "line 2"));
    CHECK(contains(config_error("command = trajectory\ndt = 1e-3\ndt = 2e-3\n"), "line 3"));
    const std::string negative = config_error("command = trajectory\n\ndt = -1\n");
    CHECK(contains(negative, "dt"));
    CHECK(contains(negative, "line 3"));
    CHECK(contains(config_error("command = fly\n"), "command"));
    CHECK(contains(config_error("command = ensemble\ngrid_n0 = 32\n"), "grid_n0"));
    CHECK(contains(config_error("command = ensemble\nsnapshot_times = [1, \"x\"]\n"), "snapshot_times"));
}

TEST_CASE("serialize and parse round trip") {
    RunConfig c;
    c.command = Command::ensemble;
    c.output_dir = "runs/with \"quotes\" and # hash";
    c.params.delta = 5.0;
    c.params.chi0 = 0.2;
    c.params.chi1 = 0.15;
    c.params.omega = 3.0;
    c.params.chi_mod = ChiModulation::sinusoidal;
    c.params.f0 = 10.0;
    c.params.n_th = 0.1;
    c.lambda = 1.0 / 3.0;
    c.initial_state = InitialState::coherent;
    c.alpha0_re = 0.1;
    c.alpha0_im = -2.0 / 7.0;
    c.dt = 2.4e-4;
    c.dim = 160;
    c.scheme = StepScheme::strang_split;
    c.renorm = false;
    c.seed = 18446744073709551615ull;
    c.snapshot_times = {6.0, 6.0 + 2.0943951023931953};
    c.contour_levels = {-0.01, 0.1};
    c.grid_kind = GridKind::polar;
    c.check_times = {};
    CHECK(parse_config(serialize(c)) == c);
    for (Command cmd : {Command::classical_poincare, Command::lyapunov, Command::trajectory, Command::wigner,
                        Command::scaling_check, Command::validate}) {
        RunConfig d;
        d.command = cmd;
        CHECK(parse_config(serialize(d)) == d);
    }
    CHECK(known_keys().size() >= 40);
}

TEST_CASE("exit codes and error records") {
    CHECK(exit_code_for(ErrorKind::config) == 2);
    CHECK(exit_code_for(ErrorKind::invalid_parameter) == 2);
    CHECK(exit_code_for(ErrorKind::divergence) == 3);
    CHECK(exit_code_for(ErrorKind::truncation) == 3);
    CHECK(exit_code_for(ErrorKind::io) == 1);
    const auto rec = error_record(ErrorKind::divergence, "blew up");
    CHECK(rec["error"]["exit_code"] == 3);
    CHECK(rec["error"]["message"] == "blew up");
    CHECK(rec["error"]["kind"].is_string());
}

TEST_CASE("classical-poincare writes the requested number of rows") {
    TempDir dir;
    RunConfig c = parse_config(R"(command = classical-poincare
delta_over_gamma = -15
chi0_over_gamma = 0.1
f0_over_gamma = 27
f1_over_gamma = 27
small_delta_over_gamma = 5
drive_modulation = complex_exponential
n_points = 20000
output_dir = section
)");
    const auto r = execute(c, options_in(dir));
    CHECK(r.exit_code == 0);
    CHECK(count_lines(r.output_dir / "section.csv") == 20001);
    const auto m = nlohmann::json::parse(slurp(r.output_dir / "manifest.json"));
    CHECK(m["command"] == "classical-poincare");
    CHECK(m["version"] == tool_version());
    CHECK(m["seed"]["master_seed"] == 1);
    CHECK(m["wall_clock_seconds"].get<double>() >= 0.0);
    CHECK(parse_config(m["config_text"].get<std::string>()) == c);
}

TEST_CASE("scaling-check reports the rescaled overlap") {
    TempDir dir;
    RunConfig c = parse_config(R"(command = scaling-check
delta_over_gamma = -15
chi0_over_gamma = 2
f0_over_gamma = 5.8
f1_over_gamma = 4.9
small_delta_over_gamma = 2
drive_modulation = complex_exponential
lambda = 2
output_dir = scaling
)");
    const auto r = execute(c, options_in(dir));
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(r.output_dir / "section_lambda1.csv"));
    CHECK(fs::exists(r.output_dir / "section_lambda2.csv"));
    CHECK(r.summary["bhattacharyya"].get<double>() >= 0.5);
    CHECK(r.summary["pass"] == true);
    CHECK(r.summary["scaled_params"]["delta_over_gamma"].get<double>() == doctest::Approx(-13.5));
}

TEST_CASE("validate compares the ensemble with the master equation") {
    TempDir dir;
    SUBCASE("agreement") {
        RunConfig c = parse_config(std::string(kSmallKerr) + "output_dir = ok\n");
        const auto r = execute(c, options_in(dir));
        CHECK(r.exit_code == 0);
        CHECK(r.summary["pass"] == true);
        CHECK(r.summary["rows"].size() == 2);
        CHECK(count_lines(r.output_dir / "validate.csv") == 3);
    }
    SUBCASE("impossible tolerance exits with the tolerance code") {
        RunConfig c =
            parse_config(std::string(kSmallKerr) + "output_dir = strict\ntolerance_se = 1e-6\ntolerance_rel = 1e-9\n");
        const auto r = execute(c, options_in(dir));
        CHECK(r.exit_code == kExitTolerance);
        CHECK(r.summary["pass"] == false);
        CHECK(fs::exists(r.output_dir / "manifest.json"));
    }
}

TEST_CASE("trajectory, ensemble, wigner and lyapunov artifacts") {
    TempDir dir;
    const auto opt = options_in(dir);
    const std::string model = R"(delta_over_gamma = -1
chi0_over_gamma = 0.3
f0_over_gamma = 1
dim = 16
t_final = 2
sample_every = 100
)";
    const auto traj = execute(parse_config("command = trajectory\noutput_dir = traj\n" + model), opt);
    CHECK(fs::exists(traj.output_dir / "observables.csv"));
    CHECK(fs::exists(traj.output_dir / "final_state.csv"));
    CHECK(!fs::exists(traj.output_dir / "section.csv"));

    const auto ens = execute(parse_config("command = ensemble\noutput_dir = ens\nn_traj = 20\n"
                                          "snapshot_times = [1, 2]\ngrid_n0 = 64\ngrid_n1 = 64\n"
                                          "contour_levels = [0.1]\n" +
                                          model),
                             opt);
    for (const char* f : {"observables.csv", "standard_errors.csv", "snapshot_0_density.txt", "snapshot_1_density.txt",
                          "interference.csv"})
        CHECK_MESSAGE(fs::exists(ens.output_dir / f), f);
    CHECK(ens.summary["snapshots"].size() == 2);

    const auto wig = execute(parse_config("command = wigner\noutput_dir = wig\ngrid_n0 = 64\ngrid_n1 = 64\n" + model),
                             opt);
    CHECK(fs::exists(wig.output_dir / "density.txt"));
    CHECK(fs::exists(wig.output_dir / "wigner.json"));
    CHECK(wig.summary["integral"].get<double>() == doctest::Approx(1.0).epsilon(1e-3));

    const auto from_file = execute(parse_config("command = wigner\noutput_dir = wig2\ngrid_n0 = 64\ngrid_n1 = 64\n"
                                                "density_file = \"" +
                                                (ens.output_dir / "snapshot_1_density.txt").string() + "\"\n" + model),
                                   opt);
    CHECK(!fs::exists(from_file.output_dir / "density.txt"));
    CHECK(from_file.summary["t"].get<double>() == doctest::Approx(2.0));

    const auto lyap = execute(parse_config(R"(command = lyapunov
output_dir = lyap
delta_over_gamma = -15
chi0_over_gamma = 2
f0_over_gamma = 5.8
f1_over_gamma = 4.9
small_delta_over_gamma = 2
drive_modulation = complex_exponential
horizon_periods = 100
transient_periods = 20
)"),
                              opt);
    const auto j = nlohmann::json::parse(slurp(lyap.output_dir / "lyapunov.json"));
    for (const char* key : {"estimate", "horizon", "renorm_interval", "transient"}) CHECK(j.contains(key));
}

TEST_CASE("manifest re-runs are bit-identical") {
    TempDir dir;
    const auto opt = options_in(dir);
    RunConfig c = parse_config(R"(command = ensemble
delta_over_gamma = -1
chi0_over_gamma = 0.3
f0_over_gamma = 1
dim = 16
t_final = 1
n_traj = 16
seed = 99
output_dir = first
)");
    const auto first = execute(c, opt);
    RunConfig again = config_from_manifest(first.output_dir / "manifest.json");
    CHECK(again == c);
    again.output_dir = "second";
    ExecOptions other = opt;
    other.workers = 5;
    const auto second = execute(again, other);
    for (const char* f : {"observables.csv", "standard_errors.csv"})
        CHECK(slurp(first.output_dir / f) == slurp(second.output_dir / f));
}

TEST_CASE("output directory handling") {
    TempDir dir;
    const auto opt = options_in(dir);
    RunConfig c = parse_config("command = trajectory\ndim = 8\nt_final = 0.5\noutput_dir = out\n");
    CHECK(resolve_output_dir(c, opt) == dir.path() / "out");
    execute(c, opt);

    try {
        execute(c, opt);
        FAIL("expected refusal");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::config);
    }
    ExecOptions forced = opt;
    forced.force = true;
    CHECK(execute(c, forced).exit_code == 0);

    fs::create_directories(dir.path() / "plain");
    c.output_dir = "plain";
    CHECK_THROWS_AS(execute(c, forced), Error);

    SUBCASE("a failing run leaves nothing behind") {
        RunConfig bad = parse_config(
            "command = trajectory\ndim = 8\nt_final = 5\ndelta_over_gamma = -1\nf0_over_gamma = 4\noutput_dir = bad\n");
        try {
            execute(bad, opt);
            FAIL("expected truncation");
        } catch (const Error& e) {
            CHECK(exit_code_for(e.kind()) == kExitDivergence);
        }
        CHECK(!fs::exists(dir.path() / "bad"));
        for (const auto& entry : fs::directory_iterator(dir.path()))
            CHECK(!contains(entry.path().filename().string(), "staging"));
    }
}

}  // TEST_SUITE
