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

#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "kerrchaos/cli/config.hpp"
#include "kerrchaos/cli/run.hpp"

namespace {

std::string read_text(const std::string& path) {
    if (path == "-") {
        std::ostringstream s;
        s << std::cin.rdbuf();
        return s.str();
    }
    std::ifstream in(path);
    if (!in) kerrchaos::fail(kerrchaos::ErrorKind::config, "cannot read config file " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

int report(kerrchaos::ErrorKind kind, const std::string& message) {
    const auto record = kerrchaos::cli::error_record(kind, message);
    std::cerr << record.dump() << '\n';
    return kerrchaos::cli::exit_code_for(kind);
}

}  // namespace

int main(int argc, char** argv) {
    namespace kc = kerrchaos::cli;

    CLI::App app{"kerrchaos: driven dissipative Kerr oscillator simulations"};
    std::string config_path;
    std::string manifest_path;
    std::string output_dir;
    std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
    bool force = false;
    bool print_config = false;
    app.add_option("config", config_path, "Configuration file ('-' reads stdin)");
    app.add_option("--from-manifest", manifest_path, "Re-run the exact configuration recorded in a manifest.json");
    app.add_option("--output-dir", output_dir, "Override output_dir from the configuration");
    app.add_option("--workers", workers, "Worker threads for ensembles and Wigner grids")->check(CLI::PositiveNumber);
    app.add_flag("--force", force, "Replace an existing artifact directory");
    app.add_flag("--print-config", print_config, "Print the fully resolved configuration and exit");
    app.set_version_flag("--version", kc::tool_version());

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        return report(kerrchaos::ErrorKind::config, e.what());
    }

    try {
        if (config_path.empty() == manifest_path.empty()) {
            kerrchaos::fail(kerrchaos::ErrorKind::config, "give exactly one of a config file or --from-manifest");
        }
        kc::RunConfig cfg =
            manifest_path.empty() ? kc::parse_config(read_text(config_path)) : kc::config_from_manifest(manifest_path);
        if (!output_dir.empty()) cfg.output_dir = output_dir;
        if (print_config) {
            std::cout << kc::serialize(cfg);
            return kc::kExitOk;
        }

        kc::ExecOptions opt;
        opt.workers = workers;
        opt.force = force;
        if (const char* root = std::getenv("KERRCHAOS_OUTPUT_ROOT"); root != nullptr && *root != '\0') {
            opt.output_root = root;
        }
        const auto result = kc::execute(cfg, opt);
        nlohmann::json line = {{"output_dir", result.output_dir.string()},
                               {"exit_code", result.exit_code},
                               {"summary", result.summary}};
        std::cout << line.dump() << '\n';
        return result.exit_code;
    } catch (const kerrchaos::Error& e) {
        return report(e.kind(), e.what());
    } catch (const std::filesystem::filesystem_error& e) {
        return report(kerrchaos::ErrorKind::io, e.what());
    } catch (const std::exception& e) {
        return report(kerrchaos::ErrorKind::contract_violation, e.what());
    }
}
