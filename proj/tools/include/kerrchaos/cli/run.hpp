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
#include <filesystem>
#include <string>

#include <json.hpp>

#include "kerrchaos/cli/config.hpp"
#include "kerrchaos/error.hpp"

namespace kerrchaos::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitDivergence = 3;
inline constexpr int kExitTolerance = 4;

/// Maps an error kind onto the process exit status.
int exit_code_for(ErrorKind kind) noexcept;

/// {"error": {"kind", "message", "exit_code"}}
nlohmann::json error_record(ErrorKind kind, const std::string& message);

struct ExecOptions {
    std::size_t workers = 1;
    /// Relative output_dir values resolve against this root when non-empty.
    std::filesystem::path output_root;
    /// Replace an existing artifact directory (one holding a manifest).
    bool force = false;
};

struct ExecResult {
    int exit_code = kExitOk;
    std::filesystem::path output_dir;
    nlohmann::json summary;
};

/// Runs one command. Artifacts are written to a staging directory that is
/// renamed into place on completion and removed if the run throws.
ExecResult execute(const RunConfig& cfg, const ExecOptions& options);

/// Output directory a run would use.
std::filesystem::path resolve_output_dir(const RunConfig& cfg, const ExecOptions& options);

/// Reads the exact configuration recorded in a manifest.
RunConfig config_from_manifest(const std::filesystem::path& manifest);

/// Tool version recorded in manifests.
std::string tool_version();

}  // namespace kerrchaos::cli
