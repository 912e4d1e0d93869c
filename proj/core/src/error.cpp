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

#include "kerrchaos/error.hpp"

namespace kerrchaos {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::invalid_state: return "invalid_state";
        case ErrorKind::invalid_parameter: return "invalid_parameter";
        case ErrorKind::dimension_mismatch: return "dimension_mismatch";
        case ErrorKind::truncation: return "truncation";
        case ErrorKind::step_size: return "step_size";
        case ErrorKind::divergence: return "divergence";
        case ErrorKind::no_section: return "no_section";
        case ErrorKind::contract_violation: return "contract_violation";
        case ErrorKind::inconsistent_density: return "inconsistent_density";
        case ErrorKind::unknown_snapshot: return "unknown_snapshot";
        case ErrorKind::config: return "config";
        case ErrorKind::io: return "io";
    }
    return "unknown";
}

}  // namespace kerrchaos
