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

#include "kerrchaos/cli/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <system_error>

#include "kerrchaos/error.hpp"

namespace kerrchaos::cli {

namespace {

constexpr std::array<std::pair<Command, std::string_view>, 7> kCommands{{
    {Command::classical_poincare, "classical-poincare"},
    {Command::lyapunov, "lyapunov"},
    {Command::trajectory, "trajectory"},
    {Command::ensemble, "ensemble"},
    {Command::wigner, "wigner"},
    {Command::scaling_check, "scaling-check"},
    {Command::validate, "validate"},
}};

constexpr std::array<std::pair<InitialState, std::string_view>, 3> kInitialStates{{
    {InitialState::vacuum, "vacuum"},
    {InitialState::coherent, "coherent"},
    {InitialState::fock, "fock"},
}};

struct Value {
    enum class Type { number, boolean, string, list };
    Type type = Type::string;
    std::string raw;  // text as written (unquoted for strings)
    double number = 0.0;
    bool boolean = false;
    std::vector<double> list;
};

std::string_view type_name(Value::Type t) {
    switch (t) {
        case Value::Type::number: return "number";
        case Value::Type::boolean: return "boolean";
        case Value::Type::string: return "string";
        case Value::Type::list: return "list";
    }
    return "value";
}

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::optional<double> to_double(std::string_view s) {
    s = trim(s);
    if (s.empty()) return std::nullopt;
    if (s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::string where(std::string_view key, std::size_t line) {
    std::string out;
    if (line > 0) out = "line " + std::to_string(line) + ": ";
    return out + "key '" + std::string(key) + "'";
}

[[noreturn]] void config_error(std::string_view key, std::size_t line, const std::string& what) {
    fail(ErrorKind::config, where(key, line) + ": " + what);
}

// Strips a trailing comment that is not inside a quoted string.
std::string_view strip_comment(std::string_view line) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted && c == '\\') {
            ++i;
        } else if (c == '"') {
            quoted = !quoted;
        } else if (c == '#' && !quoted) {
            return line.substr(0, i);
        }
    }
    return line;
}

Value lex_value(std::string_view text, std::string_view key, std::size_t line) {
    Value v;
    if (text.empty()) config_error(key, line, "missing value");
    if (text.front() == '"') {
        v.type = Value::Type::string;
        std::size_t i = 1;
        bool closed = false;
        for (; i < text.size(); ++i) {
            const char c = text[i];
            if (c == '\\' && i + 1 < text.size()) {
                v.raw.push_back(text[++i]);
            } else if (c == '"') {
                closed = true;
                ++i;
                break;
            } else {
                v.raw.push_back(c);
            }
        }
        if (!closed) config_error(key, line, "unterminated string");
        if (!trim(text.substr(i)).empty()) config_error(key, line, "unexpected text after string");
        return v;
    }
    if (text.front() == '[') {
        v.type = Value::Type::list;
        if (text.back() != ']') config_error(key, line, "unterminated list");
        v.raw = std::string(text);
        const std::string_view body = trim(text.substr(1, text.size() - 2));
        if (body.empty()) return v;
        std::size_t start = 0;
        while (start <= body.size()) {
            const auto comma = body.find(',', start);
            const auto item = trim(body.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
            const auto num = to_double(item);
            if (!num) config_error(key, line, "type mismatch: list items must be numbers, got '" + std::string(item) + "'");
            v.list.push_back(*num);
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        return v;
    }
    v.raw = std::string(text);
    if (text == "true" || text == "false") {
        v.type = Value::Type::boolean;
        v.boolean = text == "true";
        return v;
    }
    if (const auto num = to_double(text)) {
        v.type = Value::Type::number;
        v.number = *num;
        return v;
    }
    v.type = Value::Type::string;
    return v;
}

std::string format_double(double x) {
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), ptr);
}

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out + '"';
}

std::string format_list(const std::vector<double>& xs) {
    std::string out = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ", ";
        out += format_double(xs[i]);
    }
    return out + "]";
}

struct Field {
    std::string name;
    std::function<void(RunConfig&, const Value&, std::size_t)> set;
    std::function<std::string(const RunConfig&)> get;
};

void expect(const Value& v, Value::Type type, std::string_view key, std::size_t line) {
    if (v.type != type) {
        config_error(key, line,
                     "type mismatch: expected " + std::string(type_name(type)) + ", got " +
                         std::string(type_name(v.type)) + " '" + v.raw + "'");
    }
}

template <class Access>
Field real_field(std::string name, Access access) {
    return {name,
            [name, access](RunConfig& c, const Value& v, std::size_t line) {
                expect(v, Value::Type::number, name, line);
                if (!std::isfinite(v.number)) config_error(name, line, "value must be finite");
                access(c) = v.number;
            },
            [access](const RunConfig& c) { return format_double(access(const_cast<RunConfig&>(c))); }};
}

template <class Access>
Field count_field(std::string name, Access access) {
    return {name,
            [name, access](RunConfig& c, const Value& v, std::size_t line) {
                expect(v, Value::Type::number, name, line);
                std::uint64_t n = 0;
                const auto [ptr, ec] = std::from_chars(v.raw.data(), v.raw.data() + v.raw.size(), n);
                if (ec != std::errc{} || ptr != v.raw.data() + v.raw.size()) {
                    config_error(name, line, "type mismatch: expected a non-negative integer, got '" + v.raw + "'");
                }
                access(c) = static_cast<std::remove_reference_t<decltype(access(c))>>(n);
            },
            [access](const RunConfig& c) { return std::to_string(access(const_cast<RunConfig&>(c))); }};
}

template <class Access>
Field bool_field(std::string name, Access access) {
    return {name,
            [name, access](RunConfig& c, const Value& v, std::size_t line) {
                expect(v, Value::Type::boolean, name, line);
                access(c) = v.boolean;
            },
            [access](const RunConfig& c) { return std::string(access(const_cast<RunConfig&>(c)) ? "true" : "false"); }};
}

template <class Access>
Field string_field(std::string name, Access access) {
    return {name,
            [name, access](RunConfig& c, const Value& v, std::size_t line) {
                expect(v, Value::Type::string, name, line);
                access(c) = v.raw;
            },
            [access](const RunConfig& c) { return quote(access(const_cast<RunConfig&>(c))); }};
}

template <class Access>
Field list_field(std::string name, Access access) {
    return {name,
            [name, access](RunConfig& c, const Value& v, std::size_t line) {
                expect(v, Value::Type::list, name, line);
                access(c) = v.list;
            },
            [access](const RunConfig& c) { return format_list(access(const_cast<RunConfig&>(c))); }};
}

template <class Access, class Parse, class Print>
Field enum_field(std::string name, Access access, Parse parse, Print print, std::string allowed) {
    return {name,
            [name, access, parse, allowed](RunConfig& c, const Value& v, std::size_t line) {
                expect(v, Value::Type::string, name, line);
                const auto parsed = parse(v.raw);
                if (!parsed) config_error(name, line, "unknown value '" + v.raw + "' (allowed: " + allowed + ")");
                access(c) = *parsed;
            },
            [access, print](const RunConfig& c) { return std::string(print(access(const_cast<RunConfig&>(c)))); }};
}

const std::vector<Field>& fields() {
    static const std::vector<Field> table = [] {
        std::vector<Field> f;
        f.push_back(enum_field(
            "command", [](RunConfig& c) -> Command& { return c.command; }, parse_command,
            [](Command x) { return to_string(x); },
            "classical-poincare, lyapunov, trajectory, ensemble, wigner, scaling-check, validate"));
        f.push_back(string_field("output_dir", [](RunConfig& c) -> std::string& { return c.output_dir; }));

        f.push_back(real_field("delta_over_gamma", [](RunConfig& c) -> double& { return c.params.delta; }));
        f.push_back(real_field("chi0_over_gamma", [](RunConfig& c) -> double& { return c.params.chi0; }));
        f.push_back(real_field("chi1_over_gamma", [](RunConfig& c) -> double& { return c.params.chi1; }));
        f.push_back(real_field("omega_over_gamma", [](RunConfig& c) -> double& { return c.params.omega; }));
        f.push_back(real_field("f0_over_gamma", [](RunConfig& c) -> double& { return c.params.f0; }));
        f.push_back(real_field("f1_over_gamma", [](RunConfig& c) -> double& { return c.params.f1; }));
        f.push_back(real_field("small_delta_over_gamma", [](RunConfig& c) -> double& { return c.params.small_delta; }));
        f.push_back(real_field("n_th", [](RunConfig& c) -> double& { return c.params.n_th; }));
        f.push_back(enum_field(
            "chi_modulation", [](RunConfig& c) -> ChiModulation& { return c.params.chi_mod; }, parse_chi_modulation,
            [](ChiModulation x) { return to_string(x); }, "constant, sinusoidal"));
        f.push_back(enum_field(
            "drive_modulation", [](RunConfig& c) -> DriveModulation& { return c.params.f_mod; },
            parse_drive_modulation, [](DriveModulation x) { return to_string(x); },
            "constant, complex_exponential, complex_exponential_negative, sinusoidal"));
        f.push_back(real_field("lambda", [](RunConfig& c) -> double& { return c.lambda; }));

        f.push_back(enum_field(
            "initial_state", [](RunConfig& c) -> InitialState& { return c.initial_state; }, parse_initial_state,
            [](InitialState x) { return to_string(x); }, "vacuum, coherent, fock"));
        f.push_back(real_field("alpha0_re", [](RunConfig& c) -> double& { return c.alpha0_re; }));
        f.push_back(real_field("alpha0_im", [](RunConfig& c) -> double& { return c.alpha0_im; }));
        f.push_back(count_field("fock_n", [](RunConfig& c) -> std::size_t& { return c.fock_n; }));

        f.push_back(real_field("dt", [](RunConfig& c) -> double& { return c.dt; }));
        f.push_back(real_field("t_final", [](RunConfig& c) -> double& { return c.t_final; }));
        f.push_back(count_field("dim", [](RunConfig& c) -> std::size_t& { return c.dim; }));
        f.push_back(count_field("sample_every", [](RunConfig& c) -> std::size_t& { return c.sample_every; }));
        f.push_back(enum_field(
            "scheme", [](RunConfig& c) -> StepScheme& { return c.scheme; }, parse_step_scheme,
            [](StepScheme x) { return to_string(x); }, "exponential_euler, explicit_euler, strang_split"));
        f.push_back(bool_field("renorm", [](RunConfig& c) -> bool& { return c.renorm; }));
        f.push_back(real_field("leakage_threshold", [](RunConfig& c) -> double& { return c.leakage_threshold; }));
        f.push_back(count_field("n_traj", [](RunConfig& c) -> std::size_t& { return c.n_traj; }));
        f.push_back(count_field("seed", [](RunConfig& c) -> std::uint64_t& { return c.seed; }));
        f.push_back(count_field("trajectory_index", [](RunConfig& c) -> std::uint64_t& { return c.trajectory_index; }));

        f.push_back(real_field("poincare_t0", [](RunConfig& c) -> double& { return c.poincare_t0; }));
        f.push_back(count_field("n_points", [](RunConfig& c) -> std::size_t& { return c.n_points; }));
        f.push_back(count_field("skip_periods", [](RunConfig& c) -> std::size_t& { return c.skip_periods; }));
        f.push_back(count_field("horizon_periods", [](RunConfig& c) -> std::size_t& { return c.horizon_periods; }));
        f.push_back(count_field("transient_periods", [](RunConfig& c) -> std::size_t& { return c.transient_periods; }));
        f.push_back(count_field("renorm_periods", [](RunConfig& c) -> std::size_t& { return c.renorm_periods; }));
        f.push_back(real_field("separation", [](RunConfig& c) -> double& { return c.separation; }));

        f.push_back(enum_field(
            "grid_kind", [](RunConfig& c) -> GridKind& { return c.grid_kind; }, parse_grid_kind,
            [](GridKind x) { return to_string(x); }, "cartesian, polar"));
        f.push_back(real_field("grid_extent", [](RunConfig& c) -> double& { return c.grid_extent; }));
        f.push_back(count_field("grid_n0", [](RunConfig& c) -> std::size_t& { return c.grid_n0; }));
        f.push_back(count_field("grid_n1", [](RunConfig& c) -> std::size_t& { return c.grid_n1; }));
        f.push_back(list_field("snapshot_times", [](RunConfig& c) -> std::vector<double>& { return c.snapshot_times; }));
        f.push_back(list_field("contour_levels", [](RunConfig& c) -> std::vector<double>& { return c.contour_levels; }));
        f.push_back(string_field("density_file", [](RunConfig& c) -> std::string& { return c.density_file; }));

        f.push_back(list_field("check_times", [](RunConfig& c) -> std::vector<double>& { return c.check_times; }));
        f.push_back(real_field("tolerance_se", [](RunConfig& c) -> double& { return c.tolerance_se; }));
        f.push_back(real_field("tolerance_rel", [](RunConfig& c) -> double& { return c.tolerance_rel; }));
        f.push_back(real_field("overlap_threshold", [](RunConfig& c) -> double& { return c.overlap_threshold; }));
        return f;
    }();
    return table;
}

using LineMap = std::map<std::string, std::size_t, std::less<>>;

void check_constraints(const RunConfig& c, const LineMap& lines) {
    auto check = [&](bool ok, std::string_view key, const std::string& what) {
        if (ok) return;
        const auto it = lines.find(key);
        config_error(key, it == lines.end() ? 0 : it->second, "constraint violated: " + what);
    };
    check(!c.output_dir.empty(), "output_dir", "must not be empty");
    check(c.lambda > 0.0, "lambda", "must be > 0");
    check(c.params.n_th >= 0.0, "n_th", "must be >= 0");
    check(c.params.omega >= 0.0, "omega_over_gamma", "must be >= 0");
    check(c.params.small_delta >= 0.0, "small_delta_over_gamma", "must be >= 0");
    check(c.params.chi_mod == ChiModulation::constant || c.params.omega > 0.0, "omega_over_gamma",
          "must be > 0 when chi_modulation is sinusoidal");
    check(c.params.f_mod == DriveModulation::constant || c.params.small_delta > 0.0, "small_delta_over_gamma",
          "must be > 0 when drive_modulation is not constant");
    check(c.dt > 0.0, "dt", "must be > 0");
    check(c.t_final > 0.0, "t_final", "must be > 0");
    check(c.dim >= 2, "dim", "must be >= 2");
    check(c.sample_every >= 1, "sample_every", "must be >= 1");
    check(c.leakage_threshold > 0.0 && c.leakage_threshold <= 1.0, "leakage_threshold", "must lie in (0, 1]");
    check(c.n_traj >= 1, "n_traj", "must be >= 1");
    check(c.fock_n < c.dim, "fock_n", "must be < dim");
    check(c.n_points >= 1, "n_points", "must be >= 1");
    check(c.horizon_periods >= 1, "horizon_periods", "must be >= 1");
    check(c.renorm_periods >= 1, "renorm_periods", "must be >= 1");
    check(c.separation > 0.0, "separation", "must be > 0");
    check(c.grid_extent >= 0.0, "grid_extent", "must be >= 0 (0 selects the default)");
    check(c.grid_n0 >= kMinGridNodes, "grid_n0", "must be >= 64");
    check(c.grid_n1 >= kMinGridNodes, "grid_n1", "must be >= 64");
    for (double t : c.snapshot_times) check(t >= 0.0 && t <= c.t_final, "snapshot_times", "times must lie in [0, t_final]");
    if (c.command == Command::validate) {
        for (double t : c.check_times) check(t > 0.0 && t <= c.t_final, "check_times", "times must lie in (0, t_final]");
    }
    check(c.tolerance_se > 0.0, "tolerance_se", "must be > 0");
    check(c.tolerance_rel >= 0.0, "tolerance_rel", "must be >= 0");
    check(c.overlap_threshold >= 0.0 && c.overlap_threshold <= 1.0, "overlap_threshold", "must lie in [0, 1]");
    check(c.command != Command::validate || !c.check_times.empty(), "check_times", "validate needs at least one time");
}

}  // namespace

std::string_view to_string(Command command) noexcept {
    for (const auto& [c, name] : kCommands)
        if (c == command) return name;
    return "unknown";
}

std::optional<Command> parse_command(std::string_view text) noexcept {
    for (const auto& [c, name] : kCommands)
        if (name == text) return c;
    return std::nullopt;
}

std::string_view to_string(InitialState state) noexcept {
    for (const auto& [s, name] : kInitialStates)
        if (s == state) return name;
    return "unknown";
}

std::optional<InitialState> parse_initial_state(std::string_view text) noexcept {
    for (const auto& [s, name] : kInitialStates)
        if (name == text) return s;
    return std::nullopt;
}

RunConfig parse_config(std::string_view text) {
    RunConfig cfg;
    LineMap lines;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        ++line_no;
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;

        const std::string_view line = trim(strip_comment(raw));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            fail(ErrorKind::config, "line " + std::to_string(line_no) + ": expected 'key = value', got '" +
                                        std::string(line) + "'");
        }
        const std::string key(trim(line.substr(0, eq)));
        if (key.empty()) fail(ErrorKind::config, "line " + std::to_string(line_no) + ": missing key before '='");

        const auto& table = fields();
        const auto it = std::find_if(table.begin(), table.end(), [&](const Field& f) { return f.name == key; });
        if (it == table.end()) config_error(key, line_no, "unknown key");
        if (lines.contains(key)) {
            config_error(key, line_no, "duplicate key (first set on line " + std::to_string(lines[key]) + ")");
        }
        it->set(cfg, lex_value(trim(line.substr(eq + 1)), key, line_no), line_no);
        lines[key] = line_no;
    }
    if (!lines.contains("command")) fail(ErrorKind::config, "command required");
    check_constraints(cfg, lines);
    try {
        cfg.params.validate();
    } catch (const Error& e) {
        fail(ErrorKind::config, std::string("model parameters: ") + e.what());
    }
    return cfg;
}

std::string serialize(const RunConfig& cfg) {
    std::ostringstream out;
    for (const auto& f : fields()) out << f.name << " = " << f.get(cfg) << '\n';
    return out.str();
}

void validate(const RunConfig& cfg) {
    check_constraints(cfg, {});
    try {
        cfg.params.validate();
    } catch (const Error& e) {
        fail(ErrorKind::config, std::string("model parameters: ") + e.what());
    }
}

ModelParams effective_params(const RunConfig& cfg) {
    if (cfg.lambda == 1.0) return cfg.params;
    return scale_params(cfg.params, ScaleFactor(cfg.lambda));
}

std::vector<std::string> known_keys() {
    std::vector<std::string> out;
    for (const auto& f : fields()) out.push_back(f.name);
    return out;
}

}  // namespace kerrchaos::cli
