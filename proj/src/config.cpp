#include "negtemp/config.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "negtemp/csv.hpp"

namespace negtemp {
namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(std::size_t line, const std::string& msg) {
    throw ConfigError("line " + std::to_string(line) + ": " + msg);
}

double to_double(std::string_view v, std::size_t line) {
    try {
        return parse_double(trim(v));
    } catch (const IoError&) {
        fail(line, "expected a number, got '" + std::string(v) + "'");
    }
}

long to_long(std::string_view v, std::size_t line) {
    const double d = to_double(v, line);
    if (d != static_cast<double>(static_cast<long>(d))) fail(line, "expected an integer");
    return static_cast<long>(d);
}

bool to_bool(std::string_view v, std::size_t line) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    fail(line, "expected true/false, got '" + std::string(v) + "'");
}

std::vector<std::string_view> list_items(std::string_view v) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (start <= v.size()) {
        const auto pos = v.find(',', start);
        const auto item = trim(v.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (!item.empty()) out.push_back(item);
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::vector<double> parse_grid(std::string_view v, std::size_t line) {
    std::istringstream is{std::string(v)};
    std::string kind;
    is >> kind;
    if (kind == "values") {
        std::string rest;
        std::getline(is, rest);
        std::vector<double> out;
        for (auto item : list_items(rest)) out.push_back(to_double(item, line));
        return out;
    }
    std::string lo, hi, count;
    if (!(is >> lo >> hi >> count)) fail(line, "grid expects '" + kind + " LO HI N'");
    std::string extra;
    if (is >> extra) fail(line, "trailing text in grid specification");
    const double a = to_double(lo, line), b = to_double(hi, line);
    const long n = to_long(count, line);
    if (n < 0) fail(line, "grid point count must be >= 0");
    try {
        if (kind == "log") return log_grid(a, b, static_cast<std::size_t>(n));
        if (kind == "linear") return linear_grid(a, b, static_cast<std::size_t>(n));
    } catch (const InvalidArgument& e) {
        fail(line, e.what());
    }
    fail(line, "unknown grid kind '" + kind + "' (use log, linear or values)");
}

DissipatorConvention parse_convention(std::string_view v, std::size_t line) {
    if (v == "standard") return DissipatorConvention::standard;
    if (v == "doubled") return DissipatorConvention::doubled;
    fail(line, "convention must be 'standard' or 'doubled'");
}

void apply_solver_key(SolverOptions& s, std::string_view key, std::string_view v, std::size_t line) {
    if (key == "method") {
        try {
            s.method = solver_method_from_string(std::string(v));
        } catch (const InvalidArgument& e) {
            fail(line, e.what());
        }
    } else if (key == "reduce_blocks") {
        s.reduce_blocks = to_bool(v, line);
    } else if (key == "iterative_threshold") {
        s.iterative_threshold = to_long(v, line);
    } else if (key == "direct_tolerance") {
        s.direct_tolerance = to_double(v, line);
    } else if (key == "iterative_tolerance") {
        s.iterative_tolerance = to_double(v, line);
    } else if (key == "max_iterations") {
        s.max_iterations = static_cast<int>(to_long(v, line));
    } else {
        fail(line, "unknown solver key '" + std::string(key) + "'");
    }
}

void apply_scenario_key(ScenarioConfig& c, std::string_view key, std::string_view v, std::size_t line) {
    if (key == "id") {
        c.scenario_id = std::string(v);
    } else if (key == "k_list") {
        c.k_list.clear();
        for (auto item : list_items(v)) {
            const long k = to_long(item, line);
            if (k < 0) fail(line, "sideband orders must be >= 0");
            c.k_list.push_back(static_cast<unsigned>(k));
        }
    } else if (key == "n_list") {
        c.n_list.clear();
        for (auto item : list_items(v)) c.n_list.push_back(to_double(item, line));
    } else if (key == "axis") {
        try {
            c.axis = sweep_axis_from_string(std::string(v));
        } catch (const ConfigError& e) {
            fail(line, e.what());
        }
    } else if (key == "grid") {
        c.axis_grid = parse_grid(v, line);
    } else if (key == "cooperativity") {
        c.fixed.cooperativity = to_double(v, line);
    } else if (key == "coupling_g") {
        c.fixed.coupling_g = to_double(v, line);
    } else if (key == "lambda") {
        c.fixed.lambda = to_double(v, line);
    } else if (key == "gamma_b") {
        c.fixed.gamma_B = to_double(v, line);
    } else if (key == "kappa") {
        c.fixed.kappa = to_double(v, line);
    } else if (key == "n_start") {
        c.truncation.n_start = to_long(v, line);
    } else if (key == "n_cap") {
        c.truncation.n_cap = to_long(v, line);
    } else if (key == "tol_sigma_z") {
        c.truncation.tol_sigma_z = to_double(v, line);
    } else if (key == "tail_eps") {
        c.truncation.tail_eps = to_double(v, line);
    } else if (key == "growth") {
        c.truncation.growth = to_double(v, line);
    } else if (key == "convention") {
        c.convention = parse_convention(v, line);
    } else {
        fail(line, "unknown scenario key '" + std::string(key) + "'");
    }
}

const char* convention_name(DissipatorConvention c) {
    return c == DissipatorConvention::doubled ? "doubled" : "standard";
}

} // namespace

RunConfig parse_run_config(std::string_view text) {
    RunConfig cfg;
    enum class Section { none, solver, scenario } section = Section::none;
    std::set<std::string> names;
    std::set<std::string> seen_keys;
    std::size_t line_no = 0;
    std::size_t section_line = 0;
    bool solver_seen = false;

    auto finish_section = [&] {
        if (section == Section::scenario) {
            try {
                cfg.scenarios.back().config.validate();
            } catch (const ConfigError& e) {
                fail(section_line, e.what());
            }
        }
    };

    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') fail(line_no, "unterminated section header");
            finish_section();
            seen_keys.clear();
            section_line = line_no;
            const auto inner = trim(line.substr(1, line.size() - 2));
            if (inner == "solver") {
                if (solver_seen) fail(line_no, "duplicate [solver] section");
                solver_seen = true;
                section = Section::solver;
                continue;
            }
            if (inner.rfind("scenario", 0) == 0) {
                const auto name = trim(inner.substr(8));
                if (name.empty()) fail(line_no, "scenario section needs a name: [scenario NAME]");
                if (!names.insert(std::string(name)).second) {
                    fail(line_no, "duplicate scenario '" + std::string(name) + "'");
                }
                section = Section::scenario;
                cfg.scenarios.push_back({std::string(name), ScenarioConfig{}});
                continue;
            }
            fail(line_no, "unknown section '" + std::string(inner) + "'");
        }

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) fail(line_no, "expected key = value");
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (!seen_keys.insert(std::string(key)).second) {
            fail(line_no, "key '" + std::string(key) + "' repeated in section");
        }
        switch (section) {
        case Section::none: fail(line_no, "key outside of any section");
        case Section::solver: apply_solver_key(cfg.solver, key, value, line_no); break;
        case Section::scenario: {
            auto& sc = cfg.scenarios.back().config;
            if (key == "preset") {
                if (seen_keys.size() != 1) fail(line_no, "preset must be the first key of a scenario");
                if (value.size() != 4 || value.substr(0, 3) != "fig") fail(line_no, "preset must be fig1..fig7");
                try {
                    sc = canonical_scenario(value[3] - '0');
                } catch (const ConfigError& e) {
                    fail(line_no, e.what());
                }
            } else {
                apply_scenario_key(sc, key, value, line_no);
            }
            break;
        }
        }
    }
    finish_section();
    if (cfg.scenarios.empty()) throw ConfigError("configuration lists no scenarios");
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_run_config(ss.str());
}

std::string format_scenario_section(const NamedScenario& s) {
    const ScenarioConfig& c = s.config;
    std::ostringstream os;
    os << "[scenario " << s.name << "]\n";
    os << "id = " << c.scenario_id << '\n';
    os << "k_list = ";
    for (std::size_t i = 0; i < c.k_list.size(); ++i) os << (i ? ", " : "") << c.k_list[i];
    os << '\n';
    if (!c.n_list.empty()) {
        os << "n_list = ";
        for (std::size_t i = 0; i < c.n_list.size(); ++i) os << (i ? ", " : "") << format_double(c.n_list[i]);
        os << '\n';
    }
    os << "axis = " << to_string(c.axis) << '\n';
    os << "grid = values ";
    for (std::size_t i = 0; i < c.axis_grid.size(); ++i) os << (i ? ", " : "") << format_double(c.axis_grid[i]);
    os << '\n';
    if (c.fixed.cooperativity) os << "cooperativity = " << format_double(*c.fixed.cooperativity) << '\n';
    if (c.fixed.coupling_g) os << "coupling_g = " << format_double(*c.fixed.coupling_g) << '\n';
    if (c.fixed.lambda) os << "lambda = " << format_double(*c.fixed.lambda) << '\n';
    if (c.fixed.gamma_B) os << "gamma_b = " << format_double(*c.fixed.gamma_B) << '\n';
    os << "kappa = " << format_double(c.fixed.kappa) << '\n';
    os << "n_start = " << c.truncation.n_start << '\n';
    os << "n_cap = " << c.truncation.n_cap << '\n';
    os << "tol_sigma_z = " << format_double(c.truncation.tol_sigma_z) << '\n';
    os << "tail_eps = " << format_double(c.truncation.tail_eps) << '\n';
    os << "growth = " << format_double(c.truncation.growth) << '\n';
    os << "convention = " << convention_name(c.convention) << '\n';
    return os.str();
}

} // namespace negtemp
