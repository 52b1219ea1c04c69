#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "negtemp/config.hpp"
#include "negtemp/csv.hpp"

using namespace negtemp;

namespace {

const double inf = std::numeric_limits<double>::infinity();

SweepRow row(double kt, AtomLabel atom = AtomLabel::A) {
    SweepRow r;
    r.scenario = "fig3";
    r.k = 1;
    r.n_bath = 0.5;
    r.axis = SweepAxis::cooperativity;
    r.axis_value = 0.1 * 3;
    r.atom = atom;
    r.sigma_z = -1.0 / 3.0;
    r.entropy_nats = std::log(2.0) - 1e-17;
    r.kT_over_omega0 = kt;
    r.coherence_abs = 1.2345678901234567e-9;
    r.n_max_used = 27;
    r.residual = 3.1e-16;
    return r;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::filesystem::path scratch(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / "negtemp_test_io";
    std::filesystem::create_directories(dir);
    return dir / name;
}

} // namespace

TEST_CASE("number formatting") {
    CHECK(format_double(inf) == "inf");
    CHECK(format_double(-inf) == "-inf");
    CHECK(format_double(0.5) == "0.5");
    CHECK(parse_double("inf") == inf);
    CHECK(parse_double("-inf") == -inf);
    for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 6.02214076e23}) CHECK(parse_double(format_double(v)) == v);
    CHECK_THROWS_AS(parse_double("1.5x"), IoError);
    CHECK_THROWS_AS(parse_double(""), IoError);
}

TEST_CASE("csv header and empty output") {
    CHECK(kCsvHeader ==
          "scenario,k,n_bath,axis,axis_value,atom,sigma_z,entropy_nats,kT_over_omega0,coherence_abs,n_max_used,residual");
    CHECK(format_csv({}) == std::string(kCsvHeader) + "\n");
    const auto p = scratch("empty.csv");
    write_csv({}, p);
    CHECK(slurp(p) == std::string(kCsvHeader) + "\n");
    CHECK(read_csv(p).empty());
}

TEST_CASE("csv round trip") {
    const std::vector<SweepRow> rows{row(-2.75), row(inf, AtomLabel::B), row(-inf), row(0.0)};
    const auto text = format_csv(rows);
    CHECK(text.find(",inf,") != std::string::npos);
    CHECK(text.find(",-inf,") != std::string::npos);
    CHECK(text.find('\r') == std::string::npos);
    CHECK(parse_csv(text) == rows);

    const auto p = scratch("rows.csv");
    write_csv(rows, p);
    CHECK(read_csv(p) == rows);
    CHECK(slurp(p) == text);
}

TEST_CASE("csv rejects malformed input") {
    CHECK_THROWS_AS(parse_csv("scenario,k\n"), IoError);
    const std::string header = std::string(kCsvHeader) + "\n";
    CHECK_THROWS_AS(parse_csv(header + "fig1,1,0,cooperativity,1,A,0,0,0,0,8\n"), IoError);
    CHECK_THROWS_AS(parse_csv(header + "fig1,1,0,cooperativity,1,C,0,0,0,0,8,0\n"), IoError);
    CHECK_THROWS_AS(parse_csv(header + "fig1,1,0,sideways,1,A,0,0,0,0,8,0\n"), IoError);
    CHECK_THROWS_AS(read_csv(scratch("does_not_exist.csv")), IoError);
    CHECK_THROWS_AS(write_csv({}, scratch("no_such_dir") / "x" / "y.csv"), IoError);
}

TEST_CASE("config: presets and overrides") {
    const auto cfg = parse_run_config(R"(
# comment
[solver]
method = direct
reduce_blocks = false

[scenario quick]
preset = fig3
n_list = 0
grid = log 0.5 5 4   # trailing comment
)");
    CHECK(cfg.solver.method == SolverMethod::direct);
    CHECK_FALSE(cfg.solver.reduce_blocks);
    REQUIRE(cfg.scenarios.size() == 1);
    const auto& s = cfg.scenarios[0];
    CHECK(s.name == "quick");
    CHECK(s.config.scenario_id == "fig3");
    CHECK(s.config.fixed.lambda == 3.0);
    CHECK(s.config.n_list == std::vector<double>{0.0});
    CHECK(s.config.axis_grid.size() == 4);
    CHECK(s.config.axis_grid.back() == 5.0);
}

TEST_CASE("config: explicit scenario") {
    const auto cfg = parse_run_config(R"(
[scenario a]
k_list = 1, 2
n_list = 0, 0.5
axis = lambda_over_gamma
grid = values 0, 1.5, 3
coupling_g = 2
gamma_b = 0.5
kappa = 2
n_start = 6
n_cap = 50
convention = doubled

[scenario b]
k_list = 0
axis = bath_n
grid = linear 0 2 3
cooperativity = 10
)");
    REQUIRE(cfg.scenarios.size() == 2);
    const auto& a = cfg.scenarios[0].config;
    CHECK(a.scenario_id == "custom");
    CHECK(a.k_list == std::vector<unsigned>{1, 2});
    CHECK(a.axis == SweepAxis::lambda_over_gamma);
    CHECK(a.axis_grid == std::vector<double>{0, 1.5, 3});
    CHECK(a.fixed.gamma_B == 0.5);
    CHECK(a.fixed.kappa == 2.0);
    CHECK(a.truncation.n_start == 6);
    CHECK(a.convention == DissipatorConvention::doubled);
    CHECK(a.two_atom());
    const auto& b = cfg.scenarios[1].config;
    CHECK(b.axis_grid == std::vector<double>{0, 1, 2});
    CHECK_FALSE(b.two_atom());
}

TEST_CASE("config: formatted sections parse back") {
    for (int id = 1; id <= 7; ++id) {
        const NamedScenario s{"fig" + std::to_string(id), canonical_scenario(id)};
        const auto back = parse_run_config(format_scenario_section(s));
        const auto& c = back.scenarios.at(0).config;
        CHECK(c.axis_grid == s.config.axis_grid);
        CHECK(c.k_list == s.config.k_list);
        CHECK(c.n_list == s.config.n_list);
        CHECK(c.fixed.lambda == s.config.fixed.lambda);
        CHECK(c.fixed.coupling_g == s.config.fixed.coupling_g);
    }
}

TEST_CASE("config errors") {
    const char* bad[] = {
        "",
        "[solver]\nmethod = direct\n",
        "k_list = 1\n",
        "[scenario a]\npreset = fig1\nfrobnicate = 1\n",
        "[scenario a]\npreset = fig1\nk_list = 1\nk_list = 2\n",
        "[scenario a]\npreset = fig1\n[scenario a]\npreset = fig2\n",
        "[scenario a]\nk_list = 1\npreset = fig1\n",
        "[scenario a]\npreset = fig9\n",
        "[scenario a]\npreset = fig1\ngrid = cubic 0 1 3\n",
        "[scenario a]\npreset = fig1\ngrid = log 0 1 3\n",
        "[scenario a]\npreset = fig1\ngrid = values 1, 1\n",
        "[scenario a]\npreset = fig1\nn_start = 2\n",
        "[scenario a]\npreset = fig1\nkappa = abc\n",
        "[scenario a]\nk_list = 1\ngrid = values 1\n",
        "[scenario]\npreset = fig1\n",
        "[mystery]\n",
        "[solver]\nmethod = guess\n",
        "[solver]\n[solver]\n[scenario a]\npreset = fig1\n",
        "[scenario a]\npreset = fig1\nconvention = half\n",
        "[scenario a]\npreset = fig1\nno equals sign\n",
    };
    for (const char* text : bad) {
        CAPTURE(std::string(text));
        CHECK_THROWS_AS(parse_run_config(text), ConfigError);
    }
    try {
        parse_run_config("[scenario a]\npreset = fig1\n\nfrobnicate = 1\n");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("line 4") != std::string::npos);
    }
    CHECK_THROWS_AS(load_run_config(scratch("missing.ini")), ConfigError);
}

TEST_CASE("shipped configs parse") {
    const std::filesystem::path dir = std::filesystem::path(NEGTEMP_SOURCE_DIR) / "configs";
    int seen = 0;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.path().extension() != ".ini") continue;
        CAPTURE(entry.path().string());
        CHECK_NOTHROW(load_run_config(entry.path()));
        ++seen;
    }
    CHECK(seen >= 2);
    CHECK(load_run_config(dir / "all_figures.ini").scenarios.size() == 7);
}
