#include <doctest.h>

#include <cmath>
#include <limits>

#include "negtemp/sweeps.hpp"

using namespace negtemp;

namespace {

SweepRow synthetic(double x, double sz, double kt = 0.0) {
    SweepRow r;
    r.scenario = "custom";
    r.k = 1;
    r.axis_value = x;
    r.sigma_z = sz;
    r.kT_over_omega0 = kt;
    return r;
}

ScenarioConfig small_sweep() {
    ScenarioConfig c;
    c.k_list = {1, 2};
    c.n_list = {0.0, 0.5};
    c.axis_grid = log_grid(0.2, 20.0, 6);
    return c;
}

ModelSpec sideband(unsigned k, double C, double n) {
    ModelSpec s;
    s.k = k;
    s.coupling_g = coupling_from_cooperativity(C, 1, 1);
    s.n_f = s.n_a = n;
    return s;
}

} // namespace

TEST_CASE("grids") {
    const auto lg = log_grid(0.1, 100, 40);
    CHECK(lg.size() == 40);
    CHECK(lg.front() == 0.1);
    CHECK(lg.back() == 100.0);
    CHECK(lg[13] == doctest::Approx(1.0));
    for (std::size_t i = 1; i < lg.size(); ++i) CHECK(lg[i] / lg[i - 1] == doctest::Approx(lg[1] / lg[0]));
    const auto ln = linear_grid(0, 2, 21);
    CHECK(ln[10] == doctest::Approx(1.0));
    CHECK(ln.back() == 2.0);
    CHECK(log_grid(1, 2, 0).empty());
    CHECK_THROWS(log_grid(0, 2, 3));
}

TEST_CASE("truncation policy ladder") {
    TruncationPolicy p;
    std::vector<Index> ladder{p.n_start};
    while (ladder.back() < p.n_cap) ladder.push_back(p.next(ladder.back()));
    CHECK(ladder == std::vector<Index>{8, 12, 18, 27, 41, 62, 93, 96});
}

TEST_CASE("sign change detection") {
    const std::vector<SweepRow> rows{synthetic(0.5, -0.5), synthetic(1.5, 0.5)};
    const auto c = detect_sign_change(rows, AtomLabel::A, 1, 0.0);
    REQUIRE(c.size() == 1);
    CHECK(c[0] == doctest::Approx(1.0));
    CHECK(detect_sign_change(rows, AtomLabel::B, 1, 0.0).empty());
    CHECK(detect_sign_change({synthetic(1, -1), synthetic(2, -0.5)}, AtomLabel::A, 1, 0).empty());
    const auto exact = detect_sign_change({synthetic(1, -1), synthetic(2, 0), synthetic(3, 1)}, AtomLabel::A, 1, 0);
    CHECK(exact == std::vector<double>{2.0});
    // rows are sorted by axis value before scanning
    const auto unsorted = detect_sign_change({synthetic(1.5, 0.5), synthetic(0.5, -0.5)}, AtomLabel::A, 1, 0);
    CHECK(unsorted.size() == 1);
}

TEST_CASE("extremum detection") {
    SUBCASE("parabola vertex") {
        const auto [x, y] = parabola_vertex(1, -1, 2, 0, 3, -1);
        CHECK(x == doctest::Approx(2.0));
        CHECK(y == doctest::Approx(0.0));
        CHECK_THROWS(parabola_vertex(1, 0, 1, 1, 2, 3));
    }
    SUBCASE("interior maximum is refined") {
        std::vector<SweepRow> rows;
        for (double x : {0.0, 1.0, 2.0, 3.0, 4.0}) rows.push_back(synthetic(x, 0, -(x - 2.3) * (x - 2.3)));
        const auto e = detect_extremum(rows, AtomLabel::A, 1, 0, Column::kT_over_omega0);
        CHECK_FALSE(e.at_boundary);
        CHECK(e.axis_value == doctest::Approx(2.3));
        CHECK(e.value == doctest::Approx(0.0));
    }
    SUBCASE("monotone data is flagged") {
        std::vector<SweepRow> rows;
        for (double x : {0.0, 1.0, 2.0, 3.0}) rows.push_back(synthetic(x, x));
        const auto hi = detect_extremum(rows, AtomLabel::A, 1, 0, Column::sigma_z);
        CHECK(hi.at_boundary);
        CHECK(hi.axis_value == 3.0);
        const auto lo = detect_extremum(rows, AtomLabel::A, 1, 0, Column::sigma_z, ExtremumKind::minimum);
        CHECK(lo.at_boundary);
        CHECK(lo.axis_value == 0.0);
    }
    SUBCASE("infinite temperatures are skipped") {
        const double inf = std::numeric_limits<double>::infinity();
        std::vector<SweepRow> rows{synthetic(0, 0, 1), synthetic(1, 0, inf), synthetic(2, 0, 3),
                                   synthetic(3, 0, 2), synthetic(4, 0, 1)};
        const auto e = detect_extremum(rows, AtomLabel::A, 1, 0, Column::kT_over_omega0);
        CHECK_FALSE(e.at_boundary);
        // the refinement uses the neighbouring finite samples at x=0 and x=3
        CHECK(e.axis_value == doctest::Approx(parabola_vertex(0, 1, 2, 3, 3, 2).first));
        CHECK_THROWS(detect_extremum({synthetic(0, 0), synthetic(1, 0)}, AtomLabel::A, 1, 0, Column::sigma_z));
    }
}

TEST_CASE("truncation convergence") {
    SUBCASE("boson-only vacuum converges at n_start") {
        ModelSpec s;
        s.topology = Topology::boson_only;
        CHECK(converge_truncation(s, 1e-6, 1e-8, 96) == 8);
    }
    SUBCASE("qubit-only returns n_start") {
        ModelSpec s;
        s.topology = Topology::qubit_only;
        s.n_a = 0.5;
        CHECK(converge_truncation(s, 1e-6, 1e-8, 96) == 8);
    }
    SUBCASE("k=1, C=10, n=0 is stable under one further increment") {
        const auto spec = sideband(1, 10, 0);
        TruncationPolicy policy;
        const auto cp = converge_steady_state(spec, policy);
        CHECK(cp.n_max <= 32);
        CHECK(cp.boson_tail < policy.tail_eps);
        CHECK(cp.last_delta < policy.tol_sigma_z);
        auto bigger = spec;
        bigger.n_max = policy.next(cp.n_max);
        const auto ss = steady_state(liouvillian(build_model(bigger)));
        CHECK(std::abs(qubit_thermo(ss.rho, 1).sigma_z - cp.qubits[0].sigma_z) < 1e-6);
        CHECK(converge_truncation(spec, 1e-6, 1e-8, 96) == cp.n_max);
    }
    SUBCASE("cap reached") {
        try {
            converge_truncation(sideband(2, 100, 2), 1e-6, 1e-8, 12);
            FAIL("expected TruncationFailure");
        } catch (const TruncationFailure& e) {
            CHECK(e.last_n_max() == 12);
            CHECK(e.last_delta() > 1e-6);
        }
    }
}

TEST_CASE("point specs follow the scenario axis") {
    const auto f7 = canonical_scenario(7);
    const auto s = point_spec(f7, 2, 0.0, 1.5);
    CHECK(s.n_f == 1.5);
    CHECK(s.n_a == 1.5);
    CHECK(s.coupling_g == doctest::Approx(std::sqrt(10.0)));
    CHECK(s.lambda == 3.0);
    CHECK(s.gamma_B == 1.0);
    const auto f5 = point_spec(canonical_scenario(5), 1, 0.5, 7.0);
    CHECK(f5.lambda == 7.0);
    CHECK(f5.coupling_g == doctest::Approx(std::sqrt(10.0)));
    const auto f1 = point_spec(canonical_scenario(1), 3, 2.0, 4.0);
    CHECK_FALSE(f1.lambda.has_value());
    CHECK(f1.coupling_g == doctest::Approx(2.0));
}

TEST_CASE("canonical scenarios validate") {
    for (int id = 1; id <= 7; ++id) CHECK_NOTHROW(canonical_scenario(id).validate());
    CHECK_THROWS_AS(canonical_scenario(8), ConfigError);
    CHECK(canonical_scenario(1).axis_grid.size() == 40);
    CHECK(canonical_scenario(4).axis_grid.back() == 12.0);
    CHECK(canonical_scenario(7).axis_grid.size() == 21);
}

TEST_CASE("scenario validation") {
    auto c = small_sweep();
    CHECK_NOTHROW(c.validate());
    auto bad = c;
    bad.axis_grid = {1, 1};
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = c;
    bad.k_list.clear();
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = c;
    bad.fixed.cooperativity = 1.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = c;
    bad.truncation.n_start = 3;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = c;
    bad.scenario_id = "fig9";
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = c;
    bad.axis = SweepAxis::bath_n;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("run_scenario") {
    const auto c = small_sweep();
    RunOptions serial;
    serial.jobs = 1;
    RunOptions parallel;
    parallel.jobs = 4;
    const auto a = run_scenario(c, serial);
    const auto b = run_scenario(c, parallel);

    CHECK(a.size() == 2 * 2 * 6);
    CHECK(a == b);
    for (std::size_t i = 1; i < a.size(); ++i) {
        const auto key = [](const SweepRow& r) { return std::tuple(r.k, r.n_bath, r.axis_value); };
        CHECK(key(a[i - 1]) < key(a[i]));
    }
    for (const auto& r : a) {
        CHECK(r.residual <= SolverOptions{}.direct_tolerance);
        CHECK(r.atom == AtomLabel::A);
    }
    // large C inverts every k >= 1 curve
    CHECK(select_rows(a, AtomLabel::A, 2, 0.0).back().sigma_z > 0);

    auto empty = c;
    empty.axis_grid.clear();
    CHECK(run_scenario(empty).empty());
}

TEST_CASE("run_scenario reports the failing point") {
    auto c = small_sweep();
    c.axis_grid = {1.0, 50.0};
    c.n_list = {2.0};
    c.k_list = {2};
    c.truncation.n_cap = 10;
    try {
        run_scenario(c);
        FAIL("expected ScenarioFailure");
    } catch (const ScenarioFailure& e) {
        CHECK(std::string(e.what()).find("k=2") != std::string::npos);
    }
}

TEST_CASE("two-atom rows carry both atoms") {
    auto c = canonical_scenario(5);
    c.n_list = {0.0};
    c.axis_grid = {0.0, 6.0};
    const auto rows = run_scenario(c);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].atom == AtomLabel::A);
    CHECK(rows[1].atom == AtomLabel::B);
    CHECK(rows[0].axis_value == rows[1].axis_value);
    // with no exchange, atom B only sees its bath
    CHECK(rows[1].sigma_z == doctest::Approx(-1.0));
}

TEST_CASE("population temperature agrees with dS/dE across sweep points") {
    // E = <H_a>/omega_0 = sigma_z / 2; T = dE/dS by centred differences.
    for (auto [k, n] : {std::pair{1u, 0.0}, std::pair{1u, 0.5}, std::pair{2u, 0.5}}) {
        ScenarioConfig c;
        c.k_list = {k};
        c.n_list = {n};
        c.axis_grid = log_grid(0.1, 100, 80);
        const auto rows = run_scenario(c);
        int checked = 0;
        for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
            const auto &lo = rows[i - 1], &mid = rows[i], &hi = rows[i + 1];
            if (mid.coherence_abs >= 1e-6) continue;
            const bool monotone = (hi.sigma_z - mid.sigma_z) * (mid.sigma_z - lo.sigma_z) > 0;
            const bool straddles = lo.sigma_z * hi.sigma_z <= 0;
            if (!monotone || straddles) continue;
            const double t_fd = 0.5 * (hi.sigma_z - lo.sigma_z) / (hi.entropy_nats - lo.entropy_nats);
            CHECK(std::abs(t_fd - mid.kT_over_omega0) <= 0.05 * std::abs(mid.kT_over_omega0));
            ++checked;
        }
        CHECK(checked > 60);
    }
}
