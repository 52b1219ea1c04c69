#include <doctest.h>

#include <cmath>

#include "negtemp/selfcheck.hpp"
#include "negtemp/sweeps.hpp"
#include "oracles.hpp"

using namespace negtemp;

// Closed-form values worked out by hand and frozen here, before comparing against the solver.

TEST_CASE("frozen: geometric distribution for n = 2") {
    const auto p = oracle::geometric_distribution(2.0, 4);
    CHECK(p[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(p[1] == doctest::Approx(2.0 / 9.0).epsilon(1e-15));
    CHECK(p[2] == doctest::Approx(4.0 / 27.0).epsilon(1e-15));
    CHECK(p[3] == doctest::Approx(8.0 / 81.0).epsilon(1e-15));
}

TEST_CASE("frozen: resonant Bloch fixed points at C = 1, n = 0") {
    // standard: p_e = 4g^2 / (gamma^2 + 8 g^2), |rho_eg| = 2g(1 - 2p_e)/gamma
    // doubled:  p_e = 2g^2 / (4g^2 + 2),       |rho_eg| = g(1 - 2p_e)
    const double std_pe = 4.0 / 9.0, std_coh = 2.0 / 9.0;
    const double dbl_pe = 1.0 / 3.0, dbl_coh = 1.0 / 3.0;

    const auto s = oracle::bloch_steady_state(1.0, 1.0, 0.0, 1.0);
    CHECK(s.p_e() == doctest::Approx(std_pe).epsilon(1e-14));
    CHECK(s.coherence_abs() == doctest::Approx(std_coh).epsilon(1e-14));
    const auto d = oracle::bloch_steady_state(1.0, 1.0, 0.0, 2.0);
    CHECK(d.p_e() == doctest::Approx(dbl_pe).epsilon(1e-14));
    CHECK(d.coherence_abs() == doctest::Approx(dbl_coh).epsilon(1e-14));

    const auto lib_s = bloch_fixed_point(1.0, 1.0, 0.0, DissipatorConvention::standard);
    CHECK(lib_s.p_e == doctest::Approx(std_pe).epsilon(1e-14));
    CHECK(std::abs(lib_s.coherence_eg) == doctest::Approx(std_coh).epsilon(1e-14));
    const auto lib_d = bloch_fixed_point(1.0, 1.0, 0.0, DissipatorConvention::doubled);
    CHECK(lib_d.p_e == doctest::Approx(dbl_pe).epsilon(1e-14));
    CHECK(std::abs(lib_d.coherence_eg) == doctest::Approx(dbl_coh).epsilon(1e-14));
}

TEST_CASE("Bloch closed form matches the numerical Bloch solve") {
    for (auto conv : {DissipatorConvention::standard, DissipatorConvention::doubled}) {
        const double scale = conv == DissipatorConvention::doubled ? 2.0 : 1.0;
        for (double C : {0.01, 0.1, 1.0, 10.0, 100.0}) {
            for (double n : {0.0, 0.5, 2.0}) {
                const double g = std::sqrt(C);
                const auto a = bloch_fixed_point(g, 1.0, n, conv);
                const auto b = oracle::bloch_steady_state(g, 1.0, n, scale);
                CHECK(a.p_e == doctest::Approx(b.p_e()).epsilon(1e-12));
                CHECK(std::abs(a.coherence_eg) == doctest::Approx(b.coherence_abs()).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("carrier steady state within 1e-8 of the Bloch oracle") {
    for (auto conv : {DissipatorConvention::standard, DissipatorConvention::doubled}) {
        const double scale = conv == DissipatorConvention::doubled ? 2.0 : 1.0;
        for (double C : {0.1, 1.0, 10.0, 100.0}) {
            ModelSpec spec;
            spec.k = 0;
            spec.coupling_g = coupling_from_cooperativity(C, 1, 1);
            spec.n_max = 4;
            spec.convention = conv;
            const auto ss = steady_state(liouvillian(build_model(spec)));
            const auto q = qubit_thermo(ss.rho, 1);
            const auto b = oracle::bloch_steady_state(spec.coupling_g, 1.0, 0.0, scale);
            CHECK(std::abs(q.p_e - b.p_e()) < 1e-8);
            CHECK(std::abs(q.coherence_abs - b.coherence_abs()) < 1e-8);
        }
    }
}

TEST_CASE("frozen: qubit-only bath at n = 0.5") {
    ModelSpec spec;
    spec.topology = Topology::qubit_only;
    spec.n_a = 0.5;
    const auto ss = steady_state(liouvillian(build_model(spec)));
    const auto q = qubit_thermo(ss.rho, 0);
    CHECK(std::abs(q.p_e - 0.25) < 1e-10);
    CHECK(q.sigma_z == doctest::Approx(-0.5).epsilon(1e-10));
    CHECK(q.kT_over_omega0.value == doctest::Approx(0.9102392266268373).epsilon(1e-9));
}

TEST_CASE("frozen: boson-only bath at n_f = 2") {
    ModelSpec spec;
    spec.topology = Topology::boson_only;
    spec.n_f = 2.0;
    spec.n_max = 90;
    const auto ss = steady_state(liouvillian(build_model(spec)));
    double mean = 0.0;
    for (Index m = 0; m < 90; ++m) mean += static_cast<double>(m) * ss.rho.matrix(m, m).real();
    CHECK(std::abs(mean - 2.0) < 1e-8);
    CHECK(std::abs(ss.rho.matrix(0, 0).real() - 1.0 / 3.0) < 1e-10);
    CHECK(std::abs(ss.rho.matrix(3, 3).real() - 8.0 / 81.0) < 1e-10);
}

TEST_CASE("first blue sideband at C = 10 inverts the qubit") {
    ModelSpec spec;
    spec.k = 1;
    spec.coupling_g = coupling_from_cooperativity(10, 1, 1);
    const auto cp = converge_steady_state(spec, TruncationPolicy{});
    CHECK(cp.qubits[0].sigma_z > 0);
    CHECK(cp.qubits[0].kT_over_omega0.value < 0);
    CHECK(cp.qubits[0].coherence_abs < 1e-12);
}

TEST_CASE("steady state is the fixed point of RK4 evolution") {
    ModelSpec spec;
    spec.k = 1;
    spec.coupling_g = coupling_from_cooperativity(10, 1, 1);
    spec.n_f = spec.n_a = 0.5;
    const auto cp = converge_steady_state(spec, TruncationPolicy{});
    const auto& L = cp.liouvillian;
    const auto rho = evolve(L, DensityMatrix::basis_state(cp.model.space, 0), 50.0, 0.5 / inf_norm(L));
    CHECK(trace_distance(rho, cp.steady.rho) < 1e-6);
}

TEST_CASE("self checks pass") {
    for (const auto& r : run_self_checks()) {
        CAPTURE(r.detail);
        CHECK_MESSAGE(r.passed, r.name);
    }
}
