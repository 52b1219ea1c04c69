#include "negtemp/selfcheck.hpp"

#include <cmath>
#include <sstream>

#include "negtemp/dynamics.hpp"
#include "negtemp/sweeps.hpp"
#include "negtemp/thermo.hpp"

namespace negtemp {
namespace {

std::string sci(double v) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

CheckResult check_boson_thermal() {
    ModelSpec spec;
    spec.topology = Topology::boson_only;
    spec.kappa = 1.0;
    spec.n_f = 2.0;
    spec.n_max = 90;
    const auto ss = steady_state(liouvillian(build_model(spec)));
    const double ratio = spec.n_f / (spec.n_f + 1.0);
    double norm = 0.0;
    for (Index m = 0; m < spec.n_max; ++m) norm += std::pow(ratio, static_cast<double>(m));
    double mean = 0.0, worst = 0.0;
    for (Index m = 0; m < spec.n_max; ++m) {
        const double p = ss.rho.matrix(m, m).real();
        mean += static_cast<double>(m) * p;
        worst = std::max(worst, std::abs(p - std::pow(ratio, static_cast<double>(m)) / norm));
    }
    const bool ok = std::abs(mean - 2.0) < 1e-8 && worst < 1e-10;
    return {"boson thermal fixed point (n_f=2)", ok,
            "mean=" + std::to_string(mean) + " max|dp|=" + sci(worst)};
}

CheckResult check_qubit_thermal() {
    ModelSpec spec;
    spec.topology = Topology::qubit_only;
    spec.n_a = 0.5;
    const auto ss = steady_state(liouvillian(build_model(spec)));
    const double p_e = ss.rho.matrix(1, 1).real();
    return {"qubit thermal fixed point (n_a=0.5)", std::abs(p_e - 0.25) < 1e-10,
            "p_e=" + std::to_string(p_e) + " err=" + sci(std::abs(p_e - 0.25))};
}

CheckResult check_bloch() {
    double worst = 0.0;
    for (auto convention : {DissipatorConvention::standard, DissipatorConvention::doubled}) {
        for (double c : {0.1, 1.0, 10.0, 100.0}) {
            ModelSpec spec;
            spec.k = 0;
            spec.coupling_g = coupling_from_cooperativity(c, 1.0, 1.0);
            spec.n_max = 4;
            spec.convention = convention;
            const auto ss = steady_state(liouvillian(build_model(spec)));
            const DensityMatrix q = partial_trace(ss.rho, {1});
            const BlochFixedPoint bp = bloch_fixed_point(spec.coupling_g, spec.gamma, 0.0, convention);
            worst = std::max(worst, std::abs(q.matrix(1, 1).real() - bp.p_e));
            worst = std::max(worst, std::abs(q.matrix(1, 0) - bp.coherence_eg));
        }
    }
    return {"carrier Bloch fixed point (k=0, n=0)", worst < 1e-8, "max err=" + sci(worst)};
}

CheckResult check_cross_solver() {
    ModelSpec spec;
    spec.k = 1;
    spec.coupling_g = coupling_from_cooperativity(10.0, 1.0, 1.0);
    spec.n_f = spec.n_a = 0.5;
    const ConvergedPoint cp = converge_steady_state(spec, TruncationPolicy{});
    const DensityMatrix start = DensityMatrix::basis_state(cp.model.space, 0);
    const DensityMatrix late = evolve(cp.liouvillian, start, 50.0, 0.5 / inf_norm(cp.liouvillian));
    const double dist = trace_distance(late, cp.steady.rho);
    return {"steady state vs RK4 evolution (k=1, C=10, n=0.5, t=50)", dist < 1e-6,
            "trace distance=" + sci(dist) + " n_max=" + std::to_string(cp.n_max)};
}

template <class F>
CheckResult guarded(const char* name, F f) {
    try {
        return f();
    } catch (const std::exception& e) {
        return {name, false, std::string("error: ") + e.what()};
    }
}

} // namespace

BlochFixedPoint bloch_fixed_point(double g, double gamma, double n, DissipatorConvention convention) {
    const double s = convention == DissipatorConvention::doubled ? 2.0 : 1.0;
    const double down = s * gamma * (n + 1.0);
    const double up = s * gamma * n;
    const double t1 = down + up;  // population relaxation
    const double t2 = 0.5 * t1;   // coherence relaxation
    const double p_e = (2.0 * g * g + up * t2) / (4.0 * g * g + t1 * t2);
    const Complex coh = Complex(0.0, -g) * (1.0 - 2.0 * p_e) / t2;
    return {p_e, coh};
}

std::vector<CheckResult> run_self_checks() {
    return {
        guarded("boson thermal fixed point", check_boson_thermal),
        guarded("qubit thermal fixed point", check_qubit_thermal),
        guarded("carrier Bloch fixed point", check_bloch),
        guarded("steady state vs RK4 evolution", check_cross_solver),
    };
}

} // namespace negtemp
