#include "negtemp/sweeps.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>
#include <thread>

namespace negtemp {
namespace {

std::string format_number(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

struct PointCoord {
    unsigned k;
    double n_bath;
    double axis_value;
};

} // namespace

std::string to_string(SweepAxis axis) {
    switch (axis) {
    case SweepAxis::cooperativity: return "cooperativity";
    case SweepAxis::lambda_over_gamma: return "lambda_over_gamma";
    case SweepAxis::bath_n: return "bath_n";
    }
    return "unknown";
}

SweepAxis sweep_axis_from_string(const std::string& s) {
    if (s == "cooperativity") return SweepAxis::cooperativity;
    if (s == "lambda_over_gamma") return SweepAxis::lambda_over_gamma;
    if (s == "bath_n") return SweepAxis::bath_n;
    throw ConfigError("unknown sweep axis '" + s + "'");
}

char to_char(AtomLabel a) { return a == AtomLabel::A ? 'A' : 'B'; }

Index TruncationPolicy::next(Index n) const {
    const auto grown = static_cast<Index>(std::ceil(growth * static_cast<double>(n)));
    return std::min(std::max(grown, n + 1), n_cap);
}

void ScenarioConfig::validate() const {
    static const std::vector<std::string> ids = {"fig1", "fig2", "fig3", "fig4", "fig5",
                                                 "fig6", "fig7", "custom"};
    if (std::find(ids.begin(), ids.end(), scenario_id) == ids.end()) {
        throw ConfigError("unknown scenario id '" + scenario_id + "'");
    }
    if (k_list.empty()) throw ConfigError(scenario_id + ": k_list is empty");
    for (std::size_t i = 1; i < axis_grid.size(); ++i) {
        if (!(axis_grid[i] > axis_grid[i - 1])) {
            throw ConfigError(scenario_id + ": axis grid must be strictly increasing");
        }
    }
    for (double v : axis_grid) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw ConfigError(scenario_id + ": axis values must be finite and >= 0");
        }
    }
    if (axis == SweepAxis::bath_n) {
        if (!n_list.empty()) throw ConfigError(scenario_id + ": n_list must be empty when sweeping bath_n");
    } else if (n_list.empty()) {
        throw ConfigError(scenario_id + ": n_list is empty");
    }
    for (double n : n_list) {
        if (!(n >= 0.0)) throw ConfigError(scenario_id + ": bath occupations must be >= 0");
    }
    if (fixed.cooperativity && fixed.coupling_g) {
        throw ConfigError(scenario_id + ": give either cooperativity or coupling_g, not both");
    }
    if (axis != SweepAxis::cooperativity && !fixed.cooperativity && !fixed.coupling_g) {
        throw ConfigError(scenario_id + ": a fixed cooperativity or coupling_g is required");
    }
    if (axis == SweepAxis::cooperativity && (fixed.cooperativity || fixed.coupling_g)) {
        throw ConfigError(scenario_id + ": the coupling is swept; do not fix it");
    }
    if (axis == SweepAxis::lambda_over_gamma && fixed.lambda) {
        throw ConfigError(scenario_id + ": lambda is swept; do not fix it");
    }
    if (!two_atom() && fixed.gamma_B) {
        throw ConfigError(scenario_id + ": gamma_B given for a single-atom scenario");
    }
    if (!(fixed.kappa > 0.0)) throw ConfigError(scenario_id + ": kappa must be > 0");
    if (truncation.n_start < 4) throw ConfigError(scenario_id + ": n_start must be >= 4");
    if (truncation.n_cap < truncation.n_start) {
        throw ConfigError(scenario_id + ": n_cap must be >= n_start");
    }
    if (!(truncation.tol_sigma_z > 0.0) || !(truncation.tail_eps > 0.0)) {
        throw ConfigError(scenario_id + ": truncation tolerances must be > 0");
    }
    if (!(truncation.growth > 1.0)) throw ConfigError(scenario_id + ": truncation growth must be > 1");
}

double boson_tail_population(const DensityMatrix& rho, std::size_t boson_slot) {
    const DensityMatrix b = partial_trace(rho, {boson_slot});
    const Index n = b.dimension();
    double tail = b.matrix(n - 1, n - 1).real();
    if (n >= 2) tail += b.matrix(n - 2, n - 2).real();
    return tail;
}

ConvergedPoint converge_steady_state(const ModelSpec& spec, const TruncationPolicy& policy,
                                     const SolverOptions& solver) {
    if (!(policy.tol_sigma_z > 0.0) || !(policy.tail_eps > 0.0)) {
        throw InvalidArgument("truncation tolerances must be > 0");
    }
    if (policy.n_start < 1 || policy.n_cap < policy.n_start) {
        throw InvalidArgument("truncation requires 1 <= n_start <= n_cap");
    }

    ModelSpec current = spec;
    Index n = policy.n_start;
    std::vector<double> previous;
    bool have_previous = false;

    for (;;) {
        current.n_max = n;
        ModelInstance model = build_model(current);
        Superoperator L = liouvillian(model);
        SteadyStateResult ss = steady_state(L, solver);

        std::vector<QubitThermo> qubits;
        for (std::size_t slot : model.qubit_slots) qubits.push_back(qubit_thermo(ss.rho, slot));

        double delta = 0.0;
        if (have_previous) {
            for (std::size_t i = 0; i < qubits.size(); ++i) {
                delta = std::max(delta, std::abs(qubits[i].sigma_z - previous[i]));
            }
        }
        const double tail = model.boson_slot ? boson_tail_population(ss.rho, *model.boson_slot) : 0.0;

        const bool no_boson = !model.boson_slot.has_value();
        const bool sigma_ok = qubits.empty() || (have_previous && delta < policy.tol_sigma_z);
        const bool tail_ok = tail < policy.tail_eps;
        if (no_boson || (sigma_ok && tail_ok)) {
            ConvergedPoint out{current, std::move(model), std::move(L), std::move(ss), std::move(qubits),
                               n, delta, tail};
            return out;
        }
        if (n >= policy.n_cap) {
            const double reported = have_previous ? delta : std::numeric_limits<double>::infinity();
            throw TruncationFailure("Fock cutoff reached n_cap=" + std::to_string(policy.n_cap) +
                                        " without convergence (last |d sigma_z|=" +
                                        format_number(reported) + ", tail=" + format_number(tail) + ")",
                                    reported, static_cast<int>(n));
        }
        previous.clear();
        for (const auto& q : qubits) previous.push_back(q.sigma_z);
        have_previous = true;
        n = policy.next(n);
    }
}

Index converge_truncation(const ModelSpec& spec, double tol_sigma_z, double tail_eps, Index n_cap,
                          const SolverOptions& solver) {
    TruncationPolicy policy;
    policy.tol_sigma_z = tol_sigma_z;
    policy.tail_eps = tail_eps;
    policy.n_cap = n_cap;
    policy.n_start = std::min(policy.n_start, n_cap);
    return converge_steady_state(spec, policy, solver).n_max;
}

ModelSpec point_spec(const ScenarioConfig& config, unsigned k, double n_bath, double axis_value) {
    ModelSpec spec;
    spec.k = k;
    spec.gamma = 1.0;
    spec.kappa = config.fixed.kappa;
    spec.convention = config.convention;
    spec.n_max = config.truncation.n_start;

    double n = n_bath;
    if (config.axis == SweepAxis::bath_n) n = axis_value;
    spec.n_f = n;
    spec.n_a = n;

    if (config.axis == SweepAxis::cooperativity) {
        spec.coupling_g = coupling_from_cooperativity(axis_value, spec.gamma, spec.kappa);
    } else if (config.fixed.coupling_g) {
        spec.coupling_g = *config.fixed.coupling_g;
    } else {
        spec.coupling_g = coupling_from_cooperativity(*config.fixed.cooperativity, spec.gamma, spec.kappa);
    }

    if (config.two_atom()) {
        spec.lambda = config.axis == SweepAxis::lambda_over_gamma ? axis_value : *config.fixed.lambda;
        spec.gamma_B = config.fixed.gamma_B.value_or(1.0);
    }
    return spec;
}

std::vector<SweepRow> run_scenario(const ScenarioConfig& config, const RunOptions& options) {
    config.validate();

    std::vector<unsigned> ks = config.k_list;
    std::sort(ks.begin(), ks.end());
    std::vector<double> ns = config.n_list;
    std::sort(ns.begin(), ns.end());
    if (config.axis == SweepAxis::bath_n) ns = {0.0};

    std::vector<PointCoord> points;
    for (unsigned k : ks) {
        for (double n : ns) {
            for (double x : config.axis_grid) {
                points.push_back({k, config.axis == SweepAxis::bath_n ? x : n, x});
            }
        }
    }

    std::vector<std::vector<SweepRow>> results(points.size());
    std::vector<std::exception_ptr> errors(points.size());
    std::atomic<std::size_t> cursor{0};
    std::atomic<bool> failed{false};

    auto work = [&] {
        for (;;) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= points.size() || failed.load()) return;
            const PointCoord& p = points[i];
            try {
                const ModelSpec spec = point_spec(config, p.k, p.n_bath, p.axis_value);
                const ConvergedPoint cp = converge_steady_state(spec, config.truncation, options.solver);
                if (options.inspect) options.inspect(PointReport{config, p.k, p.n_bath, p.axis_value, cp});
                for (std::size_t q = 0; q < cp.qubits.size(); ++q) {
                    const QubitThermo& t = cp.qubits[q];
                    SweepRow row;
                    row.scenario = config.scenario_id;
                    row.k = p.k;
                    row.n_bath = p.n_bath;
                    row.axis = config.axis;
                    row.axis_value = p.axis_value;
                    row.atom = q == 0 ? AtomLabel::A : AtomLabel::B;
                    row.sigma_z = t.sigma_z;
                    row.entropy_nats = t.entropy_nats;
                    row.kT_over_omega0 = t.kT_over_omega0.value;
                    row.coherence_abs = t.coherence_abs;
                    row.n_max_used = cp.n_max;
                    row.residual = cp.steady.residual;
                    results[i].push_back(std::move(row));
                }
            } catch (...) {
                errors[i] = std::current_exception();
                failed.store(true);
            }
        }
    };

    unsigned jobs = options.jobs ? options.jobs : std::max(1u, std::thread::hardware_concurrency());
    jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(points.size(), 1)));
    if (jobs <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(jobs);
        for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(work);
    }

    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!errors[i]) continue;
        const PointCoord& p = points[i];
        const std::string where = config.scenario_id + " failed at k=" + std::to_string(p.k) +
                                  ", n=" + format_number(p.n_bath) + ", " + to_string(config.axis) +
                                  "=" + format_number(p.axis_value);
        try {
            std::rethrow_exception(errors[i]);
        } catch (const Error& e) {
            throw ScenarioFailure(where + ": " + e.what());
        }
    }

    std::vector<SweepRow> rows;
    for (auto& r : results) {
        for (auto& row : r) rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
    if (!(lo > 0.0) || !(hi > lo)) throw InvalidArgument("log_grid requires 0 < lo < hi");
    std::vector<double> g;
    if (count == 0) return g;
    if (count == 1) return {lo};
    const double ratio = std::log(hi / lo);
    for (std::size_t i = 0; i < count; ++i) {
        g.push_back(lo * std::exp(ratio * static_cast<double>(i) / static_cast<double>(count - 1)));
    }
    g.front() = lo;
    g.back() = hi;
    return g;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t count) {
    if (!(hi > lo)) throw InvalidArgument("linear_grid requires lo < hi");
    std::vector<double> g;
    if (count == 0) return g;
    if (count == 1) return {lo};
    for (std::size_t i = 0; i < count; ++i) {
        g.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1));
    }
    g.back() = hi;
    return g;
}

ScenarioConfig canonical_scenario(int id) {
    ScenarioConfig c;
    c.scenario_id = "fig" + std::to_string(id);
    const std::vector<double> baths = {0.0, 0.5, 2.0};
    const double sqrt10 = std::sqrt(10.0);
    switch (id) {
    case 1:
        c.k_list = {0, 1, 2, 3};
        c.n_list = baths;
        c.axis = SweepAxis::cooperativity;
        c.axis_grid = log_grid(0.1, 100.0, 40);
        break;
    case 2:
    case 3:
        c.k_list = {id == 2 ? 0u : 1u};
        c.n_list = baths;
        c.axis = SweepAxis::cooperativity;
        c.axis_grid = log_grid(0.1, 100.0, 40);
        c.fixed.lambda = 3.0;
        c.fixed.gamma_B = 1.0;
        break;
    case 4:
    case 5:
    case 6:
        c.k_list = {static_cast<unsigned>(id - 4)};
        c.n_list = baths;
        c.axis = SweepAxis::lambda_over_gamma;
        c.axis_grid = linear_grid(0.0, 12.0, 40);
        c.fixed.coupling_g = sqrt10;
        c.fixed.gamma_B = 1.0;
        break;
    case 7:
        c.k_list = {0, 1, 2, 3};
        c.axis = SweepAxis::bath_n;
        c.axis_grid = linear_grid(0.0, 2.0, 21);
        c.fixed.cooperativity = 10.0;
        c.fixed.lambda = 3.0;
        c.fixed.gamma_B = 1.0;
        break;
    default: throw ConfigError("no canonical scenario for figure " + std::to_string(id));
    }
    return c;
}

std::vector<SweepRow> select_rows(const std::vector<SweepRow>& rows, AtomLabel atom, unsigned k,
                                  double n_bath) {
    std::vector<SweepRow> out;
    for (const auto& r : rows) {
        if (r.atom == atom && r.k == k && r.n_bath == n_bath) out.push_back(r);
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const SweepRow& a, const SweepRow& b) { return a.axis_value < b.axis_value; });
    return out;
}

// For bath_n sweeps n_bath equals the axis value, so selection ignores n_bath there.
namespace {

std::vector<SweepRow> select_curve(const std::vector<SweepRow>& rows, AtomLabel atom, unsigned k,
                                   double n_bath) {
    if (!rows.empty() && rows.front().axis == SweepAxis::bath_n) {
        std::vector<SweepRow> out;
        for (const auto& r : rows) {
            if (r.atom == atom && r.k == k) out.push_back(r);
        }
        std::stable_sort(out.begin(), out.end(),
                         [](const SweepRow& a, const SweepRow& b) { return a.axis_value < b.axis_value; });
        return out;
    }
    return select_rows(rows, atom, k, n_bath);
}

double column_value(const SweepRow& r, Column c) {
    switch (c) {
    case Column::sigma_z: return r.sigma_z;
    case Column::entropy_nats: return r.entropy_nats;
    case Column::kT_over_omega0: return r.kT_over_omega0;
    case Column::coherence_abs: return r.coherence_abs;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

} // namespace

std::vector<double> detect_sign_change(const std::vector<SweepRow>& rows, AtomLabel atom, unsigned k,
                                       double n_bath) {
    const std::vector<SweepRow> curve = select_curve(rows, atom, k, n_bath);
    std::vector<double> crossings;
    for (std::size_t i = 0; i < curve.size(); ++i) {
        const double s0 = curve[i].sigma_z;
        if (s0 == 0.0) {
            crossings.push_back(curve[i].axis_value);
            continue;
        }
        if (i + 1 >= curve.size()) break;
        const double s1 = curve[i + 1].sigma_z;
        if (s0 * s1 < 0.0) {
            const double x0 = curve[i].axis_value, x1 = curve[i + 1].axis_value;
            crossings.push_back(x0 + (x1 - x0) * (-s0) / (s1 - s0));
        }
    }
    return crossings;
}

std::pair<double, double> parabola_vertex(double x0, double y0, double x1, double y1, double x2,
                                          double y2) {
    const double denom = (x0 - x1) * (x0 - x2) * (x1 - x2);
    if (denom == 0.0) throw InvalidArgument("parabola_vertex: abscissae must be distinct");
    const double a = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / denom;
    const double b = (x2 * x2 * (y0 - y1) + x1 * x1 * (y2 - y0) + x0 * x0 * (y1 - y2)) / denom;
    const double c = (x1 * x2 * (x1 - x2) * y0 + x2 * x0 * (x2 - x0) * y1 + x0 * x1 * (x0 - x1) * y2) / denom;
    if (a == 0.0) throw InvalidArgument("parabola_vertex: points are collinear");
    return {-b / (2.0 * a), c - b * b / (4.0 * a)};
}

Extremum detect_extremum(const std::vector<SweepRow>& rows, AtomLabel atom, unsigned k, double n_bath,
                         Column column, ExtremumKind kind) {
    std::vector<double> xs, ys;
    for (const auto& r : select_curve(rows, atom, k, n_bath)) {
        const double v = column_value(r, column);
        if (std::isfinite(v)) {
            xs.push_back(r.axis_value);
            ys.push_back(v);
        }
    }
    if (xs.size() < 3) throw InvalidArgument("detect_extremum needs at least 3 finite points");

    const double sign = kind == ExtremumKind::maximum ? 1.0 : -1.0;
    std::size_t best = 0;
    for (std::size_t i = 1; i < ys.size(); ++i) {
        if (sign * ys[i] > sign * ys[best]) best = i;
    }
    if (best == 0 || best + 1 == ys.size()) return {xs[best], ys[best], true};

    const double x0 = xs[best - 1], x1 = xs[best], x2 = xs[best + 1];
    const double y0 = ys[best - 1], y1 = ys[best], y2 = ys[best + 1];
    const double denom = (x0 - x1) * (x0 - x2) * (x1 - x2);
    const double curvature = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / denom;
    if (curvature == 0.0) return {x1, y1, false};
    auto [xv, yv] = parabola_vertex(x0, y0, x1, y1, x2, y2);
    return {xv, yv, false};
}

} // namespace negtemp
