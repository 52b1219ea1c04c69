#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "negtemp/dynamics.hpp"
#include "negtemp/models.hpp"
#include "negtemp/thermo.hpp"

namespace negtemp {

enum class SweepAxis { cooperativity, lambda_over_gamma, bath_n };

std::string to_string(SweepAxis axis);
SweepAxis sweep_axis_from_string(const std::string& s);

/// Adaptive Fock cutoff: n_max grows as ceil(growth * n) from n_start, clamped to n_cap.
struct TruncationPolicy {
    Index n_start = 8;
    Index n_cap = 96;
    double tol_sigma_z = 1e-6;
    double tail_eps = 1e-8;
    double growth = 1.5;

    Index next(Index n) const;
};

/// Parameters held constant along a sweep. `cooperativity` and `coupling_g` are exclusive.
struct FixedParameters {
    std::optional<double> cooperativity;
    std::optional<double> coupling_g;
    std::optional<double> lambda;
    std::optional<double> gamma_B;
    double kappa = 1.0;
};

struct ScenarioConfig {
    std::string scenario_id = "custom";
    std::vector<unsigned> k_list;
    /// Bath occupations n = n_f = n_a; must be empty when sweeping bath_n.
    std::vector<double> n_list;
    SweepAxis axis = SweepAxis::cooperativity;
    std::vector<double> axis_grid;
    FixedParameters fixed;
    TruncationPolicy truncation;
    DissipatorConvention convention = DissipatorConvention::standard;

    bool two_atom() const noexcept {
        return axis == SweepAxis::lambda_over_gamma || fixed.lambda.has_value();
    }

    /// Throws ConfigError on any inconsistency.
    void validate() const;
};

enum class AtomLabel { A, B };

char to_char(AtomLabel a);

struct SweepRow {
    std::string scenario;
    unsigned k = 0;
    double n_bath = 0.0;
    SweepAxis axis = SweepAxis::cooperativity;
    double axis_value = 0.0;
    AtomLabel atom = AtomLabel::A;
    double sigma_z = 0.0;
    double entropy_nats = 0.0;
    /// +-inf encodes the infinite-temperature crossing.
    double kT_over_omega0 = 0.0;
    double coherence_abs = 0.0;
    Index n_max_used = 0;
    double residual = 0.0;

    friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

/// Steady state at the smallest cutoff passing both truncation tests.
struct ConvergedPoint {
    ModelSpec spec;
    ModelInstance model;
    Superoperator liouvillian;
    SteadyStateResult steady;
    std::vector<QubitThermo> qubits;
    Index n_max = 0;
    /// max |delta sigma_z| between the last two cutoffs (0 when only one was solved).
    double last_delta = 0.0;
    double boson_tail = 0.0;
};

/// Population of the top two Fock levels of the boson reduced state.
double boson_tail_population(const DensityMatrix& rho, std::size_t boson_slot);

ConvergedPoint converge_steady_state(const ModelSpec& spec, const TruncationPolicy& policy,
                                     const SolverOptions& solver = {});

/// n_max returned by converge_steady_state with n_start = policy default.
Index converge_truncation(const ModelSpec& spec, double tol_sigma_z, double tail_eps, Index n_cap,
                          const SolverOptions& solver = {});

struct PointReport {
    const ScenarioConfig& config;
    unsigned k;
    double n_bath;
    double axis_value;
    const ConvergedPoint& point;
};

struct RunOptions {
    /// Worker threads; 0 means hardware concurrency.
    unsigned jobs = 0;
    SolverOptions solver;
    /// Called once per solved point from worker threads; must be thread-safe.
    std::function<void(const PointReport&)> inspect;
};

/// ModelSpec for one sweep coordinate (cutoff set to policy.n_start).
ModelSpec point_spec(const ScenarioConfig& config, unsigned k, double n_bath, double axis_value);

std::vector<SweepRow> run_scenario(const ScenarioConfig& config, const RunOptions& options = {});

std::vector<double> log_grid(double lo, double hi, std::size_t count);
std::vector<double> linear_grid(double lo, double hi, std::size_t count);

/// Canonical configuration for figure `id` (1..7); throws ConfigError otherwise.
ScenarioConfig canonical_scenario(int id);

std::vector<SweepRow> select_rows(const std::vector<SweepRow>& rows, AtomLabel atom, unsigned k,
                                  double n_bath);

/// Axis values where sigma_z changes sign (linear interpolation), ascending; empty if none.
std::vector<double> detect_sign_change(const std::vector<SweepRow>& rows, AtomLabel atom, unsigned k,
                                       double n_bath);

enum class Column { sigma_z, entropy_nats, kT_over_omega0, coherence_abs };
enum class ExtremumKind { maximum, minimum };

struct Extremum {
    double axis_value;
    double value;
    bool at_boundary;
};

/// Grid arg-extremum refined by the parabola through it and its two neighbours.
/// Non-finite samples are skipped; an extremum at either end is returned unrefined and flagged.
Extremum detect_extremum(const std::vector<SweepRow>& rows, AtomLabel atom, unsigned k, double n_bath,
                         Column column, ExtremumKind kind = ExtremumKind::maximum);

/// Parabolic vertex through three points with distinct abscissae.
std::pair<double, double> parabola_vertex(double x0, double y0, double x1, double y1, double x2,
                                          double y2);

} // namespace negtemp
