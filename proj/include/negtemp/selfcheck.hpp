#pragma once

#include <string>
#include <vector>

#include "negtemp/models.hpp"

namespace negtemp {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Closed-form resonant Bloch fixed point of a carrier-driven qubit,
/// H = g (sigma_+ + sigma_-), thermal decay rate gamma at occupation n.
struct BlochFixedPoint {
    double p_e;
    /// <e|rho|g>; purely imaginary on resonance.
    Complex coherence_eg;
};

BlochFixedPoint bloch_fixed_point(double g, double gamma, double n, DissipatorConvention convention);

/// Thermal fixed points, the Bloch oracle and the steady-state/time-evolution cross-check.
std::vector<CheckResult> run_self_checks();

} // namespace negtemp
