#pragma once

#include <vector>

#include "negtemp/dynamics.hpp"

namespace negtemp {

/// Effective temperature k_B T / omega_0 of a qubit, with the p_e = p_g crossing flagged.
struct Temperature {
    double value;
    /// p_e == p_g: value is +inf and the sign is meaningless.
    bool infinite_crossing = false;
};

struct QubitThermo {
    double p_g;
    double p_e;
    double sigma_z;
    double entropy_nats;
    Temperature kT_over_omega0;
    double coherence_abs;
};

/// Reduced state on `keep`; kept slots come out in ascending order.
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::size_t>& keep);

/// -sum lambda ln lambda in nats; eigenvalues below 1e-14 count as zero.
double von_neumann_entropy(const DensityMatrix& rho);

/// 1 / ln(p_g / p_e): negative exactly when p_e > p_g, 0+ for p_e -> 0, 0- for p_e -> 1.
Temperature effective_temperature(double p_g, double p_e);

QubitThermo qubit_thermo(const DensityMatrix& rho_full, std::size_t slot);

} // namespace negtemp
