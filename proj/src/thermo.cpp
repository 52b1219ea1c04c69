#include "negtemp/thermo.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

namespace negtemp {
namespace {

constexpr double kEigenFloor = 1e-14;
constexpr double kPositivitySlack = 1e-9;
constexpr double kPopulationSlack = 1e-9;

} // namespace

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::size_t>& keep) {
    if (keep.empty()) throw InvalidArgument("partial_trace: keep-set is empty");
    const auto& dims = rho.space.dims();
    const std::size_t slots = dims.size();
    std::vector<bool> kept(slots, false);
    for (std::size_t s : keep) {
        if (s >= slots) throw InvalidSlot("partial_trace: slot " + std::to_string(s) + " out of range");
        if (kept[s]) throw InvalidArgument("partial_trace: slot listed twice");
        kept[s] = true;
    }
    std::vector<std::size_t> keep_sorted = keep;
    std::sort(keep_sorted.begin(), keep_sorted.end());

    std::vector<Index> kept_dims;
    Index dk = 1, dt = 1;
    for (std::size_t s = 0; s < slots; ++s) {
        if (kept[s]) {
            kept_dims.push_back(dims[s]);
            dk *= dims[s];
        } else {
            dt *= dims[s];
        }
    }

    // full[t * dk + a]: full index whose kept digits spell a and traced digits spell t.
    const Index d = rho.dimension();
    std::vector<Index> full(static_cast<std::size_t>(d));
    std::vector<Index> digit(slots, 0);
    for (Index idx = 0; idx < d; ++idx) {
        Index rem = idx;
        for (std::size_t s = slots; s-- > 0;) {
            digit[s] = rem % dims[s];
            rem /= dims[s];
        }
        Index a = 0, t = 0;
        for (std::size_t s = 0; s < slots; ++s) {
            if (kept[s]) {
                a = a * dims[s] + digit[s];
            } else {
                t = t * dims[s] + digit[s];
            }
        }
        full[static_cast<std::size_t>(t * dk + a)] = idx;
    }

    DenseMatrixXc reduced = DenseMatrixXc::Zero(dk, dk);
    for (Index t = 0; t < dt; ++t) {
        const Index* row = full.data() + t * dk;
        for (Index b = 0; b < dk; ++b) {
            for (Index a = 0; a < dk; ++a) reduced(a, b) += rho.matrix(row[a], row[b]);
        }
    }

    // Kept slots always come out in ascending slot order.
    return DensityMatrix{SpaceDescriptor(std::move(kept_dims)), std::move(reduced)};
}

double von_neumann_entropy(const DensityMatrix& rho) {
    const DenseMatrixXc h = 0.5 * (rho.matrix + rho.matrix.adjoint());
    Eigen::SelfAdjointEigenSolver<DenseMatrixXc> es(h, Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double lam = es.eigenvalues()[i];
        if (lam < -kPositivitySlack) {
            throw PositivityViolation("von_neumann_entropy: eigenvalue " + std::to_string(lam));
        }
        if (lam > kEigenFloor) s -= lam * std::log(lam);
    }
    return s;
}

Temperature effective_temperature(double p_g, double p_e) {
    if (p_g < -kPopulationSlack || p_e < -kPopulationSlack ||
        std::abs(p_g + p_e - 1.0) > kPopulationSlack) {
        throw InvalidArgument("effective_temperature: populations must be >= 0 and sum to 1");
    }
    p_g = std::max(p_g, 0.0);
    p_e = std::max(p_e, 0.0);
    if (p_g == p_e) return {std::numeric_limits<double>::infinity(), true};
    return {1.0 / (std::log(p_g) - std::log(p_e)), false};
}

QubitThermo qubit_thermo(const DensityMatrix& rho_full, std::size_t slot) {
    if (slot >= rho_full.space.slots() || rho_full.space[slot] != 2) {
        throw InvalidSlot("qubit_thermo: slot " + std::to_string(slot) + " is not a qubit");
    }
    const DensityMatrix q = partial_trace(rho_full, {slot});
    QubitThermo t{};
    t.p_g = q.matrix(0, 0).real();
    t.p_e = q.matrix(1, 1).real();
    t.sigma_z = t.p_e - t.p_g;
    t.entropy_nats = von_neumann_entropy(q);
    t.kT_over_omega0 = effective_temperature(t.p_g, t.p_e);
    t.coherence_abs = std::abs(q.matrix(0, 1));
    return t;
}

} // namespace negtemp
