#pragma once

// Vectorised master equation. Column stacking throughout:
//   vec(X rho Y) = (Y^T (x) X) vec(rho),   vec index of rho(i, j) = i + d * j.

#include <optional>
#include <string>

#include "negtemp/hilbert.hpp"
#include "negtemp/models.hpp"

namespace negtemp {

using DenseMatrixXc = Eigen::MatrixXcd;
using VectorXc = Eigen::VectorXcd;
using SparseMatrixXc = Eigen::SparseMatrix<Complex>;

struct DensityMatrix {
    SpaceDescriptor space;
    DenseMatrixXc matrix;

    static DensityMatrix from_matrix(SpaceDescriptor space, DenseMatrixXc m);
    static DensityMatrix maximally_mixed(const SpaceDescriptor& space);
    /// |index><index| in the computational basis.
    static DensityMatrix basis_state(const SpaceDescriptor& space, Index index);

    Index dimension() const noexcept { return matrix.rows(); }
    double trace_error() const;
    double hermiticity_error() const;
    double min_eigenvalue() const;
    /// Throws InvalidArgument unless trace, Hermiticity and positivity hold at the given slack.
    void validate(double trace_tol = 1e-10, double herm_tol = 1e-10, double pos_tol = 1e-9) const;
};

struct Superoperator {
    SpaceDescriptor space;
    SparseMatrixXc matrix;
    std::optional<std::size_t> boson_slot;
    std::size_t channels = 0;

    Index hilbert_dimension() const noexcept { return space.total_dimension(); }
};

enum class SolverMethod { automatic, direct, iterative, eigen };

std::string to_string(SolverMethod m);
SolverMethod solver_method_from_string(const std::string& s);

struct SolverOptions {
    SolverMethod method = SolverMethod::automatic;
    /// Solve only the invariant block of L that carries the trace (see steady_state).
    bool reduce_blocks = true;
    /// `automatic` switches from the direct to the iterative solver above this system size.
    Index iterative_threshold = 400000;
    double direct_tolerance = 1e-10;
    double iterative_tolerance = 1e-8;
    int max_iterations = 20000;
    /// Largest system the dense eigen path accepts.
    Index eigen_max_dimension = 4096;

    double tolerance_for(SolverMethod used) const {
        return used == SolverMethod::iterative ? iterative_tolerance : direct_tolerance;
    }
};

struct SteadyStateResult {
    DensityMatrix rho;
    double residual = 0.0;
    Index n_max_used = 0;
    SolverMethod solver = SolverMethod::direct;
    Index system_size = 0;
    double min_eigenvalue = 0.0;
    /// Second-smallest |eigenvalue| of L; only filled by the eigen path.
    std::optional<double> spectral_gap;
};

VectorXc vectorize(const DenseMatrixXc& m);
DenseMatrixXc unvectorize(const VectorXc& v, Index d);

/// vec(Id), the trace functional: tr(rho) = trace_functional(d).dot(vec(rho)).
VectorXc trace_functional(Index d);

Superoperator liouvillian(const Operator& hamiltonian, const std::vector<LindbladTerm>& dissipators,
                          DissipatorConvention convention);
Superoperator liouvillian(const ModelInstance& model);

/// ||L vec(rho)||_2.
double residual(const Superoperator& L, const DensityMatrix& rho);

/// Unique trace-one null vector of L.
///
/// One trace-carrying row of L is replaced by the trace functional and the
/// resulting nonsingular system is solved. With `reduce_blocks`, L is first split
/// into the connected components of its sparsity graph; since L is block diagonal
/// in those components and each one touching a diagonal index has the trace
/// functional as a left null vector, a unique steady state lives in exactly one
/// of them and only that block is factorised. The residual is always measured
/// against the full, unmodified L.
SteadyStateResult steady_state(const Superoperator& L, const SolverOptions& opts = {});

/// Row-sum norm of L.
double inf_norm(const Superoperator& L);

/// Default RK4 step: 0.01 / ||L||_inf.
double default_time_step(const Superoperator& L);

/// Classical RK4 integration of vec(rho)' = L vec(rho) up to t_final (units of 1/gamma).
/// Throws StepSizeError if the trace drifts by more than 1e-6 or the state norm exceeds 1.
DensityMatrix evolve(const Superoperator& L, const DensityMatrix& rho0, double t_final,
                     std::optional<double> dt = std::nullopt);
DensityMatrix evolve(const ModelInstance& model, const DensityMatrix& rho0, double t_final,
                     std::optional<double> dt = std::nullopt);

/// (1/2) || a - b ||_1 over Hermitian matrices.
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

} // namespace negtemp
