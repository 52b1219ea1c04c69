#include "negtemp/dynamics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace negtemp {
namespace {

SparseMatrixXc sparse_identity(Index d) {
    SparseMatrixXc id(d, d);
    id.setIdentity();
    return id;
}

// Union-find with path halving over Liouville-space indices.
class DisjointSets {
public:
    explicit DisjointSets(Index n) : parent_(static_cast<std::size_t>(n)) {
        std::iota(parent_.begin(), parent_.end(), Index{0});
    }

    Index find(Index x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(Index a, Index b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (a < b) std::swap(a, b);
        parent_[a] = b;
    }

private:
    std::vector<Index> parent_;
};

struct Block {
    std::vector<Index> members;   // global indices, ascending
    std::vector<Index> local_of;  // global -> local, -1 outside the block
};

Block trace_block(const SparseMatrixXc& L, Index d) {
    const Index n = L.rows();
    Block block;
    block.local_of.assign(static_cast<std::size_t>(n), -1);

    DisjointSets sets(n);
    for (Index col = 0; col < L.outerSize(); ++col) {
        for (SparseMatrixXc::InnerIterator it(L, col); it; ++it) sets.unite(it.row(), col);
    }
    Index root = -1;
    for (Index i = 0; i < d; ++i) {
        const Index r = sets.find(i + d * i);
        if (root < 0) {
            root = r;
        } else if (r != root) {
            throw NoUniqueSteadyState(
                "Liouvillian splits the populations into disconnected blocks; "
                "the steady state is not unique (is any dissipation present?)");
        }
    }
    for (Index i = 0; i < n; ++i) {
        if (sets.find(i) == root) {
            block.local_of[i] = static_cast<Index>(block.members.size());
            block.members.push_back(i);
        }
    }
    return block;
}

Block full_block(Index n) {
    Block block;
    block.members.resize(static_cast<std::size_t>(n));
    std::iota(block.members.begin(), block.members.end(), Index{0});
    block.local_of = block.members;
    return block;
}

SparseMatrixXc extract_block(const SparseMatrixXc& L, const Block& block) {
    const Index m = static_cast<Index>(block.members.size());
    std::vector<Eigen::Triplet<Complex>> triplets;
    triplets.reserve(static_cast<std::size_t>(L.nonZeros()));
    for (Index local_col = 0; local_col < m; ++local_col) {
        for (SparseMatrixXc::InnerIterator it(L, block.members[local_col]); it; ++it) {
            const Index local_row = block.local_of[it.row()];
            if (local_row >= 0) triplets.emplace_back(local_row, local_col, it.value());
        }
    }
    SparseMatrixXc out(m, m);
    out.setFromTriplets(triplets.begin(), triplets.end());
    out.makeCompressed();
    return out;
}

// Replaces row `row` by the trace functional restricted to the block.
SparseMatrixXc with_trace_row(const SparseMatrixXc& A, Index row, const std::vector<Index>& diag_local) {
    std::vector<Eigen::Triplet<Complex>> triplets;
    triplets.reserve(static_cast<std::size_t>(A.nonZeros() + static_cast<Index>(diag_local.size())));
    for (Index col = 0; col < A.outerSize(); ++col) {
        for (SparseMatrixXc::InnerIterator it(A, col); it; ++it) {
            if (it.row() != row) triplets.emplace_back(it.row(), col, it.value());
        }
    }
    for (Index j : diag_local) triplets.emplace_back(row, j, Complex(1.0));
    SparseMatrixXc out(A.rows(), A.cols());
    out.setFromTriplets(triplets.begin(), triplets.end());
    out.makeCompressed();
    return out;
}

VectorXc solve_direct(const SparseMatrixXc& A, const VectorXc& b) {
    Eigen::SparseLU<SparseMatrixXc, Eigen::COLAMDOrdering<int>> lu;
    lu.analyzePattern(A);
    lu.factorize(A);
    if (lu.info() != Eigen::Success) {
        throw NoUniqueSteadyState("sparse LU failed on the trace-constrained system: " +
                                  lu.lastErrorMessage());
    }
    return lu.solve(b);
}

VectorXc solve_iterative(const SparseMatrixXc& A, const VectorXc& b, const SolverOptions& opts) {
    Eigen::BiCGSTAB<SparseMatrixXc, Eigen::IncompleteLUT<Complex>> solver;
    solver.preconditioner().setDroptol(1e-6);
    solver.preconditioner().setFillfactor(20);
    solver.setMaxIterations(opts.max_iterations);
    solver.setTolerance(opts.iterative_tolerance * 1e-3);
    solver.compute(A);
    if (solver.info() != Eigen::Success) {
        throw NoUniqueSteadyState("incomplete LU preconditioner failed on the trace-constrained system");
    }
    VectorXc x = solver.solve(b);
    return x;
}

struct EigenPick {
    VectorXc vector;
    double gap;
};

EigenPick solve_eigen(const SparseMatrixXc& A, Index max_dim) {
    if (A.rows() > max_dim) {
        throw InvalidArgument("eigen steady-state path limited to systems of size " +
                              std::to_string(max_dim) + ", got " + std::to_string(A.rows()));
    }
    Eigen::ComplexEigenSolver<DenseMatrixXc> es(DenseMatrixXc(A), true);
    if (es.info() != Eigen::Success) throw NoUniqueSteadyState("eigen decomposition of L failed");
    const auto& values = es.eigenvalues();
    std::vector<Index> order(static_cast<std::size_t>(values.size()));
    std::iota(order.begin(), order.end(), Index{0});
    std::sort(order.begin(), order.end(),
              [&](Index a, Index b) { return std::abs(values[a]) < std::abs(values[b]); });
    const double gap = order.size() > 1 ? std::abs(values[order[1]]) : 0.0;
    return {es.eigenvectors().col(order[0]), gap};
}

} // namespace

// ---------------------------------------------------------------------------

DensityMatrix DensityMatrix::from_matrix(SpaceDescriptor space, DenseMatrixXc m) {
    const Index d = space.total_dimension();
    if (m.rows() != d || m.cols() != d) {
        throw InvalidDimension("density matrix side " + std::to_string(m.rows()) +
                               " does not match space " + space.to_string());
    }
    return DensityMatrix{std::move(space), std::move(m)};
}

DensityMatrix DensityMatrix::maximally_mixed(const SpaceDescriptor& space) {
    const Index d = space.total_dimension();
    return from_matrix(space, DenseMatrixXc::Identity(d, d) / static_cast<double>(d));
}

DensityMatrix DensityMatrix::basis_state(const SpaceDescriptor& space, Index index) {
    const Index d = space.total_dimension();
    if (index < 0 || index >= d) throw InvalidArgument("basis_state: index out of range");
    DenseMatrixXc m = DenseMatrixXc::Zero(d, d);
    m(index, index) = 1.0;
    return from_matrix(space, std::move(m));
}

double DensityMatrix::trace_error() const { return std::abs(matrix.trace() - Complex(1.0)); }

double DensityMatrix::hermiticity_error() const {
    return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
    const DenseMatrixXc h = 0.5 * (matrix + matrix.adjoint());
    Eigen::SelfAdjointEigenSolver<DenseMatrixXc> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

void DensityMatrix::validate(double trace_tol, double herm_tol, double pos_tol) const {
    if (trace_error() > trace_tol) {
        throw InvalidArgument("density matrix trace deviates from 1 by " + std::to_string(trace_error()));
    }
    if (hermiticity_error() > herm_tol) {
        throw InvalidArgument("density matrix is not Hermitian (max deviation " +
                              std::to_string(hermiticity_error()) + ")");
    }
    if (const double lo = min_eigenvalue(); lo < -pos_tol) {
        throw PositivityViolation("density matrix has eigenvalue " + std::to_string(lo));
    }
}

std::string to_string(SolverMethod m) {
    switch (m) {
    case SolverMethod::automatic: return "automatic";
    case SolverMethod::direct: return "direct";
    case SolverMethod::iterative: return "iterative";
    case SolverMethod::eigen: return "eigen";
    }
    return "unknown";
}

SolverMethod solver_method_from_string(const std::string& s) {
    if (s == "automatic") return SolverMethod::automatic;
    if (s == "direct") return SolverMethod::direct;
    if (s == "iterative") return SolverMethod::iterative;
    if (s == "eigen") return SolverMethod::eigen;
    throw InvalidArgument("unknown solver method '" + s + "'");
}

VectorXc vectorize(const DenseMatrixXc& m) {
    return Eigen::Map<const VectorXc>(m.data(), m.size());
}

DenseMatrixXc unvectorize(const VectorXc& v, Index d) {
    if (v.size() != d * d) throw InvalidDimension("unvectorize: length is not d^2");
    return Eigen::Map<const DenseMatrixXc>(v.data(), d, d);
}

VectorXc trace_functional(Index d) {
    VectorXc t = VectorXc::Zero(d * d);
    for (Index i = 0; i < d; ++i) t[i + d * i] = 1.0;
    return t;
}

Superoperator liouvillian(const Operator& hamiltonian, const std::vector<LindbladTerm>& dissipators,
                          DissipatorConvention convention) {
    // rho' = G rho + rho G^dag + s sum_j r_j A_j rho A_j^dag,  G = -iH - (s/2) sum_j r_j A_j^dag A_j
    // with s = 1 (standard) or 2 (doubled). Since H and the A^dag A sum are Hermitian,
    // vec(rho G^dag) = (conj(G) (x) I) vec(rho).
    const double s = convention == DissipatorConvention::doubled ? 2.0 : 1.0;
    const Index d = hamiltonian.dimension();
    const SparseMatrixXc id = sparse_identity(d);

    SparseMatrixXc decay(d, d);
    SparseMatrixXc sandwich(d * d, d * d);
    for (const auto& term : dissipators) {
        if (!(term.jump.space() == hamiltonian.space())) {
            throw InvalidDimension("dissipator '" + term.label + "' acts on a different space");
        }
        const SparseMatrixXc a = term.jump.sparse();
        const SparseMatrixXc ada = SparseMatrixXc(a.adjoint()) * a;
        decay += term.rate * ada;
        const SparseMatrixXc ac = a.conjugate();
        SparseMatrixXc kr = Eigen::kroneckerProduct(ac, a);
        sandwich += (s * term.rate) * kr;
    }
    const SparseMatrixXc generator = Complex(0.0, -1.0) * hamiltonian.sparse() - (0.5 * s) * decay;
    const SparseMatrixXc generator_conj = generator.conjugate();

    SparseMatrixXc left = Eigen::kroneckerProduct(id, generator);
    SparseMatrixXc right = Eigen::kroneckerProduct(generator_conj, id);
    SparseMatrixXc L = left + right + sandwich;
    L.prune([](Index, Index, const Complex& v) { return v != Complex(0.0); });
    L.makeCompressed();
    return Superoperator{hamiltonian.space(), std::move(L), std::nullopt, dissipators.size()};
}

Superoperator liouvillian(const ModelInstance& model) {
    Superoperator L = liouvillian(model.hamiltonian, model.dissipators, model.convention);
    L.boson_slot = model.boson_slot;
    return L;
}

double residual(const Superoperator& L, const DensityMatrix& rho) {
    if (rho.dimension() != L.hilbert_dimension()) {
        throw InvalidDimension("residual: density matrix does not match the superoperator");
    }
    const VectorXc v = vectorize(rho.matrix);
    return (L.matrix * v).norm();
}

SteadyStateResult steady_state(const Superoperator& L, const SolverOptions& opts) {
    const Index d = L.hilbert_dimension();
    if (L.channels == 0) {
        throw NoUniqueSteadyState("Liouvillian has no dissipation channels; no unique steady state");
    }

    const Block block = opts.reduce_blocks ? trace_block(L.matrix, d) : full_block(d * d);
    const Index m = static_cast<Index>(block.members.size());
    const SparseMatrixXc A = opts.reduce_blocks ? extract_block(L.matrix, block) : L.matrix;

    std::vector<Index> diag_local;
    diag_local.reserve(static_cast<std::size_t>(d));
    for (Index i = 0; i < d; ++i) diag_local.push_back(block.local_of[i + d * i]);

    SolverMethod used = opts.method;
    if (used == SolverMethod::automatic) {
        used = m > opts.iterative_threshold ? SolverMethod::iterative : SolverMethod::direct;
    }

    VectorXc x_local;
    std::optional<double> gap;
    if (used == SolverMethod::eigen) {
        EigenPick pick = solve_eigen(A, opts.eigen_max_dimension);
        x_local = std::move(pick.vector);
        gap = pick.gap;
    } else {
        const Index pivot = diag_local.front();
        const SparseMatrixXc system = with_trace_row(A, pivot, diag_local);
        VectorXc b = VectorXc::Zero(m);
        b[pivot] = 1.0;
        x_local = used == SolverMethod::direct ? solve_direct(system, b)
                                               : solve_iterative(system, b, opts);
    }

    VectorXc x = VectorXc::Zero(d * d);
    for (Index local = 0; local < m; ++local) x[block.members[local]] = x_local[local];

    DenseMatrixXc rho = unvectorize(x, d);
    rho = 0.5 * (rho + rho.adjoint()).eval();
    const Complex tr = rho.trace();
    if (!(std::abs(tr) > 0.0) || !std::isfinite(std::abs(tr))) {
        throw NoUniqueSteadyState("steady-state solve produced a traceless or non-finite vector");
    }
    rho /= tr.real();

    SteadyStateResult result{DensityMatrix{L.space, std::move(rho)}, 0.0, 0, used, 0, 0.0, std::nullopt};
    result.residual = residual(L, result.rho);
    result.n_max_used = L.boson_slot ? L.space[*L.boson_slot] : 0;
    result.solver = used;
    result.system_size = m;
    result.spectral_gap = gap;
    if (!(result.residual <= opts.tolerance_for(used))) {
        throw NonConvergence("steady-state residual " + std::to_string(result.residual) +
                                 " exceeds tolerance " + std::to_string(opts.tolerance_for(used)),
                             result.residual);
    }
    result.min_eigenvalue = result.rho.min_eigenvalue();
    return result;
}

double inf_norm(const Superoperator& L) {
    Eigen::VectorXd row_sums = Eigen::VectorXd::Zero(L.matrix.rows());
    for (Index col = 0; col < L.matrix.outerSize(); ++col) {
        for (SparseMatrixXc::InnerIterator it(L.matrix, col); it; ++it) {
            row_sums[it.row()] += std::abs(it.value());
        }
    }
    return row_sums.size() ? row_sums.maxCoeff() : 0.0;
}

double default_time_step(const Superoperator& L) {
    const double norm = inf_norm(L);
    return norm > 0.0 ? 0.01 / norm : 0.01;
}

DensityMatrix evolve(const Superoperator& L, const DensityMatrix& rho0, double t_final,
                     std::optional<double> dt) {
    if (rho0.dimension() != L.hilbert_dimension()) {
        throw InvalidDimension("evolve: initial state does not match the superoperator");
    }
    if (rho0.trace_error() > 1e-10) throw InvalidArgument("evolve: initial state must have unit trace");
    if (!(t_final >= 0.0)) throw InvalidArgument("evolve: t_final must be >= 0");
    const double h_req = dt.value_or(default_time_step(L));
    if (!(h_req > 0.0)) throw InvalidArgument("evolve: time step must be > 0");

    const long steps = std::max(1L, static_cast<long>(std::ceil(t_final / h_req)));
    const double h = t_final / static_cast<double>(steps);
    const Index n = L.matrix.rows();

    VectorXc v = vectorize(rho0.matrix);
    VectorXc k1(n), k2(n), k3(n), k4(n), tmp(n);
    for (long s = 0; s < steps && t_final > 0.0; ++s) {
        k1.noalias() = L.matrix * v;
        tmp = v + (0.5 * h) * k1;
        k2.noalias() = L.matrix * tmp;
        tmp = v + (0.5 * h) * k2;
        k3.noalias() = L.matrix * tmp;
        tmp = v + h * k3;
        k4.noalias() = L.matrix * tmp;
        v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }

    DensityMatrix out{rho0.space, unvectorize(v, L.hilbert_dimension())};
    const double drift = std::abs(out.matrix.trace() - rho0.matrix.trace());
    if (drift > 1e-6 || !std::isfinite(drift)) {
        throw StepSizeError("trace drifted by " + std::to_string(drift) + "; reduce the time step",
                            drift);
    }
    // RK4 conserves the trace exactly here, so instability shows up as ||rho||_F > 1 instead.
    if (const double excess = out.matrix.norm() - 1.0; excess > 1e-6) {
        throw StepSizeError("state norm grew by " + std::to_string(excess) + "; reduce the time step",
                            excess);
    }
    return out;
}

DensityMatrix evolve(const ModelInstance& model, const DensityMatrix& rho0, double t_final,
                     std::optional<double> dt) {
    return evolve(liouvillian(model), rho0, t_final, dt);
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
    if (a.dimension() != b.dimension()) throw InvalidDimension("trace_distance: dimension mismatch");
    const DenseMatrixXc diff = a.matrix - b.matrix;
    const DenseMatrixXc h = 0.5 * (diff + diff.adjoint());
    Eigen::SelfAdjointEigenSolver<DenseMatrixXc> es(h, Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

} // namespace negtemp
