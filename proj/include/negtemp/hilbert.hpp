#pragma once

// Operator algebra over composite finite-dimensional Hilbert spaces.
//
// Conventions:
//   * qubit basis index 0 = |g>, index 1 = |e>; sigma_z = diag(-1, +1)
//   * kron(A, B): the leftmost factor varies slowest (block structure follows A)
//   * operators with total dimension > kSparseThreshold are stored sparse

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <string>
#include <variant>
#include <vector>

#include "negtemp/errors.hpp"

namespace negtemp {

using Index = Eigen::Index;
using Complex = std::complex<double>;

/// Ordered list of subsystem dimensions, e.g. {n_max, 2} for boson (x) qubit.
class SpaceDescriptor {
public:
    SpaceDescriptor() = default;

    explicit SpaceDescriptor(std::vector<Index> dims) : dims_(std::move(dims)) {
        for (Index d : dims_) {
            if (d < 1) {
                throw InvalidDimension("subsystem dimension must be >= 1, got " + std::to_string(d));
            }
        }
    }

    SpaceDescriptor(std::initializer_list<Index> dims)
        : SpaceDescriptor(std::vector<Index>(dims)) {}

    const std::vector<Index>& dims() const noexcept { return dims_; }
    std::size_t slots() const noexcept { return dims_.size(); }
    Index operator[](std::size_t slot) const { return dims_.at(slot); }

    /// Product of all subsystem dimensions (1 for the empty space).
    Index total_dimension() const noexcept {
        return std::accumulate(dims_.begin(), dims_.end(), Index{1}, std::multiplies<>());
    }

    SpaceDescriptor concat(const SpaceDescriptor& other) const {
        std::vector<Index> d = dims_;
        d.insert(d.end(), other.dims_.begin(), other.dims_.end());
        return SpaceDescriptor(std::move(d));
    }

    friend bool operator==(const SpaceDescriptor&, const SpaceDescriptor&) = default;

    std::string to_string() const {
        std::string s = "[";
        for (std::size_t i = 0; i < dims_.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(dims_[i]);
        }
        return s + "]";
    }

private:
    std::vector<Index> dims_;
};

enum class Storage { dense, sparse };

inline constexpr Index kSparseThreshold = 64;

inline Storage preferred_storage(Index dimension) noexcept {
    return dimension > kSparseThreshold ? Storage::sparse : Storage::dense;
}

/// Square matrix tagged with the composite space it acts on. Immutable after construction.
template <class Scalar>
class BasicOperator {
public:
    using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using SparseMatrix = Eigen::SparseMatrix<Scalar>;

    BasicOperator(SpaceDescriptor space, DenseMatrix m) : space_(std::move(space)) {
        check_side(m.rows(), m.cols());
        if (preferred_storage(m.rows()) == Storage::sparse) {
            data_ = to_sparse(m);
        } else {
            data_ = std::move(m);
        }
    }

    BasicOperator(SpaceDescriptor space, SparseMatrix m) : space_(std::move(space)) {
        check_side(m.rows(), m.cols());
        if (preferred_storage(m.rows()) == Storage::sparse) {
            m.prune([](Index, Index, const Scalar& v) { return v != Scalar(0); });
            m.makeCompressed();
            data_ = std::move(m);
        } else {
            data_ = DenseMatrix(m);
        }
    }

    static BasicOperator identity(const SpaceDescriptor& space) {
        const Index d = space.total_dimension();
        SparseMatrix id(d, d);
        id.setIdentity();
        return BasicOperator(space, std::move(id));
    }

    static BasicOperator zero(const SpaceDescriptor& space) {
        const Index d = space.total_dimension();
        return BasicOperator(space, SparseMatrix(d, d));
    }

    const SpaceDescriptor& space() const noexcept { return space_; }
    Index dimension() const noexcept { return space_.total_dimension(); }
    Storage storage() const noexcept {
        return std::holds_alternative<SparseMatrix>(data_) ? Storage::sparse : Storage::dense;
    }
    bool is_sparse() const noexcept { return storage() == Storage::sparse; }

    DenseMatrix dense() const {
        if (auto* s = std::get_if<SparseMatrix>(&data_)) return DenseMatrix(*s);
        return std::get<DenseMatrix>(data_);
    }

    SparseMatrix sparse() const {
        if (auto* s = std::get_if<SparseMatrix>(&data_)) return *s;
        return to_sparse(std::get<DenseMatrix>(data_));
    }

    Scalar coeff(Index row, Index col) const {
        if (auto* s = std::get_if<SparseMatrix>(&data_)) return s->coeff(row, col);
        return std::get<DenseMatrix>(data_)(row, col);
    }

    Scalar trace() const {
        if (auto* s = std::get_if<SparseMatrix>(&data_)) return s->diagonal().sum();
        return std::get<DenseMatrix>(data_).trace();
    }

    /// Number of structurally nonzero entries (exact zeros excluded).
    Index nonzeros() const {
        if (is_sparse()) return std::get<SparseMatrix>(data_).nonZeros();
        const auto& d = std::get<DenseMatrix>(data_);
        return (d.array() != Scalar(0)).count();
    }

    friend bool operator==(const BasicOperator& a, const BasicOperator& b) {
        return a.space_ == b.space_ && a.dense() == b.dense();
    }

private:
    void check_side(Index rows, Index cols) const {
        const Index d = space_.total_dimension();
        if (rows != cols || rows != d) {
            throw InvalidDimension("matrix is " + std::to_string(rows) + "x" + std::to_string(cols) +
                                   " but space " + space_.to_string() + " has dimension " +
                                   std::to_string(d));
        }
    }

    static SparseMatrix to_sparse(const DenseMatrix& m) {
        SparseMatrix s = m.sparseView(Scalar(0), 0);
        s.prune([](Index, Index, const Scalar& v) { return v != Scalar(0); });
        s.makeCompressed();
        return s;
    }

    SpaceDescriptor space_;
    std::variant<DenseMatrix, SparseMatrix> data_;
};

using Operator = BasicOperator<Complex>;

namespace detail {

template <class Scalar>
bool both_dense(const BasicOperator<Scalar>& a, const BasicOperator<Scalar>& b) {
    return !a.is_sparse() && !b.is_sparse();
}

template <class Scalar>
void require_same_space(const BasicOperator<Scalar>& a, const BasicOperator<Scalar>& b,
                        const char* op) {
    if (!(a.space() == b.space())) {
        throw InvalidDimension(std::string(op) + ": space mismatch " + a.space().to_string() +
                               " vs " + b.space().to_string());
    }
}

} // namespace detail

template <class Scalar>
BasicOperator<Scalar> adjoint(const BasicOperator<Scalar>& a) {
    using Sp = typename BasicOperator<Scalar>::SparseMatrix;
    using De = typename BasicOperator<Scalar>::DenseMatrix;
    if (a.is_sparse()) return BasicOperator<Scalar>(a.space(), Sp(a.sparse().adjoint()));
    return BasicOperator<Scalar>(a.space(), De(a.dense().adjoint()));
}

template <class Scalar>
BasicOperator<Scalar> operator*(const BasicOperator<Scalar>& a, const BasicOperator<Scalar>& b) {
    using Sp = typename BasicOperator<Scalar>::SparseMatrix;
    using De = typename BasicOperator<Scalar>::DenseMatrix;
    detail::require_same_space(a, b, "product");
    if (detail::both_dense(a, b)) return BasicOperator<Scalar>(a.space(), De(a.dense() * b.dense()));
    return BasicOperator<Scalar>(a.space(), Sp(a.sparse() * b.sparse()));
}

template <class Scalar>
BasicOperator<Scalar> operator+(const BasicOperator<Scalar>& a, const BasicOperator<Scalar>& b) {
    using Sp = typename BasicOperator<Scalar>::SparseMatrix;
    using De = typename BasicOperator<Scalar>::DenseMatrix;
    detail::require_same_space(a, b, "sum");
    if (detail::both_dense(a, b)) return BasicOperator<Scalar>(a.space(), De(a.dense() + b.dense()));
    return BasicOperator<Scalar>(a.space(), Sp(a.sparse() + b.sparse()));
}

template <class Scalar>
BasicOperator<Scalar> operator-(const BasicOperator<Scalar>& a, const BasicOperator<Scalar>& b) {
    using Sp = typename BasicOperator<Scalar>::SparseMatrix;
    using De = typename BasicOperator<Scalar>::DenseMatrix;
    detail::require_same_space(a, b, "difference");
    if (detail::both_dense(a, b)) return BasicOperator<Scalar>(a.space(), De(a.dense() - b.dense()));
    return BasicOperator<Scalar>(a.space(), Sp(a.sparse() - b.sparse()));
}

template <class Scalar>
BasicOperator<Scalar> operator*(const Scalar& c, const BasicOperator<Scalar>& a) {
    using Sp = typename BasicOperator<Scalar>::SparseMatrix;
    using De = typename BasicOperator<Scalar>::DenseMatrix;
    if (a.is_sparse()) return BasicOperator<Scalar>(a.space(), Sp(c * a.sparse()));
    return BasicOperator<Scalar>(a.space(), De(c * a.dense()));
}

template <class Scalar>
BasicOperator<Scalar> commutator(const BasicOperator<Scalar>& a, const BasicOperator<Scalar>& b) {
    return a * b - b * a;
}

/// Tensor product; the result lives on a.space() ++ b.space().
template <class Scalar>
BasicOperator<Scalar> kron(const BasicOperator<Scalar>& a, const BasicOperator<Scalar>& b) {
    using Sp = typename BasicOperator<Scalar>::SparseMatrix;
    using De = typename BasicOperator<Scalar>::DenseMatrix;
    SpaceDescriptor space = a.space().concat(b.space());
    if (detail::both_dense(a, b) && preferred_storage(space.total_dimension()) == Storage::dense) {
        return BasicOperator<Scalar>(std::move(space), De(Eigen::kroneckerProduct(a.dense(), b.dense())));
    }
    Sp out = Eigen::kroneckerProduct(a.sparse(), b.sparse());
    return BasicOperator<Scalar>(std::move(space), std::move(out));
}

/// Places a single-subsystem operator at `slot` of `target`, identity elsewhere.
template <class Scalar>
BasicOperator<Scalar> embed(const BasicOperator<Scalar>& a, const SpaceDescriptor& target,
                            std::size_t slot) {
    using Sp = typename BasicOperator<Scalar>::SparseMatrix;
    if (a.space().slots() != 1) {
        throw InvalidEmbedding("embed expects a single-subsystem operator, got space " +
                               a.space().to_string());
    }
    if (slot >= target.slots()) {
        throw InvalidEmbedding("slot " + std::to_string(slot) + " out of range for " +
                               target.to_string());
    }
    if (target[slot] != a.space()[0]) {
        throw InvalidEmbedding("dimension " + std::to_string(a.space()[0]) +
                               " does not match slot " + std::to_string(slot) + " of " +
                               target.to_string());
    }
    Index left = 1, right = 1;
    for (std::size_t i = 0; i < slot; ++i) left *= target[i];
    for (std::size_t i = slot + 1; i < target.slots(); ++i) right *= target[i];
    Sp id_left(left, left), id_right(right, right);
    id_left.setIdentity();
    id_right.setIdentity();
    Sp inner = Eigen::kroneckerProduct(a.sparse(), id_right);
    Sp full = Eigen::kroneckerProduct(id_left, inner);
    return BasicOperator<Scalar>(target, std::move(full));
}

/// a multiplied by itself k times; k = 0 gives the identity on a.space().
template <class Scalar>
BasicOperator<Scalar> op_power(const BasicOperator<Scalar>& a, unsigned k) {
    auto result = BasicOperator<Scalar>::identity(a.space());
    for (unsigned i = 0; i < k; ++i) result = result * a;
    return result;
}

template <class Scalar>
bool is_hermitian(const BasicOperator<Scalar>& a, double tol = 1e-12) {
    const auto d = a.dense();
    return (d - d.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

/// Truncated bosonic lowering operator on levels 0..n_max-1: entry (m, m+1) = sqrt(m+1).
template <class Scalar = Complex>
BasicOperator<Scalar> annihilation(Index n_max) {
    if (n_max < 1) throw InvalidDimension("annihilation: n_max must be >= 1");
    Eigen::SparseMatrix<Scalar> m(n_max, n_max);
    m.reserve(Eigen::VectorXi::Constant(n_max, 1));
    for (Index row = 0; row + 1 < n_max; ++row) {
        m.insert(row, row + 1) = Scalar(std::sqrt(static_cast<double>(row + 1)));
    }
    return BasicOperator<Scalar>(SpaceDescriptor{n_max}, std::move(m));
}

/// a^k built entrywise: (m, m+k) = sqrt((m+1)(m+2)...(m+k)), one sqrt per entry.
template <class Scalar = Complex>
BasicOperator<Scalar> annihilation_power(Index n_max, unsigned k) {
    if (n_max < 1) throw InvalidDimension("annihilation_power: n_max must be >= 1");
    Eigen::SparseMatrix<Scalar> m(n_max, n_max);
    for (Index row = 0; row + static_cast<Index>(k) < n_max; ++row) {
        long double prod = 1.0L;
        for (unsigned j = 1; j <= k; ++j) prod *= static_cast<long double>(row + j);
        m.insert(row, row + k) = Scalar(static_cast<double>(std::sqrt(prod)));
    }
    return BasicOperator<Scalar>(SpaceDescriptor{n_max}, std::move(m));
}

enum class QubitOp { sigma_plus, sigma_minus, sigma_z, identity };

template <class Scalar = Complex>
BasicOperator<Scalar> qubit_operator(QubitOp which) {
    using De = typename BasicOperator<Scalar>::DenseMatrix;
    De m = De::Zero(2, 2);
    switch (which) {
    case QubitOp::sigma_plus: m(1, 0) = Scalar(1); break;
    case QubitOp::sigma_minus: m(0, 1) = Scalar(1); break;
    case QubitOp::sigma_z:
        m(0, 0) = Scalar(-1);
        m(1, 1) = Scalar(1);
        break;
    case QubitOp::identity: m.setIdentity(); break;
    }
    return BasicOperator<Scalar>(SpaceDescriptor{2}, std::move(m));
}

} // namespace negtemp
