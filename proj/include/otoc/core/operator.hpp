#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <complex>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "otoc/core/errors.hpp"

namespace otoc::core {

using Complex = std::complex<double>;
using Matrix  = Eigen::MatrixXcd;
using Index   = Eigen::Index;

inline constexpr double state_hermitian_tol = 1e-12;
inline constexpr double state_trace_tol     = 1e-12;
inline constexpr double state_eigenvalue_tol = 1e-10;

// --------------------------- 2x2 Pauli and identity -------------------------

inline Matrix identity(Index n) { return Matrix::Identity(n, n); }

inline Matrix sigma_x() {
    Matrix m(2, 2);
    m << 0.0, 1.0,
         1.0, 0.0;
    return m;
}

inline Matrix sigma_y() {
    Matrix m(2, 2);
    m << 0.0, Complex(0.0, -1.0),
         Complex(0.0, 1.0), 0.0;
    return m;
}

inline Matrix sigma_z() {
    Matrix m(2, 2);
    m << 1.0,  0.0,
         0.0, -1.0;
    return m;
}

inline bool entries_finite(const Matrix& m) {
    for (Index j = 0; j < m.cols(); ++j) {
        for (Index i = 0; i < m.rows(); ++i) {
            if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
        }
    }
    return true;
}

// --------------------------- Composite-space operator -----------------------

/// Dense operator on a composite finite-dimensional Hilbert space.
/// subsystem_dims records the tensor factorization; their product equals dim.
class Operator {
public:
    Operator() = default;

    Operator(Matrix entries, std::vector<Index> subsystem_dims)
        : mat_(std::move(entries)), dims_(std::move(subsystem_dims)) {
        if (mat_.rows() != mat_.cols()) {
            throw std::invalid_argument("Operator: matrix must be square");
        }
        Index prod = 1;
        for (Index d : dims_) {
            if (d <= 0) throw std::invalid_argument("Operator: subsystem dims must be positive");
            prod *= d;
        }
        if (prod != mat_.rows()) {
            throw std::invalid_argument("Operator: product of subsystem dims (" +
                                        std::to_string(prod) + ") != dimension (" +
                                        std::to_string(mat_.rows()) + ")");
        }
        if (!entries_finite(mat_)) {
            throw std::invalid_argument("Operator: entries must be finite");
        }
    }

    explicit Operator(Matrix entries) : mat_(std::move(entries)) {
        if (mat_.rows() != mat_.cols()) {
            throw std::invalid_argument("Operator: matrix must be square");
        }
        if (!entries_finite(mat_)) {
            throw std::invalid_argument("Operator: entries must be finite");
        }
        dims_ = {mat_.rows()};
    }

    const Matrix& mat() const { return mat_; }
    Index dim() const { return mat_.rows(); }
    const std::vector<Index>& subsystem_dims() const { return dims_; }

private:
    Matrix mat_;
    std::vector<Index> dims_;
};

// --------------------------- Kronecker / embedding --------------------------

inline Matrix kron_mat(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    out = Eigen::kroneckerProduct(a, b);
    return out;
}

/// Tensor product; subsystem dims concatenate. Throws dimension_cap_error if
/// the result would exceed `dim_cap`.
inline Operator kron(const Operator& a, const Operator& b,
                     std::size_t dim_cap = default_dim_cap) {
    const std::size_t d = static_cast<std::size_t>(a.dim()) * static_cast<std::size_t>(b.dim());
    if (d > dim_cap) {
        throw dimension_cap_error("kron: resulting dimension " + std::to_string(d) +
                                  " exceeds cap " + std::to_string(dim_cap));
    }
    std::vector<Index> dims = a.subsystem_dims();
    dims.insert(dims.end(), b.subsystem_dims().begin(), b.subsystem_dims().end());
    return Operator(kron_mat(a.mat(), b.mat()), std::move(dims));
}

/// Product of single-slot operators embedded in the composite space described
/// by `dims`; slots not listed get identity.
inline Matrix embed_product(const std::vector<Index>& dims,
                            const std::vector<std::pair<std::size_t, const Matrix*>>& factors) {
    Matrix acc = Matrix::Identity(1, 1);
    for (std::size_t slot = 0; slot < dims.size(); ++slot) {
        const Matrix* f = nullptr;
        for (const auto& [s, m] : factors) {
            if (s == slot) {
                if (f) throw std::invalid_argument("embed_product: duplicate slot");
                f = m;
            }
        }
        if (f) {
            if (f->rows() != dims[slot]) {
                throw std::invalid_argument("embed_product: factor dim mismatch at slot " +
                                            std::to_string(slot));
            }
            acc = kron_mat(acc, *f);
        } else {
            acc = kron_mat(acc, Matrix::Identity(dims[slot], dims[slot]));
        }
    }
    return acc;
}

// --------------------------- Partial trace -----------------------------------

/// Trace out all subsystems not listed in `keep` (indices into `dims`).
/// Kept subsystems retain their original relative order.
inline Matrix partial_trace_mat(const Matrix& rho, const std::vector<Index>& dims,
                                const std::vector<std::size_t>& keep) {
    const std::size_t m = dims.size();
    if (keep.empty()) throw std::invalid_argument("partial_trace: keep set must be non-empty");
    {
        Index prod = 1;
        for (Index d : dims) prod *= d;
        if (prod != rho.rows() || rho.rows() != rho.cols()) {
            throw std::invalid_argument("partial_trace: dims do not match matrix");
        }
    }
    std::vector<bool> kept(m, false);
    for (std::size_t k : keep) {
        if (k >= m) throw std::invalid_argument("partial_trace: subsystem index out of range");
        if (kept[k]) throw std::invalid_argument("partial_trace: duplicate subsystem index");
        kept[k] = true;
    }

    std::vector<Index> stride(m, 1);
    for (std::size_t i = m; i-- > 1;) stride[i - 1] = stride[i] * dims[i];

    // Flat offsets of every kept and every traced multi-index.
    auto offsets_for = [&](bool want_kept) {
        std::vector<Index> offs{0};
        for (std::size_t i = 0; i < m; ++i) {
            if (kept[i] != want_kept) continue;
            std::vector<Index> next;
            next.reserve(offs.size() * static_cast<std::size_t>(dims[i]));
            for (Index base : offs) {
                for (Index c = 0; c < dims[i]; ++c) next.push_back(base + c * stride[i]);
            }
            offs = std::move(next);
        }
        return offs;
    };
    const std::vector<Index> off_keep  = offsets_for(true);
    const std::vector<Index> off_trace = offsets_for(false);

    const Index dk = static_cast<Index>(off_keep.size());
    Matrix out = Matrix::Zero(dk, dk);
    for (Index a = 0; a < dk; ++a) {
        for (Index b = 0; b < dk; ++b) {
            Complex s(0.0, 0.0);
            for (Index g : off_trace) s += rho(off_keep[a] + g, off_keep[b] + g);
            out(a, b) = s;
        }
    }
    return out;
}

// --------------------------- Density matrices --------------------------------

/// Density matrix; validates Hermiticity, unit trace and positivity on
/// construction unless built through trusted().
class State {
public:
    explicit State(Operator op) : op_(std::move(op)) {
        const Matrix& r = op_.mat();
        const double herm = (r - r.adjoint()).cwiseAbs().maxCoeff();
        if (herm > state_hermitian_tol) {
            throw std::invalid_argument("State: not Hermitian (max deviation " +
                                        std::to_string(herm) + ")");
        }
        const double tr_err = std::abs(r.trace() - Complex(1.0, 0.0));
        if (tr_err > state_trace_tol) {
            throw std::invalid_argument("State: trace differs from 1 by " + std::to_string(tr_err));
        }
        Eigen::SelfAdjointEigenSolver<Matrix> es(r, Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success) throw numerical_error("State: eigenvalue check failed");
        if (es.eigenvalues().minCoeff() < -state_eigenvalue_tol) {
            throw std::invalid_argument("State: negative eigenvalue " +
                                        std::to_string(es.eigenvalues().minCoeff()));
        }
    }

    /// Skip the O(dim^3) validation; for internally constructed states whose
    /// invariants hold by construction.
    static State trusted(Operator op) { return State(std::move(op), trusted_tag{}); }

    const Matrix& mat() const { return op_.mat(); }
    Index dim() const { return op_.dim(); }
    const std::vector<Index>& subsystem_dims() const { return op_.subsystem_dims(); }
    const Operator& op() const { return op_; }

private:
    struct trusted_tag {};
    State(Operator op, trusted_tag) : op_(std::move(op)) {}
    Operator op_;
};

inline State partial_trace(const State& rho, const std::vector<std::size_t>& keep) {
    Matrix out = partial_trace_mat(rho.mat(), rho.subsystem_dims(), keep);
    std::vector<Index> dims;
    for (std::size_t k : keep) dims.push_back(rho.subsystem_dims()[k]);
    return State::trusted(Operator(std::move(out), std::move(dims)));
}

inline State maximally_mixed(Index dim, std::vector<Index> subsystem_dims = {}) {
    if (subsystem_dims.empty()) subsystem_dims = {dim};
    Matrix m = Matrix::Identity(dim, dim) / static_cast<double>(dim);
    return State::trusted(Operator(std::move(m), std::move(subsystem_dims)));
}

inline State basis_state(std::vector<Index> dims, Index label) {
    Index d = 1;
    for (Index x : dims) d *= x;
    if (label < 0 || label >= d) throw std::invalid_argument("basis_state: label out of range");
    Matrix m = Matrix::Zero(d, d);
    m(label, label) = 1.0;
    return State::trusted(Operator(std::move(m), std::move(dims)));
}

// --------------------------- Truncated oscillator ----------------------------

/// Single bosonic mode truncated to Fock levels 0..n_max-1.
struct FockSpace {
    Index n_max = 2;
    double omega = 1.0;

    FockSpace(Index levels, double frequency) : n_max(levels), omega(frequency) {
        if (n_max < 2) throw std::invalid_argument("FockSpace: n_max must be >= 2");
    }
};

// a |n> = sqrt(n) |n-1>
inline Matrix annihilation(Index n_max) {
    Matrix m = Matrix::Zero(n_max, n_max);
    for (Index n = 1; n < n_max; ++n) m(n - 1, n) = std::sqrt(static_cast<double>(n));
    return m;
}

inline Matrix creation(Index n_max) { return annihilation(n_max).adjoint(); }

inline Matrix number_operator(Index n_max) {
    Matrix m = Matrix::Zero(n_max, n_max);
    for (Index n = 0; n < n_max; ++n) m(n, n) = static_cast<double>(n);
    return m;
}

/// Thermal state of a truncated oscillator, populations ~ exp(-beta*omega*n)
/// renormalized over the truncated space.
inline State thermal_state(const FockSpace& mode, double beta) {
    if (beta <= 0.0) throw std::invalid_argument("thermal_state: beta must be > 0");
    if (mode.omega <= 0.0) throw std::invalid_argument("thermal_state: omega must be > 0");
    const double r = std::exp(-beta * mode.omega);
    Matrix m = Matrix::Zero(mode.n_max, mode.n_max);
    double z = 0.0, p = 1.0;
    for (Index n = 0; n < mode.n_max; ++n) {
        m(n, n) = p;
        z += p;
        p *= r;
    }
    m /= z;
    return State::trusted(Operator(std::move(m), {mode.n_max}));
}

// --------------------------- Trace utilities ---------------------------------

/// Tr(ops[0]*ops[1]*...*rho). The final trace is taken without forming the
/// full product with rho.
inline Complex trace_product(const std::vector<Operator>& ops, const State& rho) {
    if (ops.empty()) return rho.mat().trace();
    for (const Operator& o : ops) {
        if (o.dim() != rho.dim()) throw std::invalid_argument("trace_product: dimension mismatch");
    }
    Matrix m = ops.front().mat();
    for (std::size_t i = 1; i < ops.size(); ++i) m = m * ops[i].mat();
    return (m.transpose().cwiseProduct(rho.mat())).sum();
}

inline Complex trace_of_product_with(const Matrix& a, const Matrix& rho) {
    return (a.transpose().cwiseProduct(rho)).sum();
}

inline double max_abs(const Matrix& a) { return a.cwiseAbs().maxCoeff(); }

} // namespace otoc::core
