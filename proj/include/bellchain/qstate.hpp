#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <complex>
#include <cstdint>
#include <vector>

#include "bellchain/errors.hpp"
#include "bellchain/rng.hpp"

namespace bellchain {

template <typename Real>
using CVec = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using CMat = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

using OperatorMatrix = CMat<double>;

// Dense state vector over a chain of `sites` sites of equal local dimension.
// Index convention: basis index = sum_i digit_i * local_dim^(sites - i); site 1
// is the most significant slot, and digit 0 means spin-up for qubits. States
// are normalized unless an operation documents an unnormalized return.
template <typename Real>
struct BasicPureState {
    int local_dim = 2;
    int sites = 1;
    CVec<Real> amplitudes;

    Eigen::Index dim() const { return amplitudes.size(); }
};

using PureState = BasicPureState<double>;

inline std::int64_t pow_int(std::int64_t base, int exp) {
    std::int64_t r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

inline std::int64_t encode_index(const std::vector<int>& digits, int local_dim) {
    std::int64_t idx = 0;
    for (int d : digits) idx = idx * local_dim + d;
    return idx;
}

inline std::vector<int> decode_index(std::int64_t index, int sites, int local_dim) {
    std::vector<int> digits(sites);
    for (int i = sites - 1; i >= 0; --i) {
        digits[i] = static_cast<int>(index % local_dim);
        index /= local_dim;
    }
    return digits;
}

template <typename Real>
Real norm(const BasicPureState<Real>& s) {
    return s.amplitudes.norm();
}

template <typename Real>
BasicPureState<Real> normalized(const BasicPureState<Real>& s) {
    Real n = s.amplitudes.norm();
    if (n == Real(0)) throw ValidationError("cannot normalize a zero state");
    BasicPureState<Real> out = s;
    out.amplitudes /= n;
    return out;
}

template <typename Real>
BasicPureState<Real> basis_state(int local_dim, int sites, std::int64_t index) {
    BasicPureState<Real> s{local_dim, sites, CVec<Real>::Zero(pow_int(local_dim, sites))};
    s.amplitudes(index) = Real(1);
    return s;
}

inline PureState basis_state(int local_dim, int sites, std::int64_t index) {
    return basis_state<double>(local_dim, sites, index);
}

template <typename Real>
BasicPureState<Real> tensor(const BasicPureState<Real>& a, const BasicPureState<Real>& b) {
    if (a.local_dim != b.local_dim)
        throw DimensionError("tensor: mismatched local dimensions");
    BasicPureState<Real> out{a.local_dim, a.sites + b.sites, CVec<Real>(a.dim() * b.dim())};
    for (Eigen::Index i = 0; i < a.dim(); ++i)
        out.amplitudes.segment(i * b.dim(), b.dim()) = a.amplitudes(i) * b.amplitudes;
    return out;
}

template <typename Real>
std::complex<Real> inner(const BasicPureState<Real>& a, const BasicPureState<Real>& b) {
    if (a.dim() != b.dim() || a.local_dim != b.local_dim)
        throw DimensionError("inner: mismatched dimensions");
    return a.amplitudes.dot(b.amplitudes); // Eigen dot conjugates the left factor
}

namespace detail {

// Strides and offset tables for applying an operator to an ordered list of
// sites. sites are 1-based; the first listed site is the most significant slot
// of the operator's own index.
struct LocalIndexing {
    std::vector<std::int64_t> sub_offsets;  // offset of each operator sub-index
    std::vector<std::int64_t> rest_offsets; // offset of each complement pattern
};

inline LocalIndexing local_indexing(int local_dim, int sites, const std::vector<int>& op_sites) {
    const int k = static_cast<int>(op_sites.size());
    std::vector<std::int64_t> stride(sites + 1);
    for (int s = 1; s <= sites; ++s) stride[s] = pow_int(local_dim, sites - s);

    std::vector<bool> used(sites + 1, false);
    for (int s : op_sites) {
        if (s < 1 || s > sites) throw DimensionError("apply_local: site out of range");
        if (used[s]) throw DimensionError("apply_local: repeated site");
        used[s] = true;
    }
    std::vector<int> rest_sites;
    for (int s = 1; s <= sites; ++s)
        if (!used[s]) rest_sites.push_back(s);

    LocalIndexing ix;
    const std::int64_t dk = pow_int(local_dim, k);
    ix.sub_offsets.resize(dk);
    for (std::int64_t j = 0; j < dk; ++j) {
        std::int64_t off = 0, t = j;
        for (int i = k - 1; i >= 0; --i) {
            off += (t % local_dim) * stride[op_sites[i]];
            t /= local_dim;
        }
        ix.sub_offsets[j] = off;
    }
    const std::int64_t dr = pow_int(local_dim, sites - k);
    ix.rest_offsets.resize(dr);
    for (std::int64_t r = 0; r < dr; ++r) {
        std::int64_t off = 0, t = r;
        for (int i = static_cast<int>(rest_sites.size()) - 1; i >= 0; --i) {
            off += (t % local_dim) * stride[rest_sites[i]];
            t /= local_dim;
        }
        ix.rest_offsets[r] = off;
    }
    return ix;
}

} // namespace detail

// Applies `op` to the listed sites (listed order = operator tensor slots),
// identity elsewhere. The result is not renormalized.
template <typename Real>
BasicPureState<Real> apply_local(const BasicPureState<Real>& state, const std::vector<int>& op_sites,
                                 const CMat<Real>& op) {
    const std::int64_t dk = pow_int(state.local_dim, static_cast<int>(op_sites.size()));
    if (op.rows() != dk || op.cols() != dk)
        throw DimensionError("apply_local: operator dimension does not match site list");
    auto ix = detail::local_indexing(state.local_dim, state.sites, op_sites);

    BasicPureState<Real> out{state.local_dim, state.sites, CVec<Real>(state.dim())};
    CVec<Real> x(dk), y(dk);
    for (std::int64_t base : ix.rest_offsets) {
        for (std::int64_t j = 0; j < dk; ++j) x(j) = state.amplitudes(base + ix.sub_offsets[j]);
        y.noalias() = op * x;
        for (std::int64_t j = 0; j < dk; ++j) out.amplitudes(base + ix.sub_offsets[j]) = y(j);
    }
    return out;
}

template <typename Real>
struct ProjectResult {
    BasicPureState<Real> branch; // unnormalized
    Real probability;
};

// Projective-measurement branch: branch = (P on sites ⊗ I)·state, probability =
// ‖branch‖². The branch is returned unnormalized so callers can chain
// projections and keep exact branch weights.
template <typename Real>
ProjectResult<Real> project(const BasicPureState<Real>& state, const std::vector<int>& op_sites,
                            const CMat<Real>& projector) {
    if ((projector * projector - projector).cwiseAbs().maxCoeff() > 1e-10)
        throw ValidationError("project: projector is not idempotent");
    if ((projector - projector.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
        throw ValidationError("project: projector is not Hermitian");
    ProjectResult<Real> r{apply_local(state, op_sites, projector), Real(0)};
    r.probability = r.branch.amplitudes.squaredNorm();
    return r;
}

template <typename Real>
std::complex<Real> expectation(const BasicPureState<Real>& state, const CMat<Real>& op) {
    if (op.rows() != state.dim() || op.cols() != state.dim())
        throw DimensionError("expectation: operator dimension mismatch");
    return state.amplitudes.dot(op * state.amplitudes);
}

template <typename Real>
std::complex<Real> expectation(const BasicPureState<Real>& state, const std::vector<int>& op_sites,
                               const CMat<Real>& op) {
    return inner(state, apply_local(state, op_sites, op));
}

// Reduced density matrix of the listed sites (in listed order).
template <typename Real>
CMat<Real> reduced_density(const BasicPureState<Real>& state, const std::vector<int>& keep_sites) {
    const std::int64_t dk = pow_int(state.local_dim, static_cast<int>(keep_sites.size()));
    auto ix = detail::local_indexing(state.local_dim, state.sites, keep_sites);
    CMat<Real> rho = CMat<Real>::Zero(dk, dk);
    CVec<Real> x(dk);
    for (std::int64_t base : ix.rest_offsets) {
        for (std::int64_t j = 0; j < dk; ++j) x(j) = state.amplitudes(base + ix.sub_offsets[j]);
        rho.noalias() += x * x.adjoint();
    }
    return rho;
}

// Schmidt coefficients (descending singular values) across the contiguous cut
// after site `cut`, 1 ≤ cut < sites.
template <typename Real>
std::vector<Real> schmidt_coefficients(const BasicPureState<Real>& state, int cut) {
    if (cut < 1 || cut >= state.sites) throw DimensionError("schmidt_coefficients: cut out of range");
    const std::int64_t rows = pow_int(state.local_dim, cut);
    const std::int64_t cols = pow_int(state.local_dim, state.sites - cut);
    Eigen::Map<const CMat<Real>> m(state.amplitudes.data(), cols, rows); // column-major view of row-major reshape
    Eigen::JacobiSVD<CMat<Real>> svd(m);
    std::vector<Real> sv(svd.singularValues().data(), svd.singularValues().data() + svd.singularValues().size());
    return sv;
}

// Entanglement entropy in bits across the cut after site `cut`.
template <typename Real>
Real entanglement_entropy_bits(const BasicPureState<Real>& state, int cut) {
    Real h = 0;
    for (Real s : schmidt_coefficients(state, cut)) {
        Real p = s * s;
        if (p > Real(1e-300)) h -= p * std::log2(p);
    }
    return h;
}

template <typename Real>
BasicPureState<Real> random_haar_state(std::int64_t dim, RngStream& rng, int local_dim = 2, int sites = -1) {
    if (dim < local_dim) throw DimensionError("random_haar_state: dim must be >= local_dim");
    if (sites < 0) {
        sites = 0;
        std::int64_t d = 1;
        while (d < dim) { d *= local_dim; ++sites; }
        if (d != dim) throw DimensionError("random_haar_state: dim is not a power of local_dim");
    }
    BasicPureState<Real> s{local_dim, sites, CVec<Real>(dim)};
    for (std::int64_t i = 0; i < dim; ++i) {
        double re = rng.normal();
        double im = rng.normal();
        s.amplitudes(i) = std::complex<Real>(Real(re), Real(im));
    }
    s.amplitudes /= s.amplitudes.norm();
    return s;
}

inline PureState random_haar_state(std::int64_t dim, RngStream& rng, int local_dim = 2, int sites = -1) {
    return random_haar_state<double>(dim, rng, local_dim, sites);
}

inline OperatorMatrix identity_op(Eigen::Index d) { return OperatorMatrix::Identity(d, d); }

inline OperatorMatrix pauli_x() {
    OperatorMatrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

inline OperatorMatrix pauli_y() {
    OperatorMatrix m(2, 2);
    m << std::complex<double>(0, 0), std::complex<double>(0, -1), std::complex<double>(0, 1),
        std::complex<double>(0, 0);
    return m;
}

inline OperatorMatrix pauli_z() {
    OperatorMatrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

inline OperatorMatrix kron(const OperatorMatrix& a, const OperatorMatrix& b) {
    OperatorMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

} // namespace bellchain
