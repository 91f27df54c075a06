#pragma once

#include <vector>

#include "bellchain/qstate.hpp"

namespace bellchain {

// One k-site term of a Hamiltonian: `op` acts on `sites` (1-based, listed
// order = operator tensor slots).
struct Term {
    std::vector<int> sites;
    OperatorMatrix op;
};

// Hamiltonian kept as a sparse term list and applied on the fly; densified
// only at desk scale.
struct HamiltonianTerms {
    int local_dim = 2;
    int sites = 1;
    double constant = 0.0;
    std::vector<Term> terms;

    std::int64_t dim() const { return pow_int(local_dim, sites); }
    PureState apply(const PureState& psi) const;
    OperatorMatrix to_dense() const;
};

struct Eigenpair {
    double energy = 0.0;
    PureState state;
    double residual = 0.0;
};

// Lowest eigenvalue with an orthonormal basis of its (possibly degenerate)
// eigenspace; eigenvalues within window·‖H‖ of the minimum count as one set.
struct EigenSet {
    double energy = 0.0;
    std::vector<PureState> states;
    double max_residual = 0.0;
};

// Dense path for dim ≤ 2048, Lanczos with full reorthogonalization and
// deflation above that (dim ≤ 2^14).
EigenSet lowest_eigenpair(const HamiltonianTerms& H, double tol = 1e-9);

// Dense-matrix entry point; validates Hermiticity.
EigenSet lowest_eigenpair(const OperatorMatrix& H, double tol = 1e-9, int local_dim = 2);

} // namespace bellchain
