#pragma once

#include <utility>
#include <vector>

#include "bellchain/qstate.hpp"

namespace bellchain {

// Shift/phase label (A, B) of a generalized N-Bell state, both mod N.
struct QuditLabel {
    int A = 0;
    int B = 0;
    friend bool operator==(const QuditLabel&, const QuditLabel&) = default;
};

// ω^phase_power · P^p_power · Q^q_power with ω = exp(2πi/N); all exponents mod
// N, tracked as exact integers so long compositions accumulate no phase error.
struct WeylCorrection {
    int p_power = 0;
    int q_power = 0;
    int phase_power = 0;
    friend bool operator==(const WeylCorrection&, const WeylCorrection&) = default;
};

// (1/√N) Σ_i ω^{B·i} |i, (i+A) mod N⟩.
PureState nbell_state(int N, QuditLabel label);

// P = cyclic shift (ones on the superdiagonal plus the bottom-left corner),
// Q = diag(1, ω, …, ω^{N−1}). These satisfy Q·P = ω^{N−1}·P·Q.
std::pair<OperatorMatrix, OperatorMatrix> weyl_matrices(int N);

OperatorMatrix weyl_matrix(int N, const WeylCorrection& w);

// Matrix product a·b re-expressed in ω^c P^p Q^q form via the reordering
// identity Q^b P^a = ω^{−ab} P^a Q^b.
WeylCorrection compose_weyl(const WeylCorrection& a, const WeylCorrection& b, int N);

WeylCorrection inverse_weyl(const WeylCorrection& w, int N);

// Residual Weyl operator left on the output qudit when a pair channel
// |channel} is measured with outcome |outcome}: solved numerically against the
// P^a Q^b basis and cached per (N, channel, outcome). A residual that is not
// proportional to a single Weyl element raises an integrity error.
WeylCorrection qudit_correction(int N, QuditLabel channel, QuditLabel outcome);

struct QuditTeleportOutcome {
    std::vector<QuditLabel> outcomes;
    double probability = 0.0;
    PureState output_qudit; // normalized
    WeylCorrection applied_correction;
    double fidelity = 0.0;
    bool fidelity_defined = true;
};

// Generalized teleport_branch with the same pairing convention. assumed_class
// is the channel's N-Bell class (ΣA mod N, ΣB mod N); the applied correction
// is the inverse of the composed per-pair residuals, and fidelity =
// |⟨target| W⁻¹ |output⟩|².
QuditTeleportOutcome qudit_teleport_branch(const PureState& channel, const PureState& target,
                                           const std::vector<QuditLabel>& outcomes,
                                           QuditLabel assumed_class);

} // namespace bellchain
