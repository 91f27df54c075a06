#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "bellchain/qstate.hpp"

namespace bellchain {

// (x-sign, z-sign) eigenvalue pair of (σx⊗σx, σz⊗σz) for one Bell pair, and
// equally the label of one of the four string-operator subspaces.
struct BellLabel {
    int x_sign = 1; // ±1
    int z_sign = 1; // ±1
    friend bool operator==(const BellLabel&, const BellLabel&) = default;
};

// Fixed enumeration order (-,-), (-,+), (+,-), (+,+); doubles as the
// tie-break order wherever a deterministic choice among labels is needed.
inline int bell_index(BellLabel l) { return (l.x_sign > 0 ? 2 : 0) + (l.z_sign > 0 ? 1 : 0); }

inline BellLabel bell_label_from_index(int i) {
    return BellLabel{(i & 2) ? 1 : -1, (i & 1) ? 1 : -1};
}

std::string to_string(BellLabel l);
std::optional<BellLabel> parse_bell_label(const std::string& s); // "--", "-+", "+-", "++"

using LabelVector = std::vector<BellLabel>;

// Element of the correction group {±X⁰, ±X¹, ±X², ±X³} with X⁰ = I, X¹ = σx,
// X² = −σz, X³ = iσy.
struct SignedCorrection {
    int index = 0; // 0..3
    int sign = 1;  // ±1
    friend bool operator==(const SignedCorrection&, const SignedCorrection&) = default;
};

std::string to_string(SignedCorrection c);

// The bare X^index matrix.
OperatorMatrix x_matrix(int index);
inline OperatorMatrix correction_matrix(SignedCorrection c) { return double(c.sign) * x_matrix(c.index); }

SignedCorrection compose(const std::vector<SignedCorrection>& corrections);
SignedCorrection inverse(SignedCorrection c);

// Weights of a state across the four string-operator subspaces, stored in
// bell_index order.
struct SubspaceWeights {
    std::array<double, 4> w{};

    double at(BellLabel l) const { return w[bell_index(l)]; }
    double sum() const { return w[0] + w[1] + w[2] + w[3]; }
    double max_weight() const;
    // Argmax label; ties broken in the fixed order (-,-), (-,+), (+,-), (+,+).
    BellLabel max_label() const;
};

// The four Bell states, phase-fixed by bell_state((-,-)) = (|↑↓⟩−|↓↑⟩)/√2 and
// bell_state(label i) = (I⊗X^i) bell_state((-,-)).
PureState bell_state(BellLabel label);

// Residual operator left on the teleported qubit when a pair channel |jk} is
// measured with outcome |pq}: the signed lookup-table entry X^{jk}_{pq}.
SignedCorrection correction(BellLabel channel, BellLabel outcome);

// L-fold tensor power of σ_axis (axis in {'x','y','z'}); dense, so capped at
// L ≤ 10. Use the apply_*_string functions for larger chains.
OperatorMatrix string_operator(int L, char axis);

// O(2^L) application of the L-site Pauli strings to a qubit state.
PureState apply_x_string(const PureState& s);
PureState apply_y_string(const PureState& s);
PureState apply_z_string(const PureState& s);

// Weights ‖Π_kl·state‖² of the four joint eigenprojectors of the x- and
// z-strings, Π_kl = (I + k·Sx)(I + l·Sz)/4. Requires an even qubit chain.
SubspaceWeights classify(const PureState& state);

// Total correction class for a channel in `subspace` under the given
// measurement outcomes: composes per-pair lookup entries for a representative
// pair labeling whose label products equal `subspace`. The index is
// representative-independent; the sign is representative-dependent and
// physically a global phase.
SignedCorrection subspace_correction(BellLabel subspace, const LabelVector& outcomes);

// L-site cluster state: uniform magnitudes with sign (−1)^(number of adjacent
// ↑↑ pairs), matching the 2-site form |↓↓⟩+|↓↑⟩+|↑↓⟩−|↑↑⟩.
PureState cluster_state(int L);

struct ClusterMapping {
    std::vector<OperatorMatrix> unitaries; // one per site
    PureState mapped;
};

// Single-site unitaries that move the L-site cluster state into the (+,+)
// subspace with weight 1. Tries alternating identity/Hadamard patterns first,
// then constructs the rotation from a pair of full-support stabilizer strings.
ClusterMapping cluster_to_bell_subspace(int L);

} // namespace bellchain
