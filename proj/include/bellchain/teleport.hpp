#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "bellchain/bell.hpp"
#include "bellchain/qstate.hpp"

namespace bellchain {

// One protocol run. Measurement pairing is fixed as (target, chain site 1),
// (chain 2, chain 3), …, with the output qubit at chain site L. On a
// zero-probability branch (probability ≤ 1e-12) fidelity is undefined:
// fidelity_defined is false and such branches are excluded from minima.
struct TeleportOutcome {
    LabelVector outcomes;
    double probability = 0.0;
    PureState output_qubit; // normalized
    SignedCorrection applied_correction;
    double fidelity = 0.0;
    bool fidelity_defined = true;
};

// Signed string expectations and their absolute sum.
struct OParameter {
    double value = 0.0;
    double x = 0.0, y = 0.0, z = 0.0;
};

struct FidelityProfile {
    double fidelity_min = 1.0;
    double fidelity_mean = 1.0;
};

struct SweepRecord {
    std::int64_t channel_id = 0;
    OParameter o;
    SubspaceWeights weights;
    double fidelity_min = 1.0;
    double fidelity_mean = 1.0;
    double bound = 1.0;
};

enum class SamplerKind { haar, biased };

// Projects each pair onto bell_state(outcomes[k]) in sequence; probability is
// the product of branch norms; applied_correction is the inverse of
// subspace_correction(assumed_subspace, outcomes); fidelity =
// |⟨target | corrected output⟩|².
TeleportOutcome teleport_branch(const PureState& channel, const PureState& target,
                                const LabelVector& outcomes, BellLabel assumed_subspace);

// Samples each pair's outcome by the Born rule sequentially; the returned
// probability is the product of realized conditional probabilities.
TeleportOutcome teleport_sample(const PureState& channel, const PureState& target,
                                BellLabel assumed_subspace, RngStream& rng);

OParameter o_parameter(const PureState& channel);

// (value − 1)/2, unclamped; vacuous when negative.
double fidelity_bound(const OParameter& o);

// Bell measurement realized as a similarity transformation: a fixed two-qubit
// entangling unitary, two single-site computational-basis projections, and the
// inverse unitary. Matches direct Bell projection branch by branch.
ProjectResult<double> bell_measure_via_circuit(const PureState& state, std::array<int, 2> pair,
                                               BellLabel outcome);

// Per-target teleportation fidelity = probability-weighted average of the
// branch fidelities over all 4^(L/2) outcome branches (branches with
// probability ≤ 1e-12 are excluded). fidelity_min minimizes that over targets;
// fidelity_mean averages it over targets. The minimum is taken of the
// outcome-averaged per-target fidelity, not of single branches: the (𝒪−1)/2
// lower bound constrains the average fidelity of a teleported state, and
// individual branch fidelities of entangled in-subspace channels can dip
// below it on suppressed branches.
FidelityProfile channel_fidelity_profile(const PureState& channel, const std::vector<PureState>& targets,
                                         BellLabel assumed_subspace);

// |+x⟩, |−x⟩, |+y⟩, |−y⟩, |+z⟩, |−z⟩.
std::vector<PureState> axis_targets();

// The six axis states plus 20 Haar targets drawn from `rng`.
std::vector<PureState> default_target_set(RngStream& rng);

// Haar draw projected onto the `label` string subspace, renormalized.
PureState random_in_subspace_state(int L, BellLabel label, RngStream& rng);

// n_channels channels at L qubits; channel c uses RNG stream (seed, c), so
// records are reproducible independently of evaluation order. `biased` mixes a
// Haar state with a random in-subspace state as √(1−t)·ψ_haar + √t·ψ_sub,
// t uniform, subspace label uniform over the four.
std::vector<SweepRecord> sweep_experiment(int n_channels, int L, std::uint64_t seed, SamplerKind sampler);

} // namespace bellchain
