#include "bellchain/teleport.hpp"

#include <cmath>

namespace bellchain {

namespace {

using cplx = std::complex<double>;

constexpr double kZeroBranch = 1e-12;

void check_channel(const PureState& channel, const PureState& target) {
    if (channel.local_dim != 2 || target.local_dim != 2)
        throw ValidationError("teleport: qubit chains only");
    if (channel.sites % 2 != 0) throw ValidationError("teleport: channel length must be even");
    if (target.sites != 1) throw ValidationError("teleport: target must be a single qubit");
}

// Contracts the two most significant qubits of `s` against ⟨bra| (a 2-qubit
// state); the result keeps the remaining sites and is not renormalized.
PureState contract_front_pair(const PureState& s, const PureState& bra) {
    const std::int64_t rest = s.dim() / 4;
    PureState out{2, s.sites - 2, CVec<double>(rest)};
    for (std::int64_t r = 0; r < rest; ++r) {
        cplx acc = 0;
        for (int p = 0; p < 4; ++p) acc += std::conj(bra.amplitudes(p)) * s.amplitudes(p * rest + r);
        out.amplitudes(r) = acc;
    }
    return out;
}

TeleportOutcome finish_outcome(const PureState& target, LabelVector outcomes, PureState final_state,
                               BellLabel assumed_subspace) {
    TeleportOutcome out;
    out.outcomes = std::move(outcomes);
    out.probability = final_state.amplitudes.squaredNorm();
    out.applied_correction = inverse(subspace_correction(assumed_subspace, out.outcomes));
    if (out.probability <= kZeroBranch) {
        out.output_qubit = basis_state(2, 1, 0);
        out.fidelity = 0.0;
        out.fidelity_defined = false;
        return out;
    }
    out.output_qubit = final_state;
    out.output_qubit.amplitudes /= std::sqrt(out.probability);
    PureState corrected = out.output_qubit;
    corrected.amplitudes = correction_matrix(out.applied_correction) * corrected.amplitudes;
    out.fidelity = std::norm(inner(target, corrected));
    out.fidelity_defined = true;
    return out;
}

LabelVector decode_outcomes(std::int64_t code, int pairs) {
    LabelVector v(pairs);
    for (int i = pairs - 1; i >= 0; --i) {
        v[i] = bell_label_from_index(static_cast<int>(code % 4));
        code /= 4;
    }
    return v;
}

} // namespace

TeleportOutcome teleport_branch(const PureState& channel, const PureState& target,
                                const LabelVector& outcomes, BellLabel assumed_subspace) {
    check_channel(channel, target);
    const int pairs = channel.sites / 2;
    if (static_cast<int>(outcomes.size()) != pairs)
        throw ValidationError("teleport_branch: outcome count must equal L/2");

    PureState cur = tensor(target, channel);
    for (const BellLabel& l : outcomes) cur = contract_front_pair(cur, bell_state(l));
    return finish_outcome(target, outcomes, std::move(cur), assumed_subspace);
}

TeleportOutcome teleport_sample(const PureState& channel, const PureState& target,
                                BellLabel assumed_subspace, RngStream& rng) {
    check_channel(channel, target);
    const int pairs = channel.sites / 2;
    PureState cur = tensor(target, channel);
    LabelVector outcomes;
    outcomes.reserve(pairs);
    for (int k = 0; k < pairs; ++k) {
        std::array<PureState, 4> branch;
        std::array<double, 4> weight{};
        double total = 0;
        for (int p = 0; p < 4; ++p) {
            branch[p] = contract_front_pair(cur, bell_state(bell_label_from_index(p)));
            weight[p] = branch[p].amplitudes.squaredNorm();
            total += weight[p];
        }
        double u = rng.uniform() * total;
        int pick = 0;
        double acc = 0;
        for (int p = 0; p < 4; ++p) {
            acc += weight[p];
            if (u < acc || p == 3) { pick = p; break; }
        }
        outcomes.push_back(bell_label_from_index(pick));
        cur = std::move(branch[pick]);
    }
    return finish_outcome(target, std::move(outcomes), std::move(cur), assumed_subspace);
}

OParameter o_parameter(const PureState& channel) {
    if (channel.local_dim != 2 || channel.sites % 2 != 0)
        throw ValidationError("o_parameter: even qubit chains only");
    OParameter o;
    o.x = std::real(inner(channel, apply_x_string(channel)));
    o.y = std::real(inner(channel, apply_y_string(channel)));
    o.z = std::real(inner(channel, apply_z_string(channel)));
    o.value = std::abs(o.x) + std::abs(o.y) + std::abs(o.z);
    return o;
}

double fidelity_bound(const OParameter& o) { return (o.value - 1.0) / 2.0; }

ProjectResult<double> bell_measure_via_circuit(const PureState& state, std::array<int, 2> pair,
                                               BellLabel outcome) {
    if (state.local_dim != 2) throw ValidationError("bell_measure_via_circuit: qubit states only");
    // U = (H⊗I)·CNOT sends the four Bell states to computational pairs:
    // (-,-) → |11⟩, (-,+) → |10⟩, (+,-) → |01⟩, (+,+) → |00⟩.
    OperatorMatrix cnot = OperatorMatrix::Zero(4, 4);
    cnot(0, 0) = cnot(1, 1) = cnot(2, 3) = cnot(3, 2) = 1;
    OperatorMatrix had = (pauli_x() + pauli_z()) / std::sqrt(2.0);
    OperatorMatrix u = kron(had, identity_op(2)) * cnot;

    const int m = bell_index(outcome);
    const int b1 = 1 - (m >> 1), b2 = 1 - (m & 1);
    OperatorMatrix p1 = OperatorMatrix::Zero(2, 2), p2 = OperatorMatrix::Zero(2, 2);
    p1(b1, b1) = 1;
    p2(b2, b2) = 1;

    PureState cur = apply_local(state, {pair[0], pair[1]}, u);
    cur = apply_local(cur, {pair[0]}, p1);
    cur = apply_local(cur, {pair[1]}, p2);
    cur = apply_local(cur, {pair[0], pair[1]}, OperatorMatrix(u.adjoint()));
    ProjectResult<double> r{std::move(cur), 0.0};
    r.probability = r.branch.amplitudes.squaredNorm();
    return r;
}

FidelityProfile channel_fidelity_profile(const PureState& channel, const std::vector<PureState>& targets,
                                         BellLabel assumed_subspace) {
    if (channel.sites % 2 != 0) throw ValidationError("channel_fidelity_profile: even chains only");
    if (targets.empty()) throw ValidationError("channel_fidelity_profile: no targets");
    const int pairs = channel.sites / 2;
    const std::int64_t n_branches = pow_int(4, pairs);

    FidelityProfile prof;
    double sum_over_targets = 0;
    double min_over_targets = 2.0;
    for (const PureState& t : targets) {
        double avg = 0;
        for (std::int64_t code = 0; code < n_branches; ++code) {
            TeleportOutcome o = teleport_branch(channel, t, decode_outcomes(code, pairs), assumed_subspace);
            if (o.fidelity_defined) avg += o.probability * o.fidelity;
        }
        sum_over_targets += avg;
        min_over_targets = std::min(min_over_targets, avg);
    }
    prof.fidelity_min = min_over_targets;
    prof.fidelity_mean = sum_over_targets / static_cast<double>(targets.size());
    return prof;
}

std::vector<PureState> axis_targets() {
    const double r = 1.0 / std::sqrt(2.0);
    auto make = [](cplx a, cplx b) {
        PureState s{2, 1, CVec<double>(2)};
        s.amplitudes << a, b;
        return s;
    };
    return {make(r, r),         make(r, -r),         make(r, cplx(0, 1) * r),
            make(r, cplx(0, -1) * r), make(1, 0),    make(0, 1)};
}

std::vector<PureState> default_target_set(RngStream& rng) {
    std::vector<PureState> t = axis_targets();
    for (int i = 0; i < 20; ++i) t.push_back(random_haar_state(2, rng));
    return t;
}

PureState random_in_subspace_state(int L, BellLabel label, RngStream& rng) {
    if (L % 2 != 0) throw ValidationError("random_in_subspace_state: L must be even");
    const double k = label.x_sign, m = label.z_sign;
    for (int attempt = 0; attempt < 64; ++attempt) {
        PureState h = random_haar_state(pow_int(2, L), rng);
        PureState xs = apply_x_string(h), zs = apply_z_string(h), xz = apply_x_string(zs);
        PureState out{2, L,
                      (h.amplitudes + k * xs.amplitudes + m * zs.amplitudes + k * m * xz.amplitudes) / 4.0};
        double n = out.amplitudes.norm();
        if (n * n > kZeroBranch) {
            out.amplitudes /= n;
            return out;
        }
    }
    throw SolverError("random_in_subspace_state: repeated zero-norm projections", 0.0);
}

std::vector<SweepRecord> sweep_experiment(int n_channels, int L, std::uint64_t seed, SamplerKind sampler) {
    if (n_channels < 0) throw ValidationError("sweep_experiment: negative channel count");
    if (L % 2 != 0) throw ValidationError("sweep_experiment: L must be even");
    std::vector<SweepRecord> records;
    records.reserve(n_channels);
    for (int c = 0; c < n_channels; ++c) {
        RngStream stream(seed, static_cast<std::uint64_t>(c));
        PureState channel = random_haar_state(pow_int(2, L), stream);
        if (sampler == SamplerKind::biased) {
            // Draw order is part of the reproducibility contract:
            // ψ_haar, t, subspace label, then ψ_sub.
            double t = stream.uniform();
            BellLabel label = bell_label_from_index(static_cast<int>(stream.uniform_below(4)));
            PureState sub = random_in_subspace_state(L, label, stream);
            channel.amplitudes =
                std::sqrt(1.0 - t) * channel.amplitudes + std::sqrt(t) * sub.amplitudes;
            channel.amplitudes /= channel.amplitudes.norm();
        }
        std::vector<PureState> targets = default_target_set(stream);

        SweepRecord rec;
        rec.channel_id = c;
        rec.o = o_parameter(channel);
        rec.weights = classify(channel);
        FidelityProfile prof = channel_fidelity_profile(channel, targets, rec.weights.max_label());
        rec.fidelity_min = prof.fidelity_min;
        rec.fidelity_mean = prof.fidelity_mean;
        rec.bound = fidelity_bound(rec.o);
        records.push_back(std::move(rec));
    }
    return records;
}

} // namespace bellchain
