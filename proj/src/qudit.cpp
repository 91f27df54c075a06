#include "bellchain/qudit.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include "bellchain/errors.hpp"

namespace bellchain {

namespace {

int mod(int a, int n) {
    int r = a % n;
    return r < 0 ? r + n : r;
}

std::complex<double> omega_pow(int N, int k) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(mod(k, N)) / N;
    return {std::cos(angle), std::sin(angle)};
}

void check_weyl_dim(int N) {
    if (N < 2) throw ValidationError("qudit dimension must be at least 2");
}

QuditLabel check_label(int N, QuditLabel label) {
    return {mod(label.A, N), mod(label.B, N)};
}

} // namespace

PureState nbell_state(int N, QuditLabel label) {
    check_weyl_dim(N);
    label = check_label(N, label);
    PureState out;
    out.local_dim = N;
    out.sites = 2;
    out.amplitudes = CVec<double>::Zero(static_cast<Eigen::Index>(N) * N);
    const double mag = 1.0 / std::sqrt(static_cast<double>(N));
    for (int i = 0; i < N; ++i) {
        const int j = mod(i + label.A, N);
        out.amplitudes[static_cast<Eigen::Index>(i) * N + j] = mag * omega_pow(N, label.B * i);
    }
    return out;
}

std::pair<OperatorMatrix, OperatorMatrix> weyl_matrices(int N) {
    check_weyl_dim(N);
    OperatorMatrix p = OperatorMatrix::Zero(N, N);
    OperatorMatrix q = OperatorMatrix::Zero(N, N);
    for (int j = 0; j < N; ++j) {
        p(mod(j - 1, N), j) = 1.0;
        q(j, j) = omega_pow(N, j);
    }
    return {p, q};
}

OperatorMatrix weyl_matrix(int N, const WeylCorrection& w) {
    check_weyl_dim(N);
    OperatorMatrix m = OperatorMatrix::Zero(N, N);
    for (int j = 0; j < N; ++j)
        m(mod(j - w.p_power, N), j) = omega_pow(N, w.phase_power + w.q_power * j);
    return m;
}

WeylCorrection compose_weyl(const WeylCorrection& a, const WeylCorrection& b, int N) {
    check_weyl_dim(N);
    WeylCorrection out;
    out.p_power = mod(a.p_power + b.p_power, N);
    out.q_power = mod(a.q_power + b.q_power, N);
    out.phase_power = mod(a.phase_power + b.phase_power - a.q_power * b.p_power, N);
    return out;
}

WeylCorrection inverse_weyl(const WeylCorrection& w, int N) {
    check_weyl_dim(N);
    WeylCorrection out;
    out.p_power = mod(N - w.p_power, N);
    out.q_power = mod(N - w.q_power, N);
    out.phase_power = mod(-w.phase_power - out.p_power * out.q_power, N);
    return out;
}

namespace {

// Output-qudit column map of measuring |outcome}⟨outcome| on the front pair of
// |t⟩ ⊗ |channel}: columns indexed by the input basis state t.
CMat<double> residual_map(int N, QuditLabel channel, QuditLabel outcome) {
    const PureState chan = nbell_state(N, channel);
    const PureState bra = nbell_state(N, outcome);
    CMat<double> m = CMat<double>::Zero(N, N);
    // |t⟩ ⊗ |channel} has amplitude chan[a·N + r] at basis index t·N² + a·N + r;
    // contracting the front pair (t, a) against ⟨outcome| leaves index r.
    for (int t = 0; t < N; ++t)
        for (int a = 0; a < N; ++a) {
            const std::complex<double> w = std::conj(bra.amplitudes[static_cast<Eigen::Index>(t) * N + a]);
            if (w == std::complex<double>(0.0, 0.0)) continue;
            for (int r = 0; r < N; ++r)
                m(r, t) += w * chan.amplitudes[static_cast<Eigen::Index>(a) * N + r];
        }
    return m;
}

} // namespace

WeylCorrection qudit_correction(int N, QuditLabel channel, QuditLabel outcome) {
    check_weyl_dim(N);
    channel = check_label(N, channel);
    outcome = check_label(N, outcome);

    using Key = std::tuple<int, int, int, int, int>;
    static std::map<Key, WeylCorrection> cache;
    static std::mutex cache_mutex;
    const Key key{N, channel.A, channel.B, outcome.A, outcome.B};
    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }

    const CMat<double> m = residual_map(N, channel, outcome);
    // The residual must equal (λ/N)·P^a Q^b for a single (a, b) with |λ| = 1
    // and λ an integer power of ω.
    int found = 0;
    WeylCorrection result;
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b) {
            const OperatorMatrix w = weyl_matrix(N, {a, b, 0});
            const std::complex<double> lambda = (w.adjoint() * m).trace() / static_cast<double>(N);
            if (std::abs(lambda) < 1e-10) continue;
            if ((m - lambda * w).cwiseAbs().maxCoeff() > 1e-10) continue;
            const std::complex<double> scaled = lambda * static_cast<double>(N);
            if (std::abs(std::abs(scaled) - 1.0) > 1e-8)
                throw IntegrityError("pair-measurement residual has non-unit Weyl magnitude");
            const double step = 2.0 * std::numbers::pi / N;
            const int c = mod(static_cast<int>(std::lround(std::arg(scaled) / step)), N);
            if (std::abs(scaled - omega_pow(N, c)) > 1e-8)
                throw IntegrityError("pair-measurement residual phase is not a power of omega");
            result = {a, b, c};
            ++found;
        }
    if (found != 1) throw IntegrityError("pair-measurement residual is not a single Weyl element");

    std::lock_guard<std::mutex> lock(cache_mutex);
    cache.emplace(key, result);
    return result;
}

namespace {

CVec<double> contract_front_qudit_pair(const CVec<double>& cur, const CVec<double>& bra, int N) {
    const Eigen::Index pair_dim = static_cast<Eigen::Index>(N) * N;
    const Eigen::Index rest = cur.size() / pair_dim;
    CVec<double> out = CVec<double>::Zero(rest);
    for (Eigen::Index p = 0; p < pair_dim; ++p) {
        const std::complex<double> w = std::conj(bra[p]);
        if (w == std::complex<double>(0.0, 0.0)) continue;
        out += w * cur.segment(p * rest, rest);
    }
    return out;
}

} // namespace

QuditTeleportOutcome qudit_teleport_branch(const PureState& channel, const PureState& target,
                                           const std::vector<QuditLabel>& outcomes,
                                           QuditLabel assumed_class) {
    const int N = channel.local_dim;
    check_weyl_dim(N);
    if (channel.sites < 2 || channel.sites % 2 != 0)
        throw ValidationError("channel must have an even number of qudit sites");
    if (target.local_dim != N || target.sites != 1)
        throw ValidationError("target must be a single site of the channel's local dimension");
    const int pairs = channel.sites / 2;
    if (static_cast<int>(outcomes.size()) != pairs)
        throw ValidationError("need one measurement outcome per channel pair");
    assumed_class = check_label(N, assumed_class);

    QuditTeleportOutcome rec;
    rec.outcomes.reserve(outcomes.size());
    for (const auto& l : outcomes) rec.outcomes.push_back(check_label(N, l));

    // Measuring pair k of the assumed class contributes the residual of a
    // representative channel; (assumed_class, identity, identity, ...) has the
    // right class and makes the composed index depend only on the label sums.
    std::vector<QuditLabel> rep(static_cast<std::size_t>(pairs), QuditLabel{0, 0});
    rep[0] = assumed_class;
    WeylCorrection residual = qudit_correction(N, rep[0], rec.outcomes[0]);
    for (int k = 1; k < pairs; ++k)
        residual = compose_weyl(qudit_correction(N, rep[static_cast<std::size_t>(k)],
                                                 rec.outcomes[static_cast<std::size_t>(k)]),
                                residual, N);
    rec.applied_correction = inverse_weyl(residual, N);

    CVec<double> cur = tensor(target, channel).amplitudes;
    for (int k = 0; k < pairs; ++k)
        cur = contract_front_qudit_pair(cur, nbell_state(N, rec.outcomes[static_cast<std::size_t>(k)]).amplitudes, N);

    rec.probability = cur.squaredNorm();
    rec.output_qudit.local_dim = N;
    rec.output_qudit.sites = 1;
    if (rec.probability <= 1e-12) {
        rec.fidelity_defined = false;
        rec.fidelity = 0.0;
        rec.output_qudit.amplitudes = CVec<double>::Zero(N);
        rec.output_qudit.amplitudes[0] = 1.0;
        return rec;
    }
    rec.output_qudit.amplitudes = cur / std::sqrt(rec.probability);

    const OperatorMatrix w = weyl_matrix(N, rec.applied_correction);
    const CVec<double> corrected = w * rec.output_qudit.amplitudes;
    rec.fidelity = std::norm(target.amplitudes.dot(corrected));
    return rec;
}

} // namespace bellchain
