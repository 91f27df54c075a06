#include "bellchain/bell.hpp"

#include <bit>
#include <cmath>

namespace bellchain {

namespace {

using cplx = std::complex<double>;

constexpr double kSqrt1_2 = 0.7071067811865475244;

// Lookup table of residual operators, row = outcome index, column = channel
// index, each entry (X index, sign).
constexpr int kCorrIndex[4][4] = {
    {0, 1, 2, 3},
    {1, 0, 3, 2},
    {2, 3, 0, 1},
    {3, 2, 1, 0},
};
constexpr int kCorrSign[4][4] = {
    {-1, -1, -1, -1},
    {+1, +1, -1, -1},
    {+1, +1, +1, +1},
    {-1, -1, +1, +1},
};

int check_even_qubits(const PureState& s, const char* who) {
    if (s.local_dim != 2) throw ValidationError(std::string(who) + ": qubit chains only");
    if (s.sites % 2 != 0) throw ValidationError(std::string(who) + ": chain length must be even");
    return s.sites;
}

cplx ipow(int k) {
    switch (((k % 4) + 4) % 4) {
        case 0: return {1, 0};
        case 1: return {0, 1};
        case 2: return {-1, 0};
        default: return {0, -1};
    }
}

int corner_with_weight_one(const SubspaceWeights& w, double tol) {
    for (int i = 0; i < 4; ++i)
        if (w.w[i] >= 1.0 - tol) return i;
    return -1;
}

std::vector<OperatorMatrix> pauli_by_axis() { return {pauli_x(), pauli_y(), pauli_z()}; }

// ⟨psi| ⊗_i σ_{axes[i]} |psi⟩ in one pass; axes entries 0=x, 1=y, 2=z.
cplx pauli_string_expectation(const PureState& psi, const std::vector<int>& axes) {
    const int L = psi.sites;
    std::int64_t flip = 0;
    for (int i = 0; i < L; ++i)
        if (axes[i] != 2) flip |= std::int64_t(1) << (L - 1 - i);
    cplx acc = 0;
    const std::int64_t n = psi.dim();
    for (std::int64_t i = 0; i < n; ++i) {
        cplx coef = 1;
        for (int s = 0; s < L; ++s) {
            int bit = (i >> (L - 1 - s)) & 1;
            if (axes[s] == 1) coef *= cplx(0, 1) * double(1 - 2 * bit);
            else if (axes[s] == 2) coef *= double(1 - 2 * bit);
        }
        acc += std::conj(psi.amplitudes(i ^ flip)) * coef * psi.amplitudes(i);
    }
    return acc;
}

PureState apply_site_unitaries(const PureState& psi, const std::vector<OperatorMatrix>& us) {
    PureState out = psi;
    for (int i = 0; i < psi.sites; ++i) out = apply_local(out, {i + 1}, us[i]);
    return out;
}

// Moves a state concentrated on some subspace corner onto (+,+) by σz/σx
// flips on site 1; updates the site-1 unitary accordingly.
void fix_signs_to_pp(std::vector<OperatorMatrix>& us, PureState& phi, BellLabel corner) {
    if (corner.x_sign < 0) {
        us[0] = pauli_z() * us[0];
        phi = apply_local(phi, {1}, pauli_z());
    }
    if (corner.z_sign < 0) {
        us[0] = pauli_x() * us[0];
        phi = apply_local(phi, {1}, pauli_x());
    }
}

} // namespace

std::string to_string(BellLabel l) {
    return std::string(1, l.x_sign > 0 ? '+' : '-') + (l.z_sign > 0 ? '+' : '-');
}

std::optional<BellLabel> parse_bell_label(const std::string& s) {
    if (s.size() != 2) return std::nullopt;
    auto sign = [](char c) { return c == '+' ? 1 : (c == '-' ? -1 : 0); };
    int x = sign(s[0]), z = sign(s[1]);
    if (!x || !z) return std::nullopt;
    return BellLabel{x, z};
}

std::string to_string(SignedCorrection c) {
    return std::string(1, c.sign > 0 ? '+' : '-') + "X" + std::to_string(c.index);
}

OperatorMatrix x_matrix(int index) {
    switch (index) {
        case 0: return identity_op(2);
        case 1: return pauli_x();
        case 2: return -pauli_z();
        case 3: return cplx(0, 1) * pauli_y();
        default: throw ValidationError("x_matrix: index must be 0..3");
    }
}

SignedCorrection compose(const std::vector<SignedCorrection>& corrections) {
    if (corrections.empty()) throw ValidationError("compose: empty correction list");
    OperatorMatrix prod = identity_op(2);
    for (const auto& c : corrections) prod = prod * correction_matrix(c);
    for (int idx = 0; idx < 4; ++idx) {
        for (int sign : {1, -1}) {
            if ((prod - double(sign) * x_matrix(idx)).cwiseAbs().maxCoeff() < 1e-9)
                return SignedCorrection{idx, sign};
        }
    }
    throw IntegrityError("compose: product left the signed correction group");
}

SignedCorrection inverse(SignedCorrection c) {
    // X⁰, X¹, X² square to +I; X³ squares to −I.
    return SignedCorrection{c.index, c.index == 3 ? -c.sign : c.sign};
}

double SubspaceWeights::max_weight() const { return *std::max_element(w.begin(), w.end()); }

BellLabel SubspaceWeights::max_label() const {
    int best = 0;
    for (int i = 1; i < 4; ++i)
        if (w[i] > w[best]) best = i;
    return bell_label_from_index(best);
}

PureState bell_state(BellLabel label) {
    PureState v0{2, 2, CVec<double>(4)};
    v0.amplitudes << 0, kSqrt1_2, -kSqrt1_2, 0;
    int i = bell_index(label);
    if (i == 0) return v0;
    return apply_local(v0, {2}, x_matrix(i));
}

SignedCorrection correction(BellLabel channel, BellLabel outcome) {
    int j = bell_index(channel), p = bell_index(outcome);
    return SignedCorrection{kCorrIndex[p][j], kCorrSign[p][j]};
}

OperatorMatrix string_operator(int L, char axis) {
    if (L % 2 != 0) throw ValidationError("string_operator: L must be even");
    if (L > 10) throw DimensionError("string_operator: dense form capped at L = 10");
    OperatorMatrix p;
    switch (axis) {
        case 'x': p = pauli_x(); break;
        case 'y': p = pauli_y(); break;
        case 'z': p = pauli_z(); break;
        default: throw ValidationError("string_operator: axis must be x, y or z");
    }
    OperatorMatrix out = identity_op(1);
    for (int i = 0; i < L; ++i) out = kron(out, p);
    return out;
}

PureState apply_x_string(const PureState& s) {
    check_even_qubits(s, "apply_x_string");
    const std::int64_t n = s.dim(), mask = n - 1;
    PureState out{2, s.sites, CVec<double>(n)};
    for (std::int64_t i = 0; i < n; ++i) out.amplitudes(i) = s.amplitudes(i ^ mask);
    return out;
}

PureState apply_z_string(const PureState& s) {
    check_even_qubits(s, "apply_z_string");
    const std::int64_t n = s.dim();
    PureState out{2, s.sites, CVec<double>(n)};
    for (std::int64_t i = 0; i < n; ++i)
        out.amplitudes(i) = (std::popcount(static_cast<std::uint64_t>(i)) & 1) ? -s.amplitudes(i)
                                                                               : s.amplitudes(i);
    return out;
}

PureState apply_y_string(const PureState& s) {
    check_even_qubits(s, "apply_y_string");
    const std::int64_t n = s.dim(), mask = n - 1;
    const cplx global = ipow(s.sites);
    PureState out{2, s.sites, CVec<double>(n)};
    for (std::int64_t i = 0; i < n; ++i) {
        cplx f = global * double(1 - 2 * (std::popcount(static_cast<std::uint64_t>(i)) & 1));
        out.amplitudes(i ^ mask) = f * s.amplitudes(i);
    }
    return out;
}

SubspaceWeights classify(const PureState& state) {
    check_even_qubits(state, "classify");
    PureState xs = apply_x_string(state);
    PureState zs = apply_z_string(state);
    PureState xz = apply_x_string(zs);
    SubspaceWeights out;
    for (int i = 0; i < 4; ++i) {
        BellLabel l = bell_label_from_index(i);
        double k = l.x_sign, m = l.z_sign;
        CVec<double> proj =
            (state.amplitudes + k * xs.amplitudes + m * zs.amplitudes + k * m * xz.amplitudes) / 4.0;
        out.w[i] = proj.squaredNorm();
    }
    return out;
}

SignedCorrection subspace_correction(BellLabel subspace, const LabelVector& outcomes) {
    if (outcomes.empty()) throw ValidationError("subspace_correction: empty outcome vector");
    // Representative pair labeling with label products equal to `subspace`:
    // the first pair carries the subspace label, the rest are (+,+).
    LabelVector rep(outcomes.size(), BellLabel{1, 1});
    rep[0] = subspace;
    std::vector<SignedCorrection> per_pair(outcomes.size());
    for (std::size_t i = 0; i < outcomes.size(); ++i) per_pair[i] = correction(rep[i], outcomes[i]);
    // Pair 1 is measured first, so its correction sits rightmost in the product.
    std::vector<SignedCorrection> ordered(per_pair.rbegin(), per_pair.rend());
    return compose(ordered);
}

PureState cluster_state(int L) {
    if (L < 2) throw ValidationError("cluster_state: L must be >= 2");
    const std::int64_t n = pow_int(2, L);
    PureState s{2, L, CVec<double>(n)};
    const double mag = std::pow(2.0, -0.5 * L);
    for (std::int64_t i = 0; i < n; ++i) {
        int adjacent_up = 0;
        for (int b = 0; b + 1 < L; ++b) {
            int hi = (i >> (L - 1 - b)) & 1, lo = (i >> (L - 2 - b)) & 1;
            if (hi == 0 && lo == 0) ++adjacent_up;
        }
        s.amplitudes(i) = (adjacent_up & 1) ? -mag : mag;
    }
    return s;
}

ClusterMapping cluster_to_bell_subspace(int L) {
    if (L % 2 != 0) throw ValidationError("cluster_to_bell_subspace: L must be even");
    if (L > 10) throw DimensionError("cluster_to_bell_subspace: search capped at L = 10");
    const PureState psi = cluster_state(L);
    OperatorMatrix had = (pauli_x() + pauli_z()) * kSqrt1_2;

    // Alternating identity/Hadamard patterns (both phases).
    for (int start = 0; start < 2; ++start) {
        std::vector<OperatorMatrix> us;
        for (int i = 0; i < L; ++i) us.push_back((i % 2 == start) ? had : identity_op(2));
        PureState phi = apply_site_unitaries(psi, us);
        int corner = corner_with_weight_one(classify(phi), 1e-12);
        if (corner >= 0) {
            fix_signs_to_pp(us, phi, bell_label_from_index(corner));
            return ClusterMapping{std::move(us), std::move(phi)};
        }
    }

    // Constructive fallback: find two full-support Pauli strings stabilizing
    // the state that differ at every site; rotate them onto the x- and
    // z-strings site by site.
    const std::int64_t n_strings = pow_int(3, L);
    std::vector<std::vector<int>> stabilizers;
    std::vector<int> axes(L);
    for (std::int64_t code = 0; code < n_strings; ++code) {
        std::int64_t t = code;
        for (int i = L - 1; i >= 0; --i) {
            axes[i] = static_cast<int>(t % 3);
            t /= 3;
        }
        cplx e = pauli_string_expectation(psi, axes);
        if (std::abs(std::abs(e) - 1.0) < 1e-9) stabilizers.push_back(axes);
    }
    for (std::size_t a = 0; a < stabilizers.size(); ++a) {
        for (std::size_t b = 0; b < stabilizers.size(); ++b) {
            if (a == b) continue;
            bool disjoint = true;
            for (int i = 0; i < L; ++i)
                if (stabilizers[a][i] == stabilizers[b][i]) { disjoint = false; break; }
            if (!disjoint) continue;

            auto paulis = pauli_by_axis();
            std::vector<OperatorMatrix> us;
            for (int i = 0; i < L; ++i) {
                const OperatorMatrix& sa = paulis[stabilizers[a][i]];
                const OperatorMatrix& sb = paulis[stabilizers[b][i]];
                Eigen::SelfAdjointEigenSolver<OperatorMatrix> es(sa);
                // eigenvalues ascending: column 0 ↔ −1, column 1 ↔ +1
                CVec<double> pminus = es.eigenvectors().col(0), pplus = es.eigenvectors().col(1);
                cplx mu = pminus.dot(sb * pplus);
                CVec<double> xplus(2), xminus(2);
                xplus << kSqrt1_2, kSqrt1_2;
                xminus << kSqrt1_2, -kSqrt1_2;
                OperatorMatrix u = xplus * pplus.adjoint() +
                                   (std::conj(mu) / std::abs(mu)) * (xminus * pminus.adjoint());
                us.push_back(u);
            }
            PureState phi = apply_site_unitaries(psi, us);
            int corner = corner_with_weight_one(classify(phi), 1e-12);
            if (corner < 0)
                throw IntegrityError("cluster_to_bell_subspace: rotated state failed to concentrate");
            fix_signs_to_pp(us, phi, bell_label_from_index(corner));
            if (corner_with_weight_one(classify(phi), 1e-12) != 3)
                throw IntegrityError("cluster_to_bell_subspace: sign fix failed");
            return ClusterMapping{std::move(us), std::move(phi)};
        }
    }
    throw IntegrityError("cluster_to_bell_subspace: mapping unsatisfied, no suitable stabilizer pair");
}

} // namespace bellchain
