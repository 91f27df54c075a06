#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "bellchain/bell.hpp"
#include "bellchain/errors.hpp"
#include "bellchain/qstate.hpp"
#include "bellchain/rng.hpp"

using namespace bellchain;
using cd = std::complex<double>;
using M2 = Eigen::Matrix2cd;
using V4 = Eigen::Vector4cd;

namespace {

// Raw reference data, written out independently of the library internals.
const double r2 = 1.0 / std::sqrt(2.0);

M2 ref_x_power(int i) {
    M2 m;
    switch (i) {
        case 0: m << 1, 0, 0, 1; break;
        case 1: m << 0, 1, 1, 0; break;
        case 2: m << -1, 0, 0, 1; break; // -sigma_z
        default: m << 0, 1, -1, 0; break; // i*sigma_y
    }
    return m;
}

V4 ref_bell(int i) {
    V4 v0;
    v0 << 0, r2, -r2, 0;
    V4 out = V4::Zero();
    const M2 x = ref_x_power(i);
    // (I ⊗ X) acts on the second slot of amplitudes a*2 + b.
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int bp = 0; bp < 2; ++bp) out[a * 2 + b] += x(b, bp) * v0[a * 2 + bp];
    return out;
}

// Residual operator on the output qubit when a pair prepared in Bell state j
// is measured with Bell outcome p, extracted by raw contraction of
// |t⟩ ⊗ v_j against ⟨v_p| on the front two qubits.
M2 residual_oracle(int p, int j) {
    const V4 vj = ref_bell(j), vp = ref_bell(p);
    M2 m = M2::Zero();
    for (int r = 0; r < 2; ++r)
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) m(r, a) += std::conj(vp[a * 2 + b]) * vj[b * 2 + r];
    return m;
}

} // namespace

TEST_CASE("residual oracle reproduces all sixteen signed table entries") {
    // Frozen expected table, rows = measurement outcome p, cols = channel j.
    const int expect_index[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
    const int expect_sign[4][4] = {{-1, -1, -1, -1}, {1, 1, -1, -1}, {1, 1, 1, 1}, {-1, -1, 1, 1}};
    for (int p = 0; p < 4; ++p)
        for (int j = 0; j < 4; ++j) {
            const M2 m = residual_oracle(p, j);
            // Each residual must be exactly sign/2 times one group element.
            int matches = 0;
            for (int i = 0; i < 4; ++i)
                for (int s : {1, -1}) {
                    if ((m - 0.5 * double(s) * ref_x_power(i)).cwiseAbs().maxCoeff() < 1e-14) {
                        ++matches;
                        CHECK(i == expect_index[p][j]);
                        CHECK(s == expect_sign[p][j]);
                    }
                }
            CHECK(matches == 1);
            const SignedCorrection c =
                correction(bell_label_from_index(j), bell_label_from_index(p));
            CHECK(c.index == expect_index[p][j]);
            CHECK(c.sign == expect_sign[p][j]);
        }
}

TEST_CASE("bell labels round-trip through index, string, and parser") {
    for (int i = 0; i < 4; ++i) CHECK(bell_index(bell_label_from_index(i)) == i);
    CHECK(to_string(BellLabel{-1, -1}) == "--");
    CHECK(to_string(BellLabel{1, -1}) == "+-");
    CHECK(parse_bell_label("-+").has_value());
    CHECK(bell_index(*parse_bell_label("-+")) == 1);
    CHECK(!parse_bell_label("+*").has_value());
    CHECK(!parse_bell_label("+").has_value());
}

TEST_CASE("bell states are the simultaneous string eigenstates") {
    const OperatorMatrix xx = kron(pauli_x(), pauli_x());
    const OperatorMatrix zz = kron(pauli_z(), pauli_z());
    for (int i = 0; i < 4; ++i) {
        const BellLabel l = bell_label_from_index(i);
        const PureState v = bell_state(l);
        CHECK(std::abs(norm(v) - 1.0) < 1e-14);
        CHECK((xx * v.amplitudes - double(l.x_sign) * v.amplitudes).norm() < 1e-14);
        CHECK((zz * v.amplitudes - double(l.z_sign) * v.amplitudes).norm() < 1e-14);
        CHECK((v.amplitudes - ref_bell(i)).norm() < 1e-14);
        for (int j = 0; j < i; ++j)
            CHECK(std::abs(inner(bell_state(bell_label_from_index(j)), v)) < 1e-14);
    }
    const PureState singlet = bell_state(BellLabel{-1, -1});
    CHECK(std::abs(singlet.amplitudes[1] - cd(r2, 0)) < 1e-15);
    CHECK(std::abs(singlet.amplitudes[2] - cd(-r2, 0)) < 1e-15);
}

TEST_CASE("compose and inverse agree with dense matrix algebra") {
    std::vector<SignedCorrection> all;
    for (int i = 0; i < 4; ++i)
        for (int s : {1, -1}) all.push_back({i, s});
    for (const auto& a : all) {
        const OperatorMatrix ia = correction_matrix(inverse(a)) * correction_matrix(a);
        CHECK((ia - identity_op(2)).cwiseAbs().maxCoeff() < 1e-14);
        for (const auto& b : all) {
            const SignedCorrection ab = compose({a, b});
            const OperatorMatrix dense = correction_matrix(a) * correction_matrix(b);
            CHECK((correction_matrix(ab) - dense).cwiseAbs().maxCoeff() < 1e-12);
            for (const auto& c : all) {
                const SignedCorrection abc = compose({a, b, c});
                const OperatorMatrix dense3 = dense * correction_matrix(c);
                CHECK((correction_matrix(abc) - dense3).cwiseAbs().maxCoeff() < 1e-12);
            }
        }
    }
    CHECK_THROWS_AS(compose({}), ValidationError);
}

TEST_CASE("string operators match explicit kron products and the fast appliers") {
    const OperatorMatrix sx2 = string_operator(2, 'x');
    CHECK((sx2 - kron(pauli_x(), pauli_x())).cwiseAbs().maxCoeff() < 1e-14);
    const OperatorMatrix sz2 = string_operator(2, 'z');
    CHECK((sz2 - kron(pauli_z(), pauli_z())).cwiseAbs().maxCoeff() < 1e-14);
    const OperatorMatrix sy4 = string_operator(4, 'y');
    CHECK((sy4 - kron(pauli_y(), kron(pauli_y(), kron(pauli_y(), pauli_y())))).cwiseAbs().maxCoeff() <
          1e-14);
    CHECK_THROWS_AS(string_operator(3, 'x'), ValidationError);
    CHECK_THROWS_AS(string_operator(2, 'w'), ValidationError);

    RngStream rng(21);
    const PureState psi = random_haar_state(16, rng);
    CHECK((apply_x_string(psi).amplitudes - string_operator(4, 'x') * psi.amplitudes).norm() < 1e-13);
    CHECK((apply_y_string(psi).amplitudes - string_operator(4, 'y') * psi.amplitudes).norm() < 1e-13);
    CHECK((apply_z_string(psi).amplitudes - string_operator(4, 'z') * psi.amplitudes).norm() < 1e-13);

    PureState odd = basis_state(2, 3, 0);
    CHECK_THROWS_AS(apply_x_string(odd), ValidationError);
    PureState qutrit = basis_state(3, 2, 0);
    CHECK_THROWS_AS(apply_z_string(qutrit), ValidationError);
}

TEST_CASE("classify reproduces hand-worked weights") {
    // Singlet: all weight on (-,-).
    const SubspaceWeights ws = classify(bell_state(BellLabel{-1, -1}));
    CHECK(std::abs(ws.at(BellLabel{-1, -1}) - 1.0) < 1e-14);
    CHECK(std::abs(ws.sum() - 1.0) < 1e-14);

    // Product of two singlets: signs multiply to (+,+).
    const PureState two = tensor(bell_state(BellLabel{-1, -1}), bell_state(BellLabel{-1, -1}));
    const SubspaceWeights w2 = classify(two);
    CHECK(std::abs(w2.at(BellLabel{1, 1}) - 1.0) < 1e-13);

    // |01>: equal mix of the singlet and the x-odd triplet.
    const SubspaceWeights wud = classify(basis_state(2, 2, 1));
    CHECK(std::abs(wud.at(BellLabel{-1, -1}) - 0.5) < 1e-14);
    CHECK(std::abs(wud.at(BellLabel{1, -1}) - 0.5) < 1e-14);

    CHECK_THROWS_AS(classify(basis_state(2, 3, 0)), ValidationError);
}

TEST_CASE("pairwise bell products classify onto the product of their labels") {
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const BellLabel a = bell_label_from_index(i), b = bell_label_from_index(j);
            const SubspaceWeights w = classify(tensor(bell_state(a), bell_state(b)));
            const BellLabel prod{a.x_sign * b.x_sign, a.z_sign * b.z_sign};
            CHECK(std::abs(w.at(prod) - 1.0) < 1e-13);
        }
}

TEST_CASE("subspace projectors are an orthogonal resolution of the identity") {
    for (int L : {2, 4}) {
        const OperatorMatrix sx = string_operator(L, 'x');
        const OperatorMatrix sz = string_operator(L, 'z');
        const Eigen::Index d = sx.rows();
        const OperatorMatrix id = identity_op(d);
        OperatorMatrix sum = OperatorMatrix::Zero(d, d);
        std::vector<OperatorMatrix> projs;
        for (int i = 0; i < 4; ++i) {
            const BellLabel l = bell_label_from_index(i);
            const OperatorMatrix p =
                (id + double(l.x_sign) * sx) * (id + double(l.z_sign) * sz) / 4.0;
            CHECK((p * p - p).cwiseAbs().maxCoeff() < 1e-12);
            CHECK(std::abs(p.trace().real() - double(d) / 4.0) < 1e-9);
            for (const auto& q : projs) CHECK((p * q).cwiseAbs().maxCoeff() < 1e-12);
            projs.push_back(p);
            sum += p;
        }
        CHECK((sum - id).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("classify puts projected states fully inside their subspace") {
    RngStream rng(31);
    for (int L : {4, 6}) {
        const OperatorMatrix sx = string_operator(L, 'x');
        const OperatorMatrix sz = string_operator(L, 'z');
        const Eigen::Index d = sx.rows();
        const OperatorMatrix id = identity_op(d);
        for (int i = 0; i < 4; ++i) {
            const BellLabel l = bell_label_from_index(i);
            const OperatorMatrix p =
                (id + double(l.x_sign) * sx) * (id + double(l.z_sign) * sz) / 4.0;
            PureState psi = random_haar_state(d, rng);
            psi.amplitudes = p * psi.amplitudes;
            psi = normalized(psi);
            const SubspaceWeights w = classify(psi);
            CHECK(std::abs(w.at(l) - 1.0) < 1e-12);
            CHECK(w.max_label() == l);
        }
    }
}

TEST_CASE("classify weights of random states are a probability distribution") {
    RngStream rng(32);
    for (int rep = 0; rep < 20; ++rep) {
        const SubspaceWeights w = classify(random_haar_state(16, rng));
        CHECK(std::abs(w.sum() - 1.0) < 1e-12);
        CHECK(w.max_weight() >= 0.25 - 1e-12);
        for (double x : w.w) CHECK(x >= -1e-15);
    }
}

TEST_CASE("single-pair subspace correction is the table lookup") {
    for (int s = 0; s < 4; ++s)
        for (int o = 0; o < 4; ++o) {
            const BellLabel ls = bell_label_from_index(s), lo = bell_label_from_index(o);
            const SignedCorrection via_subspace = subspace_correction(ls, {lo});
            const SignedCorrection via_table = correction(ls, lo);
            CHECK(via_subspace.index == via_table.index);
            CHECK(via_subspace.sign == via_table.sign);
        }
}

TEST_CASE("subspace correction class is independent of the label decomposition") {
    // Any decomposition of the subspace label into per-pair channel labels
    // must give the same correction index (signs are a global phase).
    for (int s = 0; s < 4; ++s) {
        const BellLabel total = bell_label_from_index(s);
        for (int o1 = 0; o1 < 4; ++o1)
            for (int o2 = 0; o2 < 4; ++o2) {
                const LabelVector outcomes{bell_label_from_index(o1), bell_label_from_index(o2)};
                const SignedCorrection ref = subspace_correction(total, outcomes);
                for (int c1 = 0; c1 < 4; ++c1) {
                    const BellLabel l1 = bell_label_from_index(c1);
                    const BellLabel l2{total.x_sign * l1.x_sign, total.z_sign * l1.z_sign};
                    // Pair 1 measured first, so its correction sits rightmost.
                    const SignedCorrection alt =
                        compose({correction(l2, outcomes[1]), correction(l1, outcomes[0])});
                    CHECK(alt.index == ref.index);
                }
            }
    }
}

TEST_CASE("cluster state amplitudes follow the adjacent-alignment sign rule") {
    const PureState c2 = cluster_state(2);
    const V4 expect2{-0.5, 0.5, 0.5, 0.5};
    CHECK((c2.amplitudes - expect2).norm() < 1e-14);

    const PureState c4 = cluster_state(4);
    CHECK(std::abs(norm(c4) - 1.0) < 1e-13);
    for (std::int64_t idx = 0; idx < c4.dim(); ++idx) {
        const auto digits = decode_index(idx, 4, 2);
        int aligned_up = 0;
        for (int k = 0; k + 1 < 4; ++k)
            if (digits[static_cast<std::size_t>(k)] == 0 && digits[static_cast<std::size_t>(k) + 1] == 0)
                ++aligned_up;
        const double expect = (aligned_up % 2 == 0 ? 0.25 : -0.25);
        CHECK(std::abs(c4.amplitudes[idx] - cd(expect, 0)) < 1e-14);
    }
    CHECK_THROWS_AS(cluster_state(1), ValidationError);
}

TEST_CASE("two-site cluster splits evenly over two subspaces") {
    const SubspaceWeights w = classify(cluster_state(2));
    CHECK(std::abs(w.at(BellLabel{-1, 1}) - 0.5) < 1e-13);
    CHECK(std::abs(w.at(BellLabel{1, -1}) - 0.5) < 1e-13);
    CHECK(std::abs(w.at(BellLabel{-1, -1})) < 1e-13);
    CHECK(std::abs(w.at(BellLabel{1, 1})) < 1e-13);
}

TEST_CASE("local unitaries move cluster states onto the (+,+) subspace") {
    for (int L : {2, 4, 6}) {
        const ClusterMapping mapping = cluster_to_bell_subspace(L);
        REQUIRE(static_cast<int>(mapping.unitaries.size()) == L);
        for (const auto& u : mapping.unitaries)
            CHECK((u.adjoint() * u - identity_op(2)).cwiseAbs().maxCoeff() < 1e-12);

        const SubspaceWeights w = classify(mapping.mapped);
        CHECK(std::abs(w.at(BellLabel{1, 1}) - 1.0) < 1e-12);

        // The mapped state really is the advertised unitaries applied site by site.
        PureState rebuilt = cluster_state(L);
        for (int s = 1; s <= L; ++s)
            rebuilt = apply_local(rebuilt, {s}, mapping.unitaries[static_cast<std::size_t>(s) - 1]);
        CHECK((rebuilt.amplitudes - mapping.mapped.amplitudes).norm() < 1e-12);
    }
    CHECK_THROWS_AS(cluster_to_bell_subspace(3), ValidationError);
}
