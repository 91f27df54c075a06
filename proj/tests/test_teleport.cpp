#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <vector>

#include "bellchain/bell.hpp"
#include "bellchain/channels.hpp"
#include "bellchain/errors.hpp"
#include "bellchain/qstate.hpp"
#include "bellchain/rng.hpp"
#include "bellchain/teleport.hpp"

using namespace bellchain;
using cd = std::complex<double>;

namespace {

const double r2 = 1.0 / std::sqrt(2.0);

// Raw reference Bell vectors, independent of the library constructors.
std::array<cd, 4> raw_bell(int i) {
    switch (i) {
        case 0: return {0, r2, -r2, 0};
        case 1: return {r2, 0, 0, -r2};
        case 2: return {0, r2, r2, 0}; // (I ⊗ -sigma_z) applied to the singlet
        default: return {r2, 0, 0, r2};
    }
}

LabelVector labels_from_code(int code, int pairs) {
    LabelVector v(static_cast<std::size_t>(pairs));
    for (int k = 0; k < pairs; ++k) {
        v[static_cast<std::size_t>(k)] = bell_label_from_index(code % 4);
        code /= 4;
    }
    return v;
}

PureState qubit(cd up, cd down) {
    PureState t = basis_state(2, 1, 0);
    t.amplitudes << up, down;
    t = normalized(t);
    return t;
}

} // namespace

TEST_CASE("single-pair branches match a raw hand contraction") {
    // Channel |up down>, target 0.6|up> + 0.8i|down>.
    const PureState channel = basis_state(2, 2, 1);
    const PureState target = qubit(cd(0.6, 0), cd(0, 0.8));
    for (int s = 0; s < 4; ++s) {
        const BellLabel assumed = bell_label_from_index(s);
        double total_p = 0.0;
        for (int p = 0; p < 4; ++p) {
            const auto vp = raw_bell(p);
            // combined[a, b, r] = t[a] * ch[b*2 + r]; contract (a, b) with vp.
            std::array<cd, 2> out{cd(0, 0), cd(0, 0)};
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    for (int r = 0; r < 2; ++r)
                        out[static_cast<std::size_t>(r)] += std::conj(vp[static_cast<std::size_t>(a * 2 + b)]) *
                                                            target.amplitudes[a] *
                                                            channel.amplitudes[b * 2 + r];
            const double prob = std::norm(out[0]) + std::norm(out[1]);

            const TeleportOutcome rec =
                teleport_branch(channel, target, {bell_label_from_index(p)}, assumed);
            CHECK(std::abs(rec.probability - prob) < 1e-13);
            total_p += rec.probability;
            REQUIRE(rec.fidelity_defined);
            // Output state matches the normalized contraction.
            const cd scale = out[0] != cd(0, 0) ? rec.output_qubit.amplitudes[0] / (out[0] / std::sqrt(prob))
                                                : rec.output_qubit.amplitudes[1] / (out[1] / std::sqrt(prob));
            CHECK(std::abs(std::abs(scale) - 1.0) < 1e-12);
            CHECK(std::abs(rec.output_qubit.amplitudes[0] - scale * out[0] / std::sqrt(prob)) < 1e-12);
            CHECK(std::abs(rec.output_qubit.amplitudes[1] - scale * out[1] / std::sqrt(prob)) < 1e-12);
            // Declared fidelity equals the definition, applied correction included.
            const SignedCorrection expect_corr =
                inverse(correction(assumed, bell_label_from_index(p)));
            CHECK(rec.applied_correction.index == expect_corr.index);
            CHECK(rec.applied_correction.sign == expect_corr.sign);
            const CVec<double> corrected =
                correction_matrix(rec.applied_correction) * rec.output_qubit.amplitudes;
            CHECK(std::abs(rec.fidelity - std::norm(target.amplitudes.dot(corrected))) < 1e-13);
        }
        CHECK(std::abs(total_p - 1.0) < 1e-13);
    }
}

TEST_CASE("bell channels teleport perfectly on every branch") {
    RngStream rng(51);
    for (int j = 0; j < 4; ++j) {
        const BellLabel lj = bell_label_from_index(j);
        const PureState channel = bell_state(lj);
        const PureState target = random_haar_state(2, rng);
        for (int p = 0; p < 4; ++p) {
            const TeleportOutcome rec =
                teleport_branch(channel, target, {bell_label_from_index(p)}, lj);
            CHECK(std::abs(rec.probability - 0.25) < 1e-13);
            CHECK(std::abs(rec.fidelity - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("assuming the wrong subspace breaks some branch") {
    const PureState channel = bell_state(BellLabel{-1, -1});
    const PureState target = qubit(cd(0.8, 0), cd(0.6, 0));
    double min_f = 1.0;
    for (int p = 0; p < 4; ++p) {
        const TeleportOutcome rec =
            teleport_branch(channel, target, {bell_label_from_index(p)}, BellLabel{1, 1});
        min_f = std::min(min_f, rec.fidelity);
    }
    CHECK(min_f < 0.9);
}

TEST_CASE("branch probabilities are complete for one to three pairs") {
    RngStream rng(52);
    for (int pairs : {1, 2, 3}) {
        const PureState channel = random_haar_state(pow_int(2, 2 * pairs), rng);
        const PureState target = random_haar_state(2, rng);
        double total = 0.0;
        for (int code = 0; code < pow_int(4, pairs); ++code)
            total += teleport_branch(channel, target, labels_from_code(code, pairs), BellLabel{1, 1})
                         .probability;
        CHECK(std::abs(total - 1.0) < 1e-9);
    }
}

TEST_CASE("sequential contraction equals one-shot projection onto the bell product") {
    RngStream rng(53);
    const int pairs = 2;
    const PureState channel = random_haar_state(16, rng);
    const PureState target = random_haar_state(2, rng);
    for (int code = 0; code < 16; ++code) {
        const LabelVector outcomes = labels_from_code(code, pairs);
        PureState bra = bell_state(outcomes[0]);
        for (int k = 1; k < pairs; ++k) bra = tensor(bra, bell_state(outcomes[static_cast<std::size_t>(k)]));
        const PureState combined = tensor(target, channel);
        CVec<double> out = CVec<double>::Zero(2);
        for (Eigen::Index big = 0; big < bra.dim(); ++big)
            for (Eigen::Index r = 0; r < 2; ++r)
                out[r] += std::conj(bra.amplitudes[big]) * combined.amplitudes[big * 2 + r];
        const TeleportOutcome rec = teleport_branch(channel, target, outcomes, BellLabel{1, 1});
        CHECK(std::abs(rec.probability - out.squaredNorm()) < 1e-12);
        if (rec.fidelity_defined) {
            out /= out.norm();
            CHECK(std::abs(std::abs(rec.output_qubit.amplitudes.dot(out)) - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("two singlet pairs teleport perfectly on all sixteen branches") {
    const PureState channel =
        tensor(bell_state(BellLabel{-1, -1}), bell_state(BellLabel{-1, -1}));
    const PureState target = qubit(cd(0.3, 0.4), cd(-0.5, 0.7));
    for (int code = 0; code < 16; ++code) {
        const TeleportOutcome rec =
            teleport_branch(channel, target, labels_from_code(code, 2), BellLabel{1, 1});
        CHECK(std::abs(rec.probability - 1.0 / 16.0) < 1e-13);
        CHECK(std::abs(rec.fidelity - 1.0) < 1e-12);
    }
}

TEST_CASE("random single-subspace channels teleport perfectly on every branch") {
    RngStream rng(54);
    for (int i = 0; i < 4; ++i) {
        const BellLabel label = bell_label_from_index(i);
        const PureState channel = random_in_subspace_state(4, label, rng);
        CHECK(std::abs(classify(channel).at(label) - 1.0) < 1e-12);
        const PureState target = random_haar_state(2, rng);
        for (int code = 0; code < 16; ++code) {
            const TeleportOutcome rec =
                teleport_branch(channel, target, labels_from_code(code, 2), label);
            if (!rec.fidelity_defined) continue;
            CHECK(std::abs(rec.fidelity - 1.0) < 1e-9);
        }
    }
}

TEST_CASE("zero-probability branches are flagged instead of faked") {
    const PureState channel = basis_state(2, 2, 0); // |up up>
    const PureState target = qubit(cd(1, 0), cd(0, 0));
    // Outcome (-,-): the singlet has no overlap with |up>|up> support.
    const TeleportOutcome rec =
        teleport_branch(channel, target, {BellLabel{-1, -1}}, BellLabel{1, 1});
    CHECK(rec.probability <= 1e-12);
    CHECK(!rec.fidelity_defined);
    CHECK(std::abs(norm(rec.output_qubit) - 1.0) < 1e-14);
    // The correction is still reported for the branch.
    const SignedCorrection expect = inverse(correction(BellLabel{1, 1}, BellLabel{-1, -1}));
    CHECK(rec.applied_correction.index == expect.index);
}

TEST_CASE("teleport input validation") {
    const PureState channel = basis_state(2, 2, 0);
    const PureState target = basis_state(2, 1, 0);
    CHECK_THROWS_AS(teleport_branch(basis_state(2, 3, 0), target, {BellLabel{1, 1}}, BellLabel{1, 1}),
                    ValidationError);
    CHECK_THROWS_AS(teleport_branch(basis_state(3, 2, 0), target, {BellLabel{1, 1}}, BellLabel{1, 1}),
                    ValidationError);
    CHECK_THROWS_AS(teleport_branch(channel, basis_state(2, 2, 0), {BellLabel{1, 1}}, BellLabel{1, 1}),
                    ValidationError);
    CHECK_THROWS_AS(
        teleport_branch(channel, target, {BellLabel{1, 1}, BellLabel{1, 1}}, BellLabel{1, 1}),
        ValidationError);
}

TEST_CASE("sampling is deterministic per seed and consistent with branch probabilities") {
    const PureState channel = majumdar_ghosh_state(4);
    const PureState target = qubit(cd(0.6, 0), cd(0.8, 0));
    RngStream a(7), b(7);
    for (int i = 0; i < 10; ++i) {
        const TeleportOutcome ra = teleport_sample(channel, target, BellLabel{1, 1}, a);
        const TeleportOutcome rb = teleport_sample(channel, target, BellLabel{1, 1}, b);
        REQUIRE(ra.outcomes.size() == rb.outcomes.size());
        for (std::size_t k = 0; k < ra.outcomes.size(); ++k) CHECK(ra.outcomes[k] == rb.outcomes[k]);
        CHECK(std::abs(ra.probability - rb.probability) < 1e-15);
        CHECK(std::abs(ra.fidelity - 1.0) < 1e-12);

        const TeleportOutcome direct = teleport_branch(channel, target, ra.outcomes, BellLabel{1, 1});
        CHECK(std::abs(direct.probability - ra.probability) < 1e-12);
        CHECK(std::abs(direct.fidelity - ra.fidelity) < 1e-12);
    }
}

TEST_CASE("sampled outcome frequencies follow the born rule") {
    const PureState channel = bell_state(BellLabel{-1, -1});
    const PureState target = qubit(cd(r2, 0), cd(r2, 0));
    RngStream rng(77);
    std::map<int, int> counts;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
        const TeleportOutcome rec = teleport_sample(channel, target, BellLabel{-1, -1}, rng);
        counts[bell_index(rec.outcomes[0])]++;
    }
    for (int p = 0; p < 4; ++p)
        CHECK(std::abs(counts[p] / double(n) - 0.25) < 0.02);
}

TEST_CASE("o parameter components on hand-worked states") {
    const OParameter o_singlet = o_parameter(bell_state(BellLabel{-1, -1}));
    CHECK(std::abs(o_singlet.x + 1.0) < 1e-13);
    CHECK(std::abs(o_singlet.y + 1.0) < 1e-13);
    CHECK(std::abs(o_singlet.z + 1.0) < 1e-13);
    CHECK(std::abs(o_singlet.value - 3.0) < 1e-13);
    CHECK(std::abs(fidelity_bound(o_singlet) - 1.0) < 1e-13);

    const OParameter o_mg = o_parameter(majumdar_ghosh_state(4));
    CHECK(std::abs(o_mg.x - 1.0) < 1e-13);
    CHECK(std::abs(o_mg.y - 1.0) < 1e-13);
    CHECK(std::abs(o_mg.z - 1.0) < 1e-13);
    CHECK(std::abs(o_mg.value - 3.0) < 1e-13);

    const OParameter o_ud = o_parameter(basis_state(2, 2, 1));
    CHECK(std::abs(o_ud.x) < 1e-13);
    CHECK(std::abs(o_ud.y) < 1e-13);
    CHECK(std::abs(o_ud.z + 1.0) < 1e-13);
    CHECK(std::abs(o_ud.value - 1.0) < 1e-13);
    CHECK(std::abs(fidelity_bound(o_ud)) < 1e-13);

    CHECK_THROWS_AS(o_parameter(basis_state(2, 3, 0)), ValidationError);
}

TEST_CASE("circuit bell measurement reproduces direct projection") {
    RngStream rng(61);
    for (int rep = 0; rep < 100; ++rep) {
        const PureState psi = random_haar_state(8, rng);
        const std::array<int, 2> pair = rep % 2 == 0 ? std::array<int, 2>{1, 2} : std::array<int, 2>{2, 3};
        for (int p = 0; p < 4; ++p) {
            const BellLabel label = bell_label_from_index(p);
            const PureState v = bell_state(label);
            const OperatorMatrix proj = v.amplitudes * v.amplitudes.adjoint();
            const auto direct = project(psi, {pair[0], pair[1]}, proj);
            const auto circuit = bell_measure_via_circuit(psi, pair, label);
            CHECK(std::abs(direct.probability - circuit.probability) < 1e-12);
            CHECK((direct.branch.amplitudes - circuit.branch.amplitudes).norm() < 1e-12);
        }
    }
}

TEST_CASE("fidelity profile is unity for perfect channels") {
    RngStream rng(62);
    const auto targets = default_target_set(rng);
    CHECK(targets.size() == 26);

    const FidelityProfile mg = channel_fidelity_profile(majumdar_ghosh_state(4), targets, BellLabel{1, 1});
    CHECK(std::abs(mg.fidelity_min - 1.0) < 1e-12);
    CHECK(std::abs(mg.fidelity_mean - 1.0) < 1e-12);

    const PureState super = ising_superposition(4);
    const BellLabel label = classify(super).max_label();
    const FidelityProfile fs = channel_fidelity_profile(super, targets, label);
    CHECK(std::abs(fs.fidelity_min - 1.0) < 1e-12);
    CHECK(std::abs(fs.fidelity_mean - 1.0) < 1e-12);
}

TEST_CASE("average fidelity respects the string-expectation lower bound") {
    RngStream rng(63);
    const auto targets = axis_targets();
    for (int rep = 0; rep < 50; ++rep) {
        const PureState channel = random_haar_state(16, rng);
        const BellLabel assumed = classify(channel).max_label();
        const FidelityProfile prof = channel_fidelity_profile(channel, targets, assumed);
        const double bound = fidelity_bound(o_parameter(channel));
        CHECK(prof.fidelity_min >= bound - 1e-9);
        CHECK(prof.fidelity_mean >= prof.fidelity_min - 1e-12);
        CHECK(prof.fidelity_min >= 0.0);
        CHECK(prof.fidelity_mean <= 1.0 + 1e-12);
    }
}

TEST_CASE("o parameter dominates concentrated weights") {
    RngStream rng(64);
    for (int rep = 0; rep < 1000; ++rep) {
        const PureState psi = random_haar_state(16, rng);
        const double maxw = classify(psi).max_weight();
        const double o = o_parameter(psi).value;
        CHECK(o >= 4.0 * maxw - 1.0 - 1e-9);
    }
}

TEST_CASE("sweep experiment is reproducible and respects its own bound column") {
    CHECK(sweep_experiment(0, 4, 1, SamplerKind::biased).empty());

    const auto a = sweep_experiment(50, 4, 123, SamplerKind::biased);
    const auto b = sweep_experiment(50, 4, 123, SamplerKind::biased);
    REQUIRE(a.size() == 50);
    REQUIRE(b.size() == 50);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].channel_id == static_cast<std::int64_t>(i));
        CHECK(a[i].o.value == b[i].o.value);
        CHECK(a[i].fidelity_min == b[i].fidelity_min);
        CHECK(a[i].fidelity_mean == b[i].fidelity_mean);
        CHECK(a[i].weights.w == b[i].weights.w);
        CHECK(a[i].fidelity_min >= a[i].bound - 1e-9);
        CHECK(a[i].fidelity_mean >= a[i].fidelity_min - 1e-12);
        CHECK(std::abs(a[i].bound - (a[i].o.value - 1.0) / 2.0) < 1e-12);
        CHECK(std::abs(a[i].weights.w[0] + a[i].weights.w[1] + a[i].weights.w[2] + a[i].weights.w[3] -
                        1.0) < 1e-9);
    }

    const auto haar = sweep_experiment(10, 4, 5, SamplerKind::haar);
    REQUIRE(haar.size() == 10);
    for (const auto& r : haar) CHECK(r.fidelity_min >= r.bound - 1e-9);

    CHECK_THROWS_AS(sweep_experiment(1, 3, 0, SamplerKind::haar), ValidationError);
}
