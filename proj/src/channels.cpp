#include "bellchain/channels.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <map>
#include <mutex>

namespace bellchain {

namespace {

using cplx = std::complex<double>;

constexpr std::int64_t kDimCap = 1 << 14;

OperatorMatrix embed_2x2_in_3(const OperatorMatrix& m) {
    OperatorMatrix out = OperatorMatrix::Zero(3, 3);
    out.block(0, 0, 2, 2) = m;
    return out;
}

std::array<OperatorMatrix, 3> embedded_half_ops() {
    auto h = spin_half_ops();
    return {embed_2x2_in_3(h[0]), embed_2x2_in_3(h[1]), embed_2x2_in_3(h[2])};
}

void check_chain_dim(int local_dim, int sites) {
    if (sites < 2) throw ValidationError("model needs at least 2 sites");
    if (pow_int(local_dim, sites) > kDimCap)
        throw DimensionError("model dimension above the 2^14 cap");
}

} // namespace

std::array<OperatorMatrix, 3> spin_half_ops() {
    return {0.5 * pauli_x(), 0.5 * pauli_y(), 0.5 * pauli_z()};
}

std::array<OperatorMatrix, 3> spin_one_ops() {
    const double r2 = std::sqrt(2.0);
    OperatorMatrix sp = OperatorMatrix::Zero(3, 3);
    sp(0, 1) = r2;
    sp(1, 2) = r2;
    OperatorMatrix sm = sp.adjoint();
    OperatorMatrix sx = 0.5 * (sp + sm);
    OperatorMatrix sy = cplx(0, -0.5) * (sp - sm);
    OperatorMatrix sz = OperatorMatrix::Zero(3, 3);
    sz(0, 0) = 1;
    sz(2, 2) = -1;
    return {sx, sy, sz};
}

OperatorMatrix exchange_bond(const std::array<OperatorMatrix, 3>& a, const std::array<OperatorMatrix, 3>& b) {
    return kron(a[0], b[0]) + kron(a[1], b[1]) + kron(a[2], b[2]);
}

HamiltonianTerms build_hamiltonian(const SpinChainModel& model) {
    const int N = model.sites;
    if (model.kind == ModelKind::heisenberg_nnn && model.beta < 0)
        throw ValidationError("heisenberg_nnn: beta must be >= 0");

    HamiltonianTerms H;
    switch (model.kind) {
        case ModelKind::heisenberg_nnn: {
            check_chain_dim(2, N);
            H.local_dim = 2;
            H.sites = N;
            auto s = spin_half_ops();
            OperatorMatrix ss = exchange_bond(s, s);
            const bool periodic = model.boundary == Boundary::periodic;
            if (model.boundary == Boundary::open_with_half_spin_ends)
                throw ValidationError("heisenberg_nnn: half-spin ends apply to the aklt model only");
            int nn_last = periodic ? N : N - 1;
            for (int i = 1; i <= nn_last; ++i) H.terms.push_back({{i, i % N + 1}, ss});
            if (model.beta != 0.0) {
                int nnn_last = periodic ? N : N - 2;
                for (int i = 1; i <= nnn_last; ++i) {
                    int j = (i + 1) % N + 1;
                    if (j == i) {
                        // a wrapped next-nearest bond landing on itself (N = 2)
                        // contributes the scalar S·S = s(s+1)
                        H.constant += model.beta * 0.75;
                    } else {
                        H.terms.push_back({{i, j}, model.beta * ss});
                    }
                }
            }
            break;
        }
        case ModelKind::ising_af: {
            check_chain_dim(2, N);
            H.local_dim = 2;
            H.sites = N;
            auto s = spin_half_ops();
            OperatorMatrix zz = kron(s[2], s[2]);
            const bool periodic = model.boundary == Boundary::periodic;
            if (model.boundary == Boundary::open_with_half_spin_ends)
                throw ValidationError("ising_af: half-spin ends apply to the aklt model only");
            int last = periodic ? N : N - 1;
            for (int i = 1; i <= last; ++i) H.terms.push_back({{i, i % N + 1}, zz});
            break;
        }
        case ModelKind::aklt: {
            auto one = spin_one_ops();
            OperatorMatrix ss = exchange_bond(one, one);
            OperatorMatrix bond = ss + model.alpha * (ss * ss);
            if (model.boundary == Boundary::open_with_half_spin_ends) {
                const int sites = N + 2;
                check_chain_dim(3, sites);
                H.local_dim = 3;
                H.sites = sites;
                auto half = embedded_half_ops();
                H.terms.push_back({{1, 2}, exchange_bond(half, one)});
                for (int i = 2; i <= N; ++i) H.terms.push_back({{i, i + 1}, bond});
                H.terms.push_back({{N + 1, N + 2}, exchange_bond(one, half)});
            } else {
                check_chain_dim(3, N);
                H.local_dim = 3;
                H.sites = N;
                const bool periodic = model.boundary == Boundary::periodic;
                int last = periodic ? N : N - 1;
                for (int i = 1; i <= last; ++i) H.terms.push_back({{i, i % N + 1}, bond});
            }
            break;
        }
    }
    return H;
}

PureState majumdar_ghosh_state(int N) {
    if (N % 2 != 0 || N < 2) throw ValidationError("majumdar_ghosh_state: N must be even and >= 2");
    PureState s = bell_state(BellLabel{-1, -1});
    for (int k = 1; k < N / 2; ++k) s = tensor(s, bell_state(BellLabel{-1, -1}));
    return s;
}

std::pair<PureState, PureState> neel_states(int N) {
    if (N % 2 != 0 || N < 2) throw ValidationError("neel_states: N must be even and >= 2");
    std::int64_t up_down = 0, down_up = 0;
    for (int i = 0; i < N; ++i) {
        up_down = up_down * 2 + (i % 2);
        down_up = down_up * 2 + (1 - i % 2);
    }
    return {basis_state(2, N, up_down), basis_state(2, N, down_up)};
}

PureState ising_superposition(int N) {
    auto [minus, plus] = neel_states(N);
    PureState s = minus;
    s.amplitudes = (plus.amplitudes - minus.amplitudes) / std::sqrt(2.0);
    return s;
}

VirtualEmbedding aklt_virtual_state(int N) {
    if (N < 1) throw ValidationError("aklt_virtual_state: N must be >= 1");
    if (2 * N + 2 > 14) throw DimensionError("aklt_virtual_state: 2N+2 qubits exceeds the 14-qubit cap");

    // Virtual qubit ordering 0̄,1,1̄,2,2̄,…,N,N̄,N+1 puts every singlet
    // (k̄, k+1) on adjacent slots, so |I⟩ is a product of adjacent singlets.
    PureState I = bell_state(BellLabel{-1, -1});
    for (int k = 1; k <= N; ++k) I = tensor(I, bell_state(BellLabel{-1, -1}));

    OperatorMatrix sym = OperatorMatrix::Zero(4, 4);
    CVec<double> t0(4), t1(4), t2(4);
    t0 << 1, 0, 0, 0;
    t1 << 0, 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), 0;
    t2 << 0, 0, 0, 1;
    sym += t0 * t0.adjoint() + t1 * t1.adjoint() + t2 * t2.adjoint();

    PureState v = I;
    for (int k = 1; k <= N; ++k) v = apply_local(v, {2 * k, 2 * k + 1}, sym);
    v = normalized(v);
    return VirtualEmbedding{N, std::move(v), std::move(sym)};
}

PureState spin1_reduction(const VirtualEmbedding& emb) {
    const int N = emb.physical_sites;
    const int qubits = 2 * N + 2;
    const int out_sites = N + 2;
    const PureState& v = emb.virtual_state;

    PureState out{3, out_sites, CVec<double>::Zero(pow_int(3, out_sites))};
    // Triplet isometry row = 3-level digit, column = 2-qubit pair index.
    const double r = 1.0 / std::sqrt(2.0);
    const double iso[3][4] = {{1, 0, 0, 0}, {0, r, r, 0}, {0, 0, 0, 1}};

    for (std::int64_t idx = 0; idx < v.dim(); ++idx) {
        cplx amp = v.amplitudes(idx);
        if (amp == cplx(0)) continue;
        auto digs = decode_index(idx, qubits, 2);
        std::vector<int> odigs(out_sites);
        odigs[0] = digs[0];
        odigs[out_sites - 1] = digs[qubits - 1];
        double factor = 1.0;
        for (int k = 1; k <= N; ++k) {
            int pair = digs[2 * k - 1] * 2 + digs[2 * k];
            int level = (pair == 0) ? 0 : (pair == 3 ? 2 : 1);
            factor *= iso[level][pair];
            odigs[k] = level;
        }
        out.amplitudes(encode_index(odigs, 3)) += factor * amp;
    }
    return out;
}

PureState random_spin_zero_state(int L, RngStream& rng) {
    if (L % 2 != 0 || L < 2) throw ValidationError("random_spin_zero_state: L must be even and >= 2");

    // The spin-0 kernel basis depends only on L; cache it.
    static std::map<int, OperatorMatrix> cache;
    static std::mutex mtx;
    OperatorMatrix kernel;
    {
        std::lock_guard<std::mutex> lock(mtx);
        auto it = cache.find(L);
        if (it == cache.end()) {
            OperatorMatrix s2 = total_spin_squared(L, 0.5);
            Eigen::SelfAdjointEigenSolver<OperatorMatrix> es(s2);
            Eigen::Index k = 0;
            while (k < es.eigenvalues().size() && es.eigenvalues()(k) < 1e-8) ++k;
            if (k == 0) throw ValidationError("random_spin_zero_state: empty spin-0 sector");
            it = cache.emplace(L, es.eigenvectors().leftCols(k)).first;
        }
        kernel = it->second;
    }

    for (int attempt = 0; attempt < 64; ++attempt) {
        PureState h = random_haar_state(pow_int(2, L), rng);
        CVec<double> coeff = kernel.adjoint() * h.amplitudes;
        double n2 = coeff.squaredNorm();
        if (n2 < 1e-12) continue;
        PureState out{2, L, kernel * coeff};
        out.amplitudes /= std::sqrt(n2);
        return out;
    }
    throw SolverError("random_spin_zero_state: repeated zero-norm projections", 0.0);
}

HamiltonianTerms total_spin_squared_terms(int L, double local_spin) {
    const bool half = std::abs(local_spin - 0.5) < 1e-12;
    if (!half && std::abs(local_spin - 1.0) > 1e-12)
        throw ValidationError("total_spin_squared: local_spin must be 0.5 or 1");
    const int d = half ? 2 : 3;
    if (pow_int(d, L) > kDimCap) throw DimensionError("total_spin_squared: dimension above the 2^14 cap");

    auto s = half ? spin_half_ops() : spin_one_ops();
    OperatorMatrix ss = exchange_bond(s, s);
    HamiltonianTerms H;
    H.local_dim = d;
    H.sites = L;
    H.constant = L * local_spin * (local_spin + 1.0);
    for (int i = 1; i <= L; ++i)
        for (int j = i + 1; j <= L; ++j) H.terms.push_back({{i, j}, 2.0 * ss});
    return H;
}

OperatorMatrix total_spin_squared(int L, double local_spin) {
    return total_spin_squared_terms(L, local_spin).to_dense();
}

} // namespace bellchain
