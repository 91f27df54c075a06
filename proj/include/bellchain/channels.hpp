#pragma once

#include <utility>

#include "bellchain/bell.hpp"
#include "bellchain/eigensolver.hpp"
#include "bellchain/qstate.hpp"

namespace bellchain {

enum class ModelKind { heisenberg_nnn, ising_af, aklt };
enum class Boundary { periodic, open, open_with_half_spin_ends };

struct SpinChainModel {
    ModelKind kind = ModelKind::heisenberg_nnn;
    int sites = 4;
    double beta = 0.0;        // heisenberg_nnn next-nearest coupling
    double alpha = 1.0 / 3.0; // aklt biquadratic coupling
    Boundary boundary = Boundary::periodic;
};

// Spin operators as a triple (Sx, Sy, Sz).
std::array<OperatorMatrix, 3> spin_half_ops();
std::array<OperatorMatrix, 3> spin_one_ops(); // basis ordered m = +1, 0, -1

// Heisenberg-exchange bond operator Ax⊗Bx + Ay⊗By + Az⊗Bz.
OperatorMatrix exchange_bond(const std::array<OperatorMatrix, 3>& a, const std::array<OperatorMatrix, 3>& b);

// heisenberg_nnn: Σ_i S_i·S_{i+1} + β S_i·S_{i+2} (literal i = 1…N sum when
// periodic, so short chains double-count wrapped bonds);
// ising_af:       Σ_i S^z_i S^z_{i+1};
// aklt:           Σ_i S_i·S_{i+1} + α (S_i·S_{i+1})² on spin-1 sites.
// aklt with half-spin ends uses sites of local dimension 3 with the boundary
// qubits embedded in levels {0,1}; the boundary bonds enter linearly (a
// quadratic term there reduces to linear + constant anyway).
HamiltonianTerms build_hamiltonian(const SpinChainModel& model);

// Product of nearest-neighbour singlets on pairs (1,2), (3,4), …
PureState majumdar_ghosh_state(int N);

// (Φ⁻, Φ⁺) = (|↑↓↑↓…⟩, |↓↑↓↑…⟩).
std::pair<PureState, PureState> neel_states(int N);

// (Φ⁺ − Φ⁻)/√2.
PureState ising_superposition(int N);

struct VirtualEmbedding {
    int physical_sites = 1;
    PureState virtual_state;             // 2N+2 qubits, ordering 0̄,1,1̄,2,2̄,…,N,N̄,N+1
    OperatorMatrix per_site_symmetrizer; // rank-3 projector onto the 2-qubit symmetric subspace
};

// Valence-bond construction: a product of singlets on (k̄, k+1), k = 0…N, with
// the two-qubit symmetric projector applied to each physical site's pair
// (k, k̄); boundary qubits 0̄ and N+1 stay unprojected.
VirtualEmbedding aklt_virtual_state(int N);

// Isometric reduction of the virtual state onto a chain of N+2 three-level
// sites: each symmetrized pair becomes a spin-1 site (triplet basis m = +1, 0,
// −1) and the boundary qubits occupy levels {0,1} of their sites.
PureState spin1_reduction(const VirtualEmbedding& emb);

// Haar draw projected onto the kernel of total spin squared, renormalized.
PureState random_spin_zero_state(int L, RngStream& rng);

// (Σ_i S_i)² as a dense matrix; local_spin is 0.5 or 1.
OperatorMatrix total_spin_squared(int L, double local_spin);
HamiltonianTerms total_spin_squared_terms(int L, double local_spin);

} // namespace bellchain
