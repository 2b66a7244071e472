#pragma once

// Named state families, each parameterised by N so sweeps can iterate them.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "macroent/statevec.hpp"

namespace macroent {

enum class FamilyKind { product_random, plus_all, cat, w, bell_pair, dicke_k, ising_ground, haar_random };

std::string_view to_string(FamilyKind kind);
std::optional<FamilyKind> family_kind_from_string(std::string_view name);

struct StateFamily {
    FamilyKind kind = FamilyKind::cat;
    double J = 1.0;          // ising_ground coupling
    double h = 0.2;          // ising_ground transverse field
    int k = 1;               // dicke_k excitation number
    std::uint64_t seed = 0;  // random kinds
    Geometry geometry = Geometry::ring;

    std::string label() const;
};

// Deterministic in (kind, params, seed, N).
StateVector generate(const StateFamily &family, int n);

StateVector gen_cat(int n, Geometry geometry = Geometry::ring);
StateVector gen_w(int n, Geometry geometry = Geometry::ring);
// (|10...00> + |00...01>)/sqrt(2): a single Bell pair on sites 0 and N-1.
StateVector gen_bell_pair(int n, Geometry geometry = Geometry::ring);
StateVector gen_plus_all(int n, Geometry geometry = Geometry::ring);
StateVector gen_dicke(int n, int k, Geometry geometry = Geometry::ring);
// Site x carries a uniformly random Bloch-sphere pure state. Site x is drawn
// from its own stream derive_seed(seed, x), so the N-site state is the
// first N factors of the (N+1)-site state.
StateVector gen_product_random(int n, std::uint64_t seed, Geometry geometry = Geometry::ring);
StateVector gen_haar_random(int n, std::uint64_t seed, Geometry geometry = Geometry::ring);

// ---------------------------------------------------------------------------
// Transverse-field Ising ring  H = -J sum_x Z_x Z_{x+1} - h sum_x X_x

inline constexpr int kIsingMaxQubits = 16;

struct EigenSolverOptions {
    double residual_tolerance = 1e-10;
    int max_iterations = 10000; // total matrix-vector products
    int krylov_dim = 40;        // restart length
};

struct GroundState {
    StateVector state;
    double energy;
    double residual;
    int iterations;
};

// Matrix-free H|v> on the ring (periodic bonds; N = 2 has a single bond).
void ising_apply(int n, double J, double h, std::span<const double> in, std::span<double> out);
double ising_energy(const StateVector &state, double J, double h);

// Symmetric (parity-even) ground state by restarted Lanczos. The Krylov
// space is kept inside the even sector of prod_x X_x, so the returned state
// carries the Z2 symmetry even when the gap to the odd state is tiny.
// Throws NumericalError on non-convergence.
GroundState ising_ground_state(int n, double J, double h, const EigenSolverOptions &options = {});

StateVector gen_ising_ground(int n, double J, double h);

} // namespace macroent
