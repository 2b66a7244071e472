#pragma once

// Period-finding stages of Shor's algorithm at small sizes.
//
// Register layout: the first register (n1 = 2L qubits, value a) sits on sites
// [0, n1) with a's least significant bit on site 0; the second register (L
// qubits, value w) sits on sites [n1, n1 + L). Basis index = a + (w << n1).

#include <cstdint>
#include <string_view>

#include "macroent/correlator.hpp"
#include "macroent/noise.hpp"
#include "macroent/scaling.hpp"
#include "macroent/statevec.hpp"

namespace macroent {

struct ShorInstance {
    std::uint64_t modulus = 15; // M
    std::uint64_t base = 7;     // x, coprime to M
    int l_bits = 4;             // L, bits of M
    int n1 = 8;                 // first register width, 2L
    std::uint64_t order = 4;    // r, smallest r > 0 with x^r = 1 mod M

    int total_qubits() const { return n1 + l_bits; }
};

// Validates M (odd, composite, not a prime power) and x (1 < x < M,
// gcd(x, M) = 1); computes L, n1 and the order classically.
ShorInstance make_shor_instance(std::uint64_t modulus, std::uint64_t base);

std::uint64_t multiplicative_order(std::uint64_t base, std::uint64_t modulus);
std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exponent, std::uint64_t modulus);

enum class ShorStage { HT, ME, FINAL };
std::string_view to_string(ShorStage stage);

struct StageState {
    ShorStage stage;
    StateVector state;
};

// HT: |+>^{n1} (x) |1>;  ME: 2^{-n1/2} sum_a |a>|x^a mod M>;  FINAL: QFT on the
// first register of ME.
StageState build_stage(const ShorInstance &instance, ShorStage stage);

// |a>|w> -> |a>|w x^a mod M> for w < M, identity for w >= M.
void apply_modular_exponentiation(StateVector &state, const ShorInstance &instance);
// |a> -> 2^{-n/2} sum_k exp(2 pi i a k / 2^n) |k> on sites [0, n), built from
// Hadamards, controlled phases and the final bit-reversal swaps.
void apply_qft(StateVector &state, int n_sites);

// Classical post-processing of one first-register outcome k: continued
// fraction of k / 2^{n1}, first convergent denominator q < M with
// x^q = 1 mod M, then the even-order / gcd factor extraction.
bool outcome_succeeds(const ShorInstance &instance, std::uint64_t k);

// T = sum_k P(k) [outcome_succeeds(k)] from a FINAL-stage state.
double success_probability(const StateVector &final_state, const ShorInstance &instance);
// Same T from the closed-form QFT of the period-r comb in the ME state.
double success_probability_analytic(const ShorInstance &instance);
// T when the first register is fully dephased before the QFT (uniform P(k)).
double dephased_success_probability(const ShorInstance &instance);

inline constexpr double kStageAfsFraction = 0.05;

struct StageAnalysis {
    ShorStage stage;
    int n_total = 0;
    FluctuationResult fluctuation;
    double effective_exponent = 0.0; // ln(max_fluctuation) / ln(N)
    FluctuationClass classification = FluctuationClass::NFS;
    bool afs_band_witness = false; // oracle_max >= kStageAfsFraction * N^2
};

// Single-size classification: the effective exponent ln(F)/ln(N) against the
// same NFS / AFS thresholds used for N-sweeps.
StageAnalysis stage_index_p(const ShorInstance &instance, ShorStage stage,
                            const ClassifyThresholds &thresholds = {});

struct NoisyStageReport {
    double one_minus_f = 0.0;
    double one_minus_f_stderr = 0.0;
    double t_clean = 0.0;
    double t_noisy = 0.0;
    double delta_t = 0.0; // t_clean - t_noisy
    double delta_t_stderr = 0.0;
};

// One dephasing kick exp(-i phi_x axis.sigma) on every qubit at `stage`, the
// rest of the circuit noiseless. F compares the kicked and clean stage states;
// T is evaluated on the resulting FINAL state. t = 0 is allowed (no noise).
NoisyStageReport noisy_stage_report(const ShorInstance &instance, ShorStage stage, const NoiseModel &noise,
                                    double t, int runs, std::uint64_t seed);

} // namespace macroent
