#include "macroent/shor_probe.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>

#include "macroent/decoherence.hpp"

namespace macroent {

namespace {

bool is_prime(std::uint64_t n) {
    if (n < 2) {
        return false;
    }
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            return false;
        }
    }
    return true;
}

bool is_prime_power(std::uint64_t n) {
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            while (n % p == 0) {
                n /= p;
            }
            return n == 1;
        }
    }
    return is_prime(n);
}

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

} // namespace

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exponent, std::uint64_t modulus) {
    std::uint64_t result = 1 % modulus;
    base %= modulus;
    while (exponent > 0) {
        if (exponent & 1U) {
            result = mul_mod(result, base, modulus);
        }
        base = mul_mod(base, base, modulus);
        exponent >>= 1U;
    }
    return result;
}

std::uint64_t multiplicative_order(std::uint64_t base, std::uint64_t modulus) {
    if (std::gcd(base, modulus) != 1) {
        throw ValidationError("order undefined: base and modulus are not coprime");
    }
    std::uint64_t value = base % modulus;
    for (std::uint64_t r = 1; r <= modulus; ++r) {
        if (value == 1 % modulus) {
            return r;
        }
        value = mul_mod(value, base, modulus);
    }
    throw NumericalError("multiplicative order not found");
}

ShorInstance make_shor_instance(std::uint64_t modulus, std::uint64_t base) {
    if (modulus < 15 || modulus % 2 == 0 || is_prime(modulus) || is_prime_power(modulus)) {
        throw ValidationError("modulus " + std::to_string(modulus) +
                              " must be odd, composite and not a prime power");
    }
    if (base <= 1 || base >= modulus || std::gcd(base, modulus) != 1) {
        throw ValidationError("base " + std::to_string(base) + " must satisfy 1 < x < M and gcd(x, M) = 1");
    }
    ShorInstance inst;
    inst.modulus = modulus;
    inst.base = base;
    inst.l_bits = std::bit_width(modulus);
    inst.n1 = 2 * inst.l_bits;
    inst.order = multiplicative_order(base, modulus);
    return inst;
}

std::string_view to_string(ShorStage stage) {
    switch (stage) {
    case ShorStage::HT:
        return "HT";
    case ShorStage::ME:
        return "ME";
    case ShorStage::FINAL:
        return "FINAL";
    }
    return "unknown";
}

void apply_modular_exponentiation(StateVector &state, const ShorInstance &inst) {
    const std::size_t first_dim = std::size_t{1} << inst.n1;
    std::vector<std::uint64_t> powers(first_dim);
    for (std::size_t a = 0; a < first_dim; ++a) {
        powers[a] = pow_mod(inst.base, a, inst.modulus);
    }
    std::vector<std::size_t> perm(state.dim());
    for (std::size_t i = 0; i < perm.size(); ++i) {
        const std::size_t a = i & (first_dim - 1);
        const std::uint64_t w = i >> inst.n1;
        const std::uint64_t w_new = w < inst.modulus ? mul_mod(w, powers[a], inst.modulus) : w;
        perm[i] = a | (static_cast<std::size_t>(w_new) << inst.n1);
    }
    state.apply_permutation_inplace(perm);
}

void apply_qft(StateVector &state, int n_sites) {
    Mat2c hadamard;
    hadamard << M_SQRT1_2, M_SQRT1_2, M_SQRT1_2, -M_SQRT1_2;
    for (int j = n_sites - 1; j >= 0; --j) {
        state.apply_one_qubit_inplace(j, hadamard);
        for (int k = j - 1; k >= 0; --k) {
            state.apply_controlled_phase_inplace(k, j, M_PI / static_cast<double>(std::size_t{1} << (j - k)));
        }
    }
    for (int j = 0; j < n_sites / 2; ++j) {
        state.apply_swap_inplace(j, n_sites - 1 - j);
    }
}

StageState build_stage(const ShorInstance &inst, ShorStage stage) {
    const int n = inst.total_qubits();
    check_qubit_count(n);
    const std::size_t first_dim = std::size_t{1} << inst.n1;
    std::vector<Complex> amps(std::size_t{1} << n, Complex{0.0, 0.0});
    const double a0 = 1.0 / std::sqrt(static_cast<double>(first_dim));
    for (std::size_t a = 0; a < first_dim; ++a) {
        amps[a | (std::size_t{1} << inst.n1)] = a0; // second register = 1
    }
    StateVector state(n, std::move(amps), Geometry::chain);
    if (stage == ShorStage::ME || stage == ShorStage::FINAL) {
        apply_modular_exponentiation(state, inst);
    }
    if (stage == ShorStage::FINAL) {
        apply_qft(state, inst.n1);
    }
    return StageState{stage, std::move(state)};
}

bool outcome_succeeds(const ShorInstance &inst, std::uint64_t k) {
    const std::uint64_t q_total = std::uint64_t{1} << inst.n1;
    // continued fraction of k / q_total; convergents h/g
    std::uint64_t num = k, den = q_total;
    std::uint64_t g_prev = 1, g = 0; // convergent denominators k_{n-2}, k_{n-1}
    std::optional<std::uint64_t> order_guess;
    while (true) {
        const std::uint64_t a = num / den; // first term for k < q_total is 0
        const std::uint64_t g_next = a * g + g_prev;
        g_prev = g;
        g = g_next;
        if (g >= inst.modulus) {
            break;
        }
        if (g > 0 && pow_mod(inst.base, g, inst.modulus) == 1) {
            order_guess = g;
            break;
        }
        const std::uint64_t rem = num % den;
        if (rem == 0) {
            break;
        }
        num = den;
        den = rem;
    }
    if (!order_guess || *order_guess % 2 != 0) {
        return false;
    }
    const std::uint64_t half = pow_mod(inst.base, *order_guess / 2, inst.modulus);
    if (half == inst.modulus - 1) {
        return false;
    }
    const std::uint64_t f1 = std::gcd(half + inst.modulus - 1, inst.modulus);
    const std::uint64_t f2 = std::gcd(half + 1, inst.modulus);
    return (f1 > 1 && f1 < inst.modulus) || (f2 > 1 && f2 < inst.modulus);
}

double success_probability(const StateVector &final_state, const ShorInstance &inst) {
    if (final_state.n_qubits() != inst.total_qubits()) {
        throw ValidationError("state size does not match the Shor instance");
    }
    const std::size_t first_dim = std::size_t{1} << inst.n1;
    std::vector<double> marginal(first_dim, 0.0);
    for (std::size_t i = 0; i < final_state.dim(); ++i) {
        marginal[i & (first_dim - 1)] += std::norm(final_state[i]);
    }
    double t = 0.0;
    for (std::size_t k = 0; k < first_dim; ++k) {
        if (outcome_succeeds(inst, k)) {
            t += marginal[k];
        }
    }
    return std::clamp(t, 0.0, 1.0);
}

double success_probability_analytic(const ShorInstance &inst) {
    const std::uint64_t q_total = std::uint64_t{1} << inst.n1;
    const std::uint64_t r = inst.order;
    const double q = static_cast<double>(q_total);
    double t = 0.0;
    for (std::uint64_t k = 0; k < q_total; ++k) {
        if (!outcome_succeeds(inst, k)) {
            continue;
        }
        // The ME state splits into r combs {a0 + j r}; after the QFT each comb
        // of length m contributes |sum_j exp(i theta j)|^2 / q^2.
        const double theta = 2.0 * M_PI * static_cast<double>((r * k) % q_total) / q;
        double pk = 0.0;
        for (std::uint64_t a0 = 0; a0 < r; ++a0) {
            const double m = std::ceil((q - static_cast<double>(a0)) / static_cast<double>(r));
            const double s = std::sin(0.5 * theta);
            const double comb = std::abs(s) < 1e-15 ? m * m : std::pow(std::sin(0.5 * m * theta) / s, 2);
            pk += comb;
        }
        t += pk / (q * q);
    }
    return t;
}

double dephased_success_probability(const ShorInstance &inst) {
    const std::uint64_t q_total = std::uint64_t{1} << inst.n1;
    std::uint64_t hits = 0;
    for (std::uint64_t k = 0; k < q_total; ++k) {
        hits += outcome_succeeds(inst, k) ? 1 : 0;
    }
    return static_cast<double>(hits) / static_cast<double>(q_total);
}

StageAnalysis stage_index_p(const ShorInstance &inst, ShorStage stage, const ClassifyThresholds &thresholds) {
    const StageState s = build_stage(inst, stage);
    StageAnalysis out;
    out.stage = stage;
    out.n_total = inst.total_qubits();
    out.fluctuation = max_fluctuation(s.state, FluctuationMethod::both);
    const double value = out.fluctuation.relaxed_max;
    const double n = static_cast<double>(out.n_total);
    out.effective_exponent = std::log(value) / std::log(n);
    out.classification = classify_exponent(out.effective_exponent, thresholds);
    // the witness must be achievable, so it uses the constrained estimate
    out.afs_band_witness = out.fluctuation.oracle_max >= kStageAfsFraction * n * n;
    return out;
}

NoisyStageReport noisy_stage_report(const ShorInstance &inst, ShorStage stage, const NoiseModel &noise,
                                    double t, int runs, std::uint64_t seed) {
    if (runs < 2) {
        throw ValidationError("noisy_stage_report needs at least 2 runs");
    }
    if (!(t >= 0.0)) {
        throw ValidationError("time must be nonnegative");
    }
    const int n = inst.total_qubits();
    check_short_time(noise, n, t);

    const StateVector clean = build_stage(inst, stage).state;
    NoisyStageReport report;
    report.t_clean = success_probability(build_stage(inst, ShorStage::FINAL).state, inst);

    const PhaseSampler sampler(noise, n, clean.geometry(), t);
    Rng rng(seed);
    double sum_f = 0.0, sum_f2 = 0.0, sum_t = 0.0, sum_t2 = 0.0;
    for (int run = 0; run < runs; ++run) {
        const std::vector<double> phi = sampler.sample(rng);
        StateVector kicked = apply_dephasing_kick(clean, noise.axis, phi);
        const double f = fidelity(clean, kicked);
        if (stage == ShorStage::HT) {
            apply_modular_exponentiation(kicked, inst);
        }
        if (stage != ShorStage::FINAL) {
            apply_qft(kicked, inst.n1);
        }
        const double tn = success_probability(kicked, inst);
        sum_f += f;
        sum_f2 += f * f;
        sum_t += tn;
        sum_t2 += tn * tn;
    }
    const double mean_f = sum_f / runs;
    const double mean_t = sum_t / runs;
    const auto stderr_of = [runs](double sum2, double mean) {
        return std::sqrt(std::max(0.0, (sum2 - runs * mean * mean) / (runs - 1)) / runs);
    };
    report.one_minus_f = 1.0 - mean_f;
    report.one_minus_f_stderr = stderr_of(sum_f2, mean_f);
    report.t_noisy = mean_t;
    report.delta_t = report.t_clean - mean_t;
    report.delta_t_stderr = stderr_of(sum_t2, mean_t);
    return report;
}

} // namespace macroent
