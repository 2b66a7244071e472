#include "macroent/decoherence.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "macroent/parallel.hpp"

namespace macroent {

namespace {

// Unitary R with R (n.sigma) R^dagger = sigma_z.
Mat2c axis_to_z(const Vec3 &axis) {
    Eigen::SelfAdjointEigenSolver<Mat2c> es(SiteOperator(axis).matrix());
    // eigenvalues ascending: (-1, +1)
    Mat2c r;
    r.row(0) = es.eigenvectors().col(1).adjoint();
    r.row(1) = es.eigenvectors().col(0).adjoint();
    return r;
}

struct ChunkSums {
    double sum = 0.0;
    double sum_sq = 0.0;
};

} // namespace

double gamma_perturbative(const CovarianceMatrix &vcm, const NoiseModel &noise) {
    const Eigen::MatrixXd g = noise.kernel_matrix(vcm.n_qubits(), vcm.geometry());
    const Eigen::MatrixXd v = vcm.axis_block(noise.axis);
    const double gamma = g.cwiseProduct(v).sum();
    if (gamma < -1e-9) {
        throw NumericalError("negative perturbative decoherence rate " + std::to_string(gamma));
    }
    return std::max(gamma, 0.0);
}

double gamma_perturbative(const StateVector &state, const NoiseModel &noise) {
    return gamma_perturbative(build_vcm(state), noise);
}

StateVector apply_dephasing_kick(const StateVector &state, const Vec3 &axis,
                                 std::span<const double> phases) {
    if (static_cast<int>(phases.size()) != state.n_qubits()) {
        throw ValidationError("need one phase per site");
    }
    const Mat2c n_sigma = SiteOperator(axis).matrix();
    const Complex i{0.0, 1.0};
    StateVector out = state;
    for (int x = 0; x < state.n_qubits(); ++x) {
        if (phases[x] == 0.0) {
            continue;
        }
        const Mat2c u = std::cos(phases[x]) * Mat2c::Identity() - i * std::sin(phases[x]) * n_sigma;
        out.apply_one_qubit_inplace(x, u);
    }
    return out;
}

PhaseSampler::PhaseSampler(const NoiseModel &noise, int n, Geometry geometry, double t) {
    if (!(t >= 0.0)) {
        throw ValidationError("time must be nonnegative");
    }
    const Eigen::MatrixXd cov = noise.kernel_matrix(n, geometry) * t;
    // Eigen-decomposition rather than Cholesky: collective kernels are rank one.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
    const Eigen::VectorXd root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    factor_ = es.eigenvectors() * root.asDiagonal();
}

std::vector<double> PhaseSampler::sample(Rng &rng) const {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd z(factor_.cols());
    for (Eigen::Index k = 0; k < z.size(); ++k) {
        z(k) = normal(rng);
    }
    const Eigen::VectorXd phi = factor_ * z;
    return std::vector<double>(phi.data(), phi.data() + phi.size());
}

void check_short_time(const NoiseModel &noise, int n, double t) {
    if (noise.gamma * t * n * n > kShortTimeBound) {
        throw ValidationError("not in short-time regime: gamma*t*N^2 = " +
                              std::to_string(noise.gamma * t * n * n) + " > " +
                              std::to_string(kShortTimeBound));
    }
}

GammaReport gamma_montecarlo(const StateVector &state, const NoiseModel &noise, double t, int runs,
                             std::uint64_t seed, int parallelism) {
    const int n = state.n_qubits();
    if (runs < 2) {
        throw ValidationError("Monte Carlo needs at least 2 runs");
    }
    if (!(t > 0.0)) {
        throw ValidationError("Monte Carlo time must be positive");
    }
    check_short_time(noise, n, t);

    GammaReport report;
    report.gamma_pert = gamma_perturbative(state, noise);

    // Work in the eigenbasis of the noise axis: the kick is then diagonal and
    // <psi|U|psi> = sum_i p_i exp(-i theta_i), theta_i = sum_x phi_x s_x(i).
    const Mat2c r = axis_to_z(noise.axis);
    StateVector rotated = state;
    for (int x = 0; x < n; ++x) {
        rotated.apply_one_qubit_inplace(x, r);
    }
    std::vector<double> prob(rotated.dim());
    for (std::size_t i = 0; i < prob.size(); ++i) {
        prob[i] = std::norm(rotated[i]);
    }

    const PhaseSampler sampler(noise, n, state.geometry(), t);
    const int n_chunks = (runs + kMonteCarloChunk - 1) / kMonteCarloChunk;
    std::vector<ChunkSums> chunks(n_chunks);

    parallel_for(static_cast<std::size_t>(n_chunks), parallelism, [&](std::size_t c) {
        Rng rng(derive_seed(seed, c));
        const int begin = static_cast<int>(c) * kMonteCarloChunk;
        const int end = std::min(runs, begin + kMonteCarloChunk);
        std::vector<double> theta(prob.size());
        ChunkSums sums;
        for (int run = begin; run < end; ++run) {
            const std::vector<double> phi = sampler.sample(rng);
            double total = 0.0;
            for (double p : phi) {
                total += p;
            }
            theta[0] = total;
            for (int x = 0; x < n; ++x) {
                const std::size_t half = std::size_t{1} << x;
                for (std::size_t i = half; i < 2 * half; ++i) {
                    theta[i] = theta[i - half] - 2.0 * phi[x]; // bit x set: s_x = -1
                }
            }
            Complex overlap{0.0, 0.0};
            for (std::size_t i = 0; i < prob.size(); ++i) {
                if (prob[i] != 0.0) {
                    overlap += prob[i] * std::polar(1.0, -theta[i]);
                }
            }
            const double f = std::norm(overlap);
            sums.sum += f;
            sums.sum_sq += f * f;
        }
        chunks[c] = sums;
    });

    double sum = 0.0, sum_sq = 0.0;
    for (const ChunkSums &c : chunks) {
        sum += c.sum;
        sum_sq += c.sum_sq;
    }
    const double mean = sum / runs;
    const double var = std::max(0.0, (sum_sq - runs * mean * mean) / (runs - 1));
    report.fidelity = mean;
    report.fidelity_stderr = std::sqrt(var / runs);
    report.gamma_mc = -std::log(mean) / t;
    report.mc_stderr = report.fidelity_stderr / (mean * t);
    return report;
}

GammaReport gamma_montecarlo(const StateVector &state, const NoiseModel &noise, double t, int runs,
                             Rng &rng, int parallelism) {
    return gamma_montecarlo(state, noise, t, runs, rng(), parallelism);
}

FragilityResult fragility_exponent(const StateFamily &family, const NoiseModel &noise,
                                   const std::vector<int> &n_list, double threshold, int parallelism) {
    SweepConfig config;
    config.noise = noise;
    config.parallelism = parallelism;
    config.seed = family.seed;
    FragilityResult out;
    out.series = sweep(family, Quantity::gamma, n_list, config);
    out.fit = fit_exponent(out.series);
    out.delta = out.fit.exponent - 1.0;
    out.fragile = out.fit.exponent > 1.0 + threshold;
    return out;
}

} // namespace macroent
