#pragma once

// Decoherence rate of a pure state under correlated dephasing noise: the
// second-order rate from the covariance matrix, a Monte Carlo fidelity-decay
// oracle, and the fragility exponent of Gamma ~ K N^(1 + delta).

#include <cstdint>
#include <span>
#include <vector>

#include "macroent/correlator.hpp"
#include "macroent/noise.hpp"
#include "macroent/scaling.hpp"

namespace macroent {

// Gamma = sum_{x,y} g(x, y) V[(x, axis), (y, axis)]. Equals the leading
// short-time loss 1 - F(t) = Gamma t under the kick applied by
// apply_dephasing_kick.
double gamma_perturbative(const CovarianceMatrix &vcm, const NoiseModel &noise);
double gamma_perturbative(const StateVector &state, const NoiseModel &noise);

// prod_x exp(-i phi_x axis.sigma(x)).
StateVector apply_dephasing_kick(const StateVector &state, const Vec3 &axis,
                                 std::span<const double> phases);

// Draws phase vectors phi ~ N(0, g t) for a fixed (noise, N, geometry, t).
class PhaseSampler {
  public:
    PhaseSampler(const NoiseModel &noise, int n, Geometry geometry, double t);
    std::vector<double> sample(Rng &rng) const;
    int n() const { return static_cast<int>(factor_.rows()); }

  private:
    Eigen::MatrixXd factor_; // factor * factor^T = g t
};

// gamma * t * N^2 must not exceed this.
inline constexpr double kShortTimeBound = 0.5;
void check_short_time(const NoiseModel &noise, int n, double t);

struct GammaReport {
    double gamma_pert = 0.0;
    double gamma_mc = 0.0;
    double mc_stderr = 0.0;
    double fidelity = 1.0;
    double fidelity_stderr = 0.0;
};

inline constexpr int kMonteCarloChunk = 256;

// F(t) = mean_phi |<psi| U_phi |psi>|^2 and gamma_mc = -ln F / t. Runs are
// split into chunks of kMonteCarloChunk, chunk c seeded with
// derive_seed(seed, c) and accumulated in chunk order, so the result does
// not depend on `parallelism`.
GammaReport gamma_montecarlo(const StateVector &state, const NoiseModel &noise, double t, int runs,
                             std::uint64_t seed, int parallelism = 1);
GammaReport gamma_montecarlo(const StateVector &state, const NoiseModel &noise, double t, int runs,
                             Rng &rng, int parallelism = 1);

struct FragilityResult {
    ScalingSeries series;
    ScalingFit fit;
    double delta = 0.0; // exponent - 1
    bool fragile = false;
};

inline constexpr double kDefaultFragilityThreshold = 0.25;

FragilityResult fragility_exponent(const StateFamily &family, const NoiseModel &noise,
                                   const std::vector<int> &n_list,
                                   double threshold = kDefaultFragilityThreshold, int parallelism = 1);

} // namespace macroent
