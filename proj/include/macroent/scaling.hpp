#pragma once

// N-sweeps over state families, log-log exponent fits, the cluster range
// Omega(eps) and NFS / AFS classification.

#include <cstdint>
#include <string_view>
#include <vector>

#include "macroent/correlator.hpp"
#include "macroent/noise.hpp"
#include "macroent/stategen.hpp"

namespace macroent {

enum class Quantity { max_fluctuation, gamma, one_minus_F, delta_T };

std::string_view to_string(Quantity q);

struct ScalingPoint {
    int n;
    double value;
    double std_error = 0.0;
};

struct ScalingSeries {
    StateFamily family;
    Quantity quantity = Quantity::max_fluctuation;
    std::vector<ScalingPoint> points;
};

struct ScalingFit {
    double exponent = 0.0;
    double prefactor = 0.0;
    double std_error = 0.0;   // standard error of the slope
    double r_squared = 0.0;
    int n_points = 0;
};

inline constexpr int kMinFitPoints = 4;

struct SweepConfig {
    FluctuationMethod estimator = FluctuationMethod::relaxed;
    FluctuationOptions fluctuation;
    NoiseModel noise = NoiseModel::white(1.0);
    double gamma_t = 1e-3; // gamma * t for one_minus_F
    int runs = 4000;
    std::uint64_t seed = 0;
    int parallelism = 1;
};

// Points are computed independently (task i seeded with derive_seed(seed, N_i))
// and stored in N order. A failure at any N is rethrown with that N in the
// message.
ScalingSeries sweep(const StateFamily &family, Quantity quantity, const std::vector<int> &n_list,
                    const SweepConfig &config = {});

// OLS of ln(value) on ln(N). Needs >= kMinFitPoints points with strictly
// increasing N; nonpositive values are rejected.
ScalingFit fit_exponent(const ScalingSeries &series);
ScalingFit fit_exponent(const std::vector<ScalingPoint> &points);

// Smallest R such that every pair farther apart than R has pair_strength
// <= eps. Returns N when the correlations persist out to the largest
// distance the geometry allows.
int omega_range(const CovarianceMatrix &vcm, double epsilon);
int omega_range(const StateVector &state, double epsilon);

enum class FluctuationClass { NFS, intermediate, AFS };

std::string_view to_string(FluctuationClass c);

struct ClassifyThresholds {
    double nfs_below = 1.25;
    double afs_above = 1.75;
};

FluctuationClass classify(const ScalingFit &fit, const ClassifyThresholds &thresholds = {});
FluctuationClass classify_exponent(double exponent, const ClassifyThresholds &thresholds = {});

} // namespace macroent
