#pragma once

// Stability against local measurements.
//
// The disturbance of site y by a projective measurement of n.sigma at x is
//   D_n = sqrt(lambda_max( sum_o p_o (v_o - v)(v_o - v)^T ))
// where v is the Bloch vector of y before and v_o after outcome o: the
// outcome-weighted RMS shift of the most-shifted observable at y. The
// reported disturbance is the sup of D_n over measurement axes n.

#include <cstdint>
#include <vector>

#include "macroent/correlator.hpp"
#include "macroent/statevec.hpp"

namespace macroent {

struct DisturbanceReport {
    int x = 0;
    int y = 0;
    double value = 0.0;
    Vec3 argmax_axis = Vec3::UnitZ();
};

struct DisturbanceOptions {
    int design_points = 256;
    int refine_starts = 4;        // best design points that get refined
    double refine_tolerance = 1e-6; // final step on the sphere, radians
};

// D_n for one axis from the two-site moments of (x, y).
double disturbance_at_axis(const PairMoments &moments, const Vec3 &axis);

// Quasi-uniform (Fibonacci) point set on the unit sphere.
std::vector<Vec3> sphere_points(int count);

DisturbanceReport disturbance(const PairMoments &moments, const DisturbanceOptions &options = {});
DisturbanceReport disturbance(const StateVector &state, int x, int y, const DisturbanceOptions &options = {});

struct StabilityRow {
    int x;
    int y;
    int distance;
    double pair_strength;
    double disturbance;
};

struct StabilityReport {
    double epsilon = 0.0;
    double c_threshold = 0.0;  // flags disturbance > c_threshold * sqrt(epsilon)
    double c_calibrated = 0.0; // smallest C for which no pair would be flagged
    std::vector<StabilityRow> rows;
    std::vector<std::size_t> violations; // row indices
};

inline constexpr double kDefaultStabilityC = 0.5;

// Tabulates (pair_strength, disturbance) for every pair at distance >=
// min_distance and checks "pair_strength <= eps  =>  disturbance <= C sqrt(eps)".
StabilityReport stability_vs_cluster(const StateVector &state, double epsilon,
                                     double c_threshold = kDefaultStabilityC, int min_distance = 1,
                                     const DisturbanceOptions &options = {}, int parallelism = 1);

enum class ReductionPolicy { argmax_pair, round_robin_z };

struct ReductionResult {
    int count = 0;
    StateVector final_state;
    std::vector<int> measured_sites;
    double final_max_strength = 0.0;
};

double max_pair_strength(const CovarianceMatrix &vcm);

// Measures one site at a time until every pair_strength <= eps or N sites
// have been measured. argmax_pair picks an unmeasured site of the strongest
// pair and measures it along the top singular direction of that pair's
// covariance block; round_robin_z measures sites 0, 1, ... along z.
ReductionResult iterated_reduction(const StateVector &state, double epsilon, ReductionPolicy policy, Rng &rng);

} // namespace macroent
