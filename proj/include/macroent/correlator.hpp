#pragma once

// Covariance matrix of local Pauli operators and the maximal fluctuation of
// additive operators A = sum_x a(x), |a(x)| = 1.

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "macroent/statevec.hpp"

namespace macroent {

// 3N x 3N real symmetric matrix
//   V[(x,a),(y,b)] = 1/2 <{dsigma_a(x), dsigma_b(y)}>,  row index 3x + a, a in {x,y,z}.
// An additive operator with coefficient vector c (stacked per site) has
// variance c^T V c.
class CovarianceMatrix {
  public:
    CovarianceMatrix(int n_qubits, Eigen::MatrixXd entries, Geometry geometry = Geometry::chain);

    int n_qubits() const { return n_qubits_; }
    Geometry geometry() const { return geometry_; }
    const Eigen::MatrixXd &entries() const { return entries_; }
    double entry(int x, int a, int y, int b) const { return entries_(3 * x + a, 3 * y + b); }

    Mat3 block(int x, int y) const { return entries_.block<3, 3>(3 * x, 3 * y); }

    // Restriction to one Pauli axis: N x N matrix n^T V_xy n.
    Eigen::MatrixXd axis_block(const Vec3 &axis) const;

    // c^T V c for stacked unit site vectors.
    double additive_variance(const std::vector<Vec3> &coeffs) const;

    // Eigenvalues ascending.
    Eigen::VectorXd eigenvalues() const;
    double largest_eigenvalue() const;

  private:
    int n_qubits_;
    Eigen::MatrixXd entries_;
    Geometry geometry_;
};

// One sequential pass over the amplitude array per site x accumulates the
// two-site reduced matrices of every pair (x, y > x). Sites are distributed
// over `parallelism` workers; each pair is owned by one worker, so the result
// is bit-identical for any worker count.
CovarianceMatrix build_vcm(const StateVector &state, int parallelism = 1);

enum class FluctuationMethod { relaxed, oracle, both };

struct FluctuationOptions {
    int multistart = 8;     // total starts, at least the 4 deterministic ones
    int max_sweeps = 500;
    double rel_tolerance = 1e-10;
    std::uint64_t seed = 0x5eed;
};

struct FluctuationResult {
    int n_qubits = 0;
    double e_max = 0.0;        // largest eigenvalue of V
    double relaxed_max = 0.0;  // N * e_max, upper bound on the sup
    double oracle_max = 0.0;   // best per-site-normalised value found
    std::vector<Vec3> argmax_coeffs;
    int sweeps = 0;            // total coordinate-ascent sweeps over all starts

    // Preferred estimator: relaxed unless only the oracle was computed.
    double value(FluctuationMethod method) const;
    // |relaxed - oracle| / relaxed, when both were computed.
    double discrepancy() const;
};

// Relaxed: sup over sum_x |c_x|^2 = N, i.e. N times the top eigenvalue.
// Oracle: coordinate ascent over per-site unit vectors. Each site update
// solves max_{|c|=1} c^T A c + 2 c^T b exactly (3x3 trust-region problem),
// which never decreases the objective. Starts: per-site normalised top
// eigenvector, uniform x, uniform y, uniform z, then random directions.
FluctuationResult max_fluctuation(const CovarianceMatrix &vcm, FluctuationMethod method,
                                  const FluctuationOptions &options = {});
FluctuationResult max_fluctuation(const StateVector &state, FluctuationMethod method,
                                  const FluctuationOptions &options = {});

// Maximiser of c^T A c + 2 c^T b over the unit sphere; `previous` breaks ties
// when the problem is degenerate.
Vec3 solve_unit_quadratic(const Mat3 &a, const Vec3 &b, const Vec3 &previous);

// sup over unit a, b of |1/2 <{da(x), db(y)}>|: top singular value of the
// cross block V_xy.
double pair_strength(const CovarianceMatrix &vcm, int x, int y);
double pair_strength(const StateVector &state, int x, int y);

struct MerminResult {
    double value;
    double lhv_bound;
    double ratio;
};

// <M> for M = 1/2 [prod_x (X + iY) + prod_x (X - iY)].
MerminResult mermin_value(const StateVector &state);

} // namespace macroent
