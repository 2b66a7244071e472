#pragma once

// Dense pure-state kernel for N qubits.
//
// Conventions used throughout the library:
//   * site 0 is the least significant bit of the amplitude index;
//   * a bitstring "b0 b1 ... b(N-1)" lists sites in increasing order, so
//     "10" on two qubits is index 1 (site 0 excited);
//   * sigma_z|0> = +|0>, sigma_z|1> = -|1>.

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "macroent/errors.hpp"
#include "macroent/rng.hpp"

namespace macroent {

using Complex = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat2c = Eigen::Matrix2cd;

inline constexpr int kDefaultQubitCap = 26;
inline constexpr double kNormTolerance = 1e-10;

// Hard limit on N. Defaults to 26, overridable with MACROENT_QUBIT_CAP or
// set_qubit_cap (tests).
int qubit_cap();
void set_qubit_cap(std::optional<int> cap);

// Throws ValidationError if n is outside [1, qubit_cap()].
void check_qubit_count(int n);

enum class Geometry { chain, ring };

// |x - y| on a chain, min(|x - y|, N - |x - y|) on a ring.
int site_distance(Geometry geometry, int n, int x, int y);
// Largest distance realised by any pair of distinct sites.
int max_site_distance(Geometry geometry, int n);

class StateVector {
  public:
    // Validates N against the cap, the amplitude count against 2^N and the
    // norm against kNormTolerance.
    StateVector(int n_qubits, std::vector<Complex> amplitudes, Geometry geometry = Geometry::chain);

    // Scales the amplitudes to unit norm first. Zero vectors are rejected.
    static StateVector normalized(int n_qubits, std::vector<Complex> amplitudes,
                                  Geometry geometry = Geometry::chain);

    int n_qubits() const { return n_qubits_; }
    std::size_t dim() const { return amplitudes_.size(); }
    Geometry geometry() const { return geometry_; }
    std::span<const Complex> amplitudes() const { return amplitudes_; }
    const Complex &operator[](std::size_t i) const { return amplitudes_[i]; }

    int distance(int x, int y) const { return site_distance(geometry_, n_qubits_, x, y); }
    StateVector with_geometry(Geometry geometry) const;

    double norm_squared() const;

    // In-place mutators, single writer only. Each re-checks the norm.
    void apply_one_qubit_inplace(int site, const Mat2c &u);
    void apply_controlled_phase_inplace(int control, int target, double theta);
    void apply_swap_inplace(int a, int b);
    // new[perm[i]] = old[i]; perm must be a permutation of [0, dim).
    void apply_permutation_inplace(std::span<const std::size_t> perm);

  private:
    void check_site(int site) const;
    void check_norm() const;

    int n_qubits_;
    std::vector<Complex> amplitudes_;
    Geometry geometry_;
};

// Traceless local operator c . sigma with |c| = 1 (operator norm 1).
class SiteOperator {
  public:
    explicit SiteOperator(const Vec3 &coeffs);
    // Normalises an arbitrary nonzero direction.
    static SiteOperator along(const Vec3 &direction);
    static SiteOperator pauli_x() { return SiteOperator(Vec3::UnitX()); }
    static SiteOperator pauli_y() { return SiteOperator(Vec3::UnitY()); }
    static SiteOperator pauli_z() { return SiteOperator(Vec3::UnitZ()); }

    const Vec3 &coeffs() const { return coeffs_; }
    Mat2c matrix() const;

  private:
    Vec3 coeffs_;
};

// Pauli matrices in the order x, y, z.
const std::array<Mat2c, 3> &pauli_matrices();

StateVector make_basis_state(int n, std::string_view bits, Geometry geometry = Geometry::chain);

StateVector apply_one_qubit(const StateVector &state, int site, const Mat2c &u);

// (<sigma_x>, <sigma_y>, <sigma_z>) at one site.
Vec3 bloch_vector(const StateVector &state, int site);

double expect_site(const StateVector &state, int site, const SiteOperator &op);

// Two-site moments: Bloch vectors of x and y and corr(a, b) = <sigma_a(x) sigma_b(y)>.
struct PairMoments {
    Vec3 bloch_x;
    Vec3 bloch_y;
    Mat3 corr;
    // corr - bloch_x bloch_y^T, the connected correlation block.
    Mat3 covariance() const { return corr - bloch_x * bloch_y.transpose(); }
};
PairMoments pair_moments(const StateVector &state, int x, int y);

// 1/2 <{delta a(x), delta b(y)}>. x == y gives the on-site symmetrised covariance.
double covar_pair_sym(const StateVector &state, int x, const SiteOperator &a, int y,
                      const SiteOperator &b);

struct MeasurementBranch {
    int outcome; // +1 or -1
    double probability;
    std::optional<StateVector> post_state; // empty when the branch vanishes
};

inline constexpr double kVanishingBranch = 1e-12;

// Projective measurement of axis . sigma at `site`; both outcomes, +1 first.
std::array<MeasurementBranch, 2> measure_branches(const StateVector &state, int site, const Vec3 &axis);

// Post-measurement state for one outcome. Throws NumericalError("vanishing
// branch") when its probability is below kVanishingBranch.
StateVector project_site(const StateVector &state, int site, const Vec3 &axis, int outcome);

struct MeasurementResult {
    int outcome;
    double probability;
    StateVector post_state;
};

MeasurementResult measure_site(const StateVector &state, int site, const Vec3 &axis, Rng &rng);

Complex inner_product(const StateVector &a, const StateVector &b);
double fidelity(const StateVector &a, const StateVector &b);

} // namespace macroent
