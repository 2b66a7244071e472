#include <gtest/gtest.h>

#include <cstdlib>

#include "macroent/stategen.hpp"
#include "macroent/statevec.hpp"
#include "oracle.hpp"

using namespace macroent;

namespace {

Vec3 random_unit(Rng &rng) {
    std::normal_distribution<double> g;
    Vec3 v(g(rng), g(rng), g(rng));
    return v.normalized();
}

Mat2c random_unitary(Rng &rng) {
    std::normal_distribution<double> g;
    Eigen::Matrix2cd a;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            a(i, j) = Complex(g(rng), g(rng));
        }
    }
    Eigen::HouseholderQR<Eigen::Matrix2cd> qr(a);
    return qr.householderQ();
}

} // namespace

TEST(StateVector, RejectsUnnormalizedAndWrongSize) {
    EXPECT_THROW(StateVector(1, {Complex(1, 0), Complex(1, 0)}), ValidationError);
    EXPECT_THROW(StateVector(2, {Complex(1, 0), Complex(0, 0)}), ValidationError);
    EXPECT_NO_THROW(StateVector(1, {Complex(0.6, 0), Complex(0, 0.8)}));
    const StateVector s = StateVector::normalized(1, {Complex(3, 0), Complex(4, 0)});
    EXPECT_NEAR(s[0].real(), 0.6, 1e-15);
}

TEST(StateVector, BasisStateSiteZeroIsLowBit) {
    const StateVector s = make_basis_state(3, "100");
    EXPECT_EQ(std::abs(s[1]), 1.0);
    EXPECT_NEAR(bloch_vector(s, 0)(2), -1.0, 1e-15);
    EXPECT_NEAR(bloch_vector(s, 1)(2), 1.0, 1e-15);
    EXPECT_THROW(make_basis_state(3, "10"), ValidationError);
    EXPECT_THROW(make_basis_state(2, "1x"), ValidationError);
}

TEST(StateVector, QubitCapFromEnvironmentAndOverride) {
    set_qubit_cap(3);
    EXPECT_THROW(check_qubit_count(4), ValidationError);
    EXPECT_NO_THROW(check_qubit_count(3));
    set_qubit_cap(std::nullopt);
    setenv("MACROENT_QUBIT_CAP", "5", 1);
    EXPECT_EQ(qubit_cap(), 5);
    unsetenv("MACROENT_QUBIT_CAP");
    EXPECT_EQ(qubit_cap(), kDefaultQubitCap);
}

TEST(StateVector, SiteOperatorNeedsUnitVector) {
    EXPECT_THROW(SiteOperator(Vec3(1, 1, 0)), ValidationError);
    EXPECT_NO_THROW(SiteOperator::along(Vec3(1, 1, 0)));
}

TEST(StateVector, OneQubitGateMatchesDenseKron) {
    Rng rng(7);
    const StateVector s = gen_haar_random(4, 11);
    for (int site = 0; site < 4; ++site) {
        const Mat2c u = random_unitary(rng);
        const StateVector out = apply_one_qubit(s, site, u);
        const Eigen::VectorXcd want = oracle::site_op(4, site, u) * oracle::to_vector(s);
        EXPECT_LT((oracle::to_vector(out) - want).norm(), 1e-12);
    }
    Mat2c bad = Mat2c::Identity();
    bad(0, 0) = 2.0;
    EXPECT_THROW(apply_one_qubit(s, 0, bad), ValidationError);
}

TEST(StateVector, BlochAndPairMomentsMatchDense) {
    for (std::uint64_t seed : {1U, 2U, 3U}) {
        const StateVector s = gen_haar_random(4, seed);
        const Eigen::VectorXcd psi = oracle::to_vector(s);
        for (int x = 0; x < 4; ++x) {
            const Vec3 b = bloch_vector(s, x);
            for (int a = 0; a < 3; ++a) {
                EXPECT_NEAR(b(a), oracle::expect(psi, oracle::site_op(4, x, oracle::pauli(a))).real(), 1e-12);
            }
        }
        const PairMoments m = pair_moments(s, 1, 3);
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                const Eigen::MatrixXcd op =
                    oracle::site_op(4, 1, oracle::pauli(a)) * oracle::site_op(4, 3, oracle::pauli(b));
                EXPECT_NEAR(m.corr(a, b), oracle::expect(psi, op).real(), 1e-12);
                EXPECT_NEAR(covar_pair_sym(s, 1, SiteOperator(Vec3::Unit(a)), 3, SiteOperator(Vec3::Unit(b))),
                            m.covariance()(a, b), 1e-12);
            }
        }
    }
}

TEST(StateVector, MeasurementBranchesAndProjection) {
    Rng rng(3);
    const StateVector s = gen_haar_random(3, 5);
    for (int trial = 0; trial < 10; ++trial) {
        const Vec3 axis = random_unit(rng);
        const auto br = measure_branches(s, 1, axis);
        EXPECT_EQ(br[0].outcome, +1);
        EXPECT_NEAR(br[0].probability + br[1].probability, 1.0, 1e-12);
        EXPECT_NEAR(br[0].probability, 0.5 * (1.0 + axis.dot(bloch_vector(s, 1))), 1e-12);
        for (const auto &b : br) {
            ASSERT_TRUE(b.post_state.has_value());
            EXPECT_NEAR(bloch_vector(*b.post_state, 1).dot(axis), b.outcome, 1e-10);
        }
    }
    EXPECT_THROW(project_site(make_basis_state(1, "0"), 0, Vec3::UnitZ(), -1), NumericalError);
    const auto br = measure_branches(make_basis_state(1, "0"), 0, Vec3::UnitZ());
    EXPECT_FALSE(br[1].post_state.has_value());
}

// Averaging a measurement on x over its outcomes never moves the Bloch vector
// of any other site.
TEST(StateVector, NoSignaling) {
    Rng rng(11);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const StateVector s = gen_haar_random(4, seed);
        const Vec3 axis = random_unit(rng);
        const auto br = measure_branches(s, 0, axis);
        for (int y = 1; y < 4; ++y) {
            Vec3 avg = Vec3::Zero();
            for (const auto &b : br) {
                if (b.post_state) {
                    avg += b.probability * bloch_vector(*b.post_state, y);
                }
            }
            EXPECT_LT((avg - bloch_vector(s, y)).norm(), 1e-9);
        }
    }
}

TEST(StateVector, MeasureSiteIsSeedDeterministic) {
    const StateVector s = gen_haar_random(3, 9);
    Rng a(42), b(42);
    for (int i = 0; i < 5; ++i) {
        const auto ra = measure_site(s, i % 3, Vec3::UnitX(), a);
        const auto rb = measure_site(s, i % 3, Vec3::UnitX(), b);
        EXPECT_EQ(ra.outcome, rb.outcome);
    }
}

TEST(StateVector, FidelityAndInnerProduct) {
    const StateVector a = gen_haar_random(3, 1);
    EXPECT_NEAR(fidelity(a, a), 1.0, 1e-12);
    const StateVector z = make_basis_state(2, "00"), o = make_basis_state(2, "11");
    EXPECT_NEAR(std::abs(inner_product(z, o)), 0.0, 1e-15);
    EXPECT_THROW(fidelity(a, z), ValidationError);
}

TEST(StateVector, GatesPreserveNormAndSwapPermutes) {
    StateVector s = make_basis_state(3, "100");
    s.apply_swap_inplace(0, 2);
    EXPECT_NEAR(std::abs(s[4]), 1.0, 1e-15);
    StateVector p = gen_plus_all(3);
    p.apply_controlled_phase_inplace(0, 1, M_PI);
    EXPECT_NEAR(p.norm_squared(), 1.0, 1e-12);
    EXPECT_NEAR(p[3].real(), -1.0 / std::sqrt(8.0), 1e-12);
    EXPECT_NEAR(p[1].real(), 1.0 / std::sqrt(8.0), 1e-12);
}

TEST(Geometry, Distances) {
    EXPECT_EQ(site_distance(Geometry::ring, 10, 0, 9), 1);
    EXPECT_EQ(site_distance(Geometry::chain, 10, 0, 9), 9);
    EXPECT_EQ(max_site_distance(Geometry::ring, 10), 5);
    EXPECT_EQ(max_site_distance(Geometry::chain, 10), 9);
}
