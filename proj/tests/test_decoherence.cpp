#include <gtest/gtest.h>

#include "macroent/decoherence.hpp"
#include "macroent/stategen.hpp"
#include "oracle.hpp"

using namespace macroent;

TEST(Noise, KernelsAndValidation) {
    const NoiseModel e = NoiseModel::exponential(2.0, 1.5);
    EXPECT_NEAR(e.kernel(Geometry::ring, 10, 0, 9), 2.0 * std::exp(-1.0 / 1.5), 1e-15);
    EXPECT_NEAR(e.kernel(Geometry::chain, 10, 0, 9), 2.0 * std::exp(-9.0 / 1.5), 1e-15);
    EXPECT_EQ(NoiseModel::white(1.0).kernel(Geometry::ring, 4, 0, 1), 0.0);
    EXPECT_EQ(NoiseModel::collective(1.0).kernel(Geometry::ring, 4, 0, 1), 1.0);
    EXPECT_THROW(NoiseModel::white(0.0).validate(), ValidationError);
    EXPECT_THROW(NoiseModel::exponential(1.0, -1.0).validate(), ValidationError);
    for (int n : {3, 8, 13}) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(e.kernel_matrix(n, Geometry::ring));
        EXPECT_GE(es.eigenvalues().minCoeff(), -1e-12);
    }
}

TEST(GammaPert, TextbookCases) {
    for (int n : {3, 6, 9}) {
        EXPECT_NEAR(gamma_perturbative(gen_cat(n), NoiseModel::white(0.7)), 0.7 * n, 1e-10);
        EXPECT_NEAR(gamma_perturbative(gen_cat(n), NoiseModel::collective(0.7)), 0.7 * n * n, 1e-9);
        EXPECT_NEAR(gamma_perturbative(gen_plus_all(n), NoiseModel::collective(0.7)), 0.7 * n, 1e-10);
    }
}

TEST(GammaPert, MatchesDenseKernelContraction) {
    const StateVector s = gen_haar_random(4, 3);
    const Eigen::MatrixXd v = oracle::covariance(s);
    for (const NoiseModel &noise : {NoiseModel::white(1.3), NoiseModel::collective(0.4),
                                    NoiseModel::exponential(0.9, 0.8, Vec3(1, 1, 0).normalized())}) {
        const Eigen::MatrixXd g = noise.kernel_matrix(4, s.geometry());
        double want = 0.0;
        for (int x = 0; x < 4; ++x) {
            for (int y = 0; y < 4; ++y) {
                want += g(x, y) * noise.axis.dot(v.block<3, 3>(3 * x, 3 * y) * noise.axis);
            }
        }
        EXPECT_NEAR(gamma_perturbative(s, noise), want, 1e-10);
    }
}

TEST(GammaPert, WhiteBoundAndLinearity) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const StateVector s = gen_haar_random(5, seed);
        EXPECT_LE(gamma_perturbative(s, NoiseModel::white(1.0)), 5.0 + 1e-12);
        const NoiseModel n = NoiseModel::exponential(1.0, 2.0);
        EXPECT_NEAR(gamma_perturbative(s, n.scaled(2.0)), 2.0 * gamma_perturbative(s, n), 1e-12);
    }
}

TEST(Kick, MatchesDenseRotations) {
    const StateVector s = gen_haar_random(3, 5);
    const Vec3 axis = Vec3(0.3, -0.5, 0.8).normalized();
    const std::vector<double> phi{0.1, -0.4, 0.25};
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(1, 1);
    for (int x = 2; x >= 0; --x) {
        u = oracle::kron(u, oracle::rotation(axis, phi[x]));
    }
    const Eigen::VectorXcd want = u * oracle::to_vector(s);
    EXPECT_LT((oracle::to_vector(apply_dephasing_kick(s, axis, phi)) - want).norm(), 1e-12);
}

TEST(Sampler, EmpiricalCovariance) {
    const NoiseModel noise = NoiseModel::exponential(1.0, 1.0);
    const PhaseSampler sampler(noise, 4, Geometry::ring, 0.5);
    Rng rng(4);
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(4, 4);
    const int m = 200000;
    for (int i = 0; i < m; ++i) {
        const std::vector<double> phi = sampler.sample(rng);
        const Eigen::Map<const Eigen::VectorXd> v(phi.data(), 4);
        acc += v * v.transpose();
    }
    acc /= m;
    EXPECT_LT((acc - 0.5 * noise.kernel_matrix(4, Geometry::ring)).cwiseAbs().maxCoeff(), 0.01);
}

TEST(MonteCarlo, CatWhiteMatchesPerturbative) {
    const StateVector cat = gen_cat(8);
    const NoiseModel noise = NoiseModel::white(1.0);
    const GammaReport r = gamma_montecarlo(cat, noise, 1e-3, 4000, 17);
    EXPECT_NEAR(r.gamma_mc, r.gamma_pert, 3.0 * r.mc_stderr);
    EXPECT_NEAR(r.gamma_pert, 8.0, 1e-12);
}

// For collective noise on the cat state F = E[cos^2(N phi)], phi ~ N(0, t),
// which has the closed form (1 + exp(-2 N^2 t)) / 2.
TEST(MonteCarlo, CatCollectiveMatchesClosedForm) {
    const int n = 8;
    const double t = 1e-3;
    const GammaReport r = gamma_montecarlo(gen_cat(n), NoiseModel::collective(1.0), t, 4000, 23);
    const double exact = -std::log(0.5 * (1.0 + std::exp(-2.0 * n * n * t))) / t;
    EXPECT_NEAR(r.gamma_mc, exact, 3.0 * r.mc_stderr);
    EXPECT_NEAR(r.gamma_pert, 64.0, 1e-9);
}

TEST(MonteCarlo, DeterministicAcrossWorkerCounts) {
    const StateVector s = gen_haar_random(5, 2);
    const NoiseModel noise = NoiseModel::exponential(1.0, 1.0);
    const GammaReport a = gamma_montecarlo(s, noise, 1e-3, 1000, 99, 1);
    const GammaReport b = gamma_montecarlo(s, noise, 1e-3, 1000, 99, 4);
    EXPECT_EQ(a.gamma_mc, b.gamma_mc);
    EXPECT_EQ(a.mc_stderr, b.mc_stderr);
}

TEST(MonteCarlo, ShortTimeGuardAndZeroTime) {
    try {
        gamma_montecarlo(gen_cat(8), NoiseModel::white(1.0), 0.01, 100, 1);
        FAIL() << "expected the regime guard";
    } catch (const ValidationError &e) {
        EXPECT_NE(std::string(e.what()).find("not in short-time regime"), std::string::npos);
    }
    const PhaseSampler zero(NoiseModel::white(1.0), 3, Geometry::ring, 0.0);
    Rng rng(1);
    for (double p : zero.sample(rng)) {
        EXPECT_EQ(p, 0.0);
    }
}

TEST(MonteCarlo, CatalogAgreesWithPerturbative) {
    const NoiseModel noise = NoiseModel::exponential(1.0, 1.5);
    for (const StateVector &s : {gen_w(6), gen_plus_all(6), gen_ising_ground(6, 1.0, 0.2), gen_haar_random(6, 7)}) {
        const GammaReport r = gamma_montecarlo(s, noise, 1e-3, 4000, 5, 2);
        EXPECT_NEAR(r.gamma_mc, r.gamma_pert, 3.0 * r.mc_stderr);
    }
}

TEST(Fragility, Dichotomy) {
    StateFamily cat;
    const std::vector<int> ns{4, 6, 8, 10, 12, 14};
    const FragilityResult w = fragility_exponent(cat, NoiseModel::white(1.0), ns);
    EXPECT_NEAR(w.fit.exponent, 1.0, 1e-9);
    EXPECT_FALSE(w.fragile);
    const FragilityResult c = fragility_exponent(cat, NoiseModel::collective(1.0), ns);
    EXPECT_NEAR(c.fit.exponent, 2.0, 1e-9);
    EXPECT_TRUE(c.fragile);
    // A single random product state gives a noisy partial sum of
    // 1 - z_x^2, so the family is judged on its seed-averaged rate.
    std::vector<ScalingPoint> mean;
    for (int n : ns) {
        double acc = 0.0;
        for (std::uint64_t seed = 1; seed <= 100; ++seed) {
            acc += gamma_perturbative(gen_product_random(n, seed), NoiseModel::collective(1.0));
        }
        mean.push_back({n, acc / 100.0});
    }
    EXPECT_NEAR(fit_exponent(mean).exponent, 1.0, 0.05);
}
