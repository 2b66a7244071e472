// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "macroent/correlator.hpp"
#include "macroent/decoherence.hpp"
#include "macroent/experiment.hpp"
#include "macroent/parallel.hpp"
#include "macroent/scaling.hpp"
#include "macroent/shor_probe.hpp"
#include "macroent/stability.hpp"
#include "macroent/stategen.hpp"
#include "oracle.hpp"

using namespace macroent;
namespace fs = std::filesystem;

namespace {

// Frozen from the first green build: relaxed-estimator exponent of the
// symmetric Ising ground state (J = 1, h = 0.2, ring) over N = 8..14.
constexpr double kGoldenIsingExponent = 1.9990023973594668;
constexpr double kGoldenIsingTolerance = 1e-6;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string &what) {
        if (!ok) {
            pass = false;
            detail << "[failed: " << what << "] ";
        }
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ScalingFit fit_family(const StateFamily &family, const std::vector<int> &ns, FluctuationMethod m) {
    SweepConfig cfg;
    cfg.estimator = m;
    return fit_exponent(sweep(family, Quantity::max_fluctuation, ns, cfg));
}

StateFamily family(FamilyKind kind, double h = 0.2, std::uint64_t seed = 0) {
    StateFamily f;
    f.kind = kind;
    f.h = h;
    f.seed = seed;
    return f;
}

Outcome criterion1() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<int> ns{4, 6, 8, 10, 12, 14};
    const ScalingFit fit = fit_family(family(FamilyKind::cat), ns, FluctuationMethod::relaxed);
    o.require(std::abs(fit.exponent - 2.0) <= 0.02, "exponent 2.00 +- 0.02");
    for (int n : ns) {
        const FluctuationResult r = max_fluctuation(gen_cat(n), FluctuationMethod::oracle);
        o.require(std::abs(r.oracle_max - n * n) <= 1e-8, "oracle_max = N^2 at N=" + std::to_string(n));
    }
    const double secs = seconds_since(t0);
    o.require(secs < 10.0, "runtime < 10 s");
    o.detail << "exponent=" << fit.exponent << " runtime=" << secs << "s";
    return o;
}

Outcome criterion2() {
    Outcome o;
    const std::vector<int> ns{4, 6, 8, 10, 12, 14};
    double lo = 1e9, hi = -1e9;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const double e = fit_family(family(FamilyKind::product_random, 0.2, seed), ns, FluctuationMethod::relaxed).exponent;
        lo = std::min(lo, e);
        hi = std::max(hi, e);
        o.require(std::abs(e - 1.0) <= 0.05, "product_random seed " + std::to_string(seed));
    }
    const double plus = fit_family(family(FamilyKind::plus_all), ns, FluctuationMethod::relaxed).exponent;
    o.require(std::abs(plus - 1.0) <= 0.05, "plus_all");
    o.detail << "product_random exponents in [" << lo << ", " << hi << "], plus_all=" << plus;
    return o;
}

Outcome criterion3() {
    Outcome o;
    const std::vector<int> ns{4, 8, 12, 16};
    const double w = fit_family(family(FamilyKind::w), ns, FluctuationMethod::relaxed).exponent;
    const double b = fit_family(family(FamilyKind::bell_pair), ns, FluctuationMethod::relaxed).exponent;
    o.require(w >= 0.85 && w <= 1.15, "W exponent in [0.85, 1.15]");
    o.require(b >= 0.85 && b <= 1.15, "Bell-pair exponent in [0.85, 1.15]");
    for (int n : ns) {
        const StateVector s = gen_bell_pair(n);
        const CovarianceMatrix v = build_vcm(s);
        for (int x = 0; x < n; ++x) {
            for (int y = x + 1; y < n; ++y) {
                const bool paired = x == 0 && y == n - 1;
                const bool strong = pair_strength(v, x, y) > 0.05;
                o.require(strong == paired, "Omega(0.05) confined to the pair at N=" + std::to_string(n));
            }
        }
        o.require(omega_range(v, 0.05) == 1, "Omega range 1 at N=" + std::to_string(n));
    }
    o.detail << "W=" << w << " bell_pair=" << b;
    return o;
}

Outcome criterion4() {
    Outcome o;
    for (int n : {3, 5, 7}) {
        const MerminResult m = mermin_value(gen_cat(n));
        const double want = std::ldexp(1.0, (n - 1) / 2);
        o.require(std::abs(m.ratio - want) <= 1e-8, "ratio at N=" + std::to_string(n));
        o.detail << "N=" << n << ":" << m.ratio << " ";
    }
    return o;
}

Outcome criterion5() {
    Outcome o;
    const std::vector<int> ns{8, 10, 12, 14};
    const double e = fit_family(family(FamilyKind::ising_ground, 0.2), ns, FluctuationMethod::relaxed).exponent;
    const double para = fit_family(family(FamilyKind::ising_ground, 3.0), ns, FluctuationMethod::relaxed).exponent;
    o.require(e >= 1.7, "symmetric ground state exponent >= 1.7");
    o.require(std::abs(e - kGoldenIsingExponent) <= kGoldenIsingTolerance, "matches frozen golden exponent");
    o.require(para <= 1.2, "paramagnetic control exponent <= 1.2");
    double worst = 0.0;
    for (int n : ns) {
        const StateVector s = gen_ising_ground(n, 1.0, 0.2);
        double mz = 0.0;
        for (int x = 0; x < n; ++x) {
            mz += bloch_vector(s, x)(2);
        }
        worst = std::max(worst, std::abs(mz));
    }
    o.require(worst <= 1e-8, "<sum sigma_z> = 0 +- 1e-8");
    o.detail << "exponent=" << e << " (golden " << kGoldenIsingExponent << ") h=3 exponent=" << para
             << " max|<Sz>|=" << worst;
    return o;
}

Outcome criterion6() {
    Outcome o;
    const std::vector<int> ns{4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14};
    const int par = default_parallelism();
    const double cw = fragility_exponent(family(FamilyKind::cat), NoiseModel::white(1.0), ns, 0.25, par).fit.exponent;
    const double cc =
        fragility_exponent(family(FamilyKind::cat), NoiseModel::collective(1.0), ns, 0.25, par).fit.exponent;
    // product_random is a random family: one draw gives a noisy partial sum,
    // so the rate is averaged over a fixed block of seeds before fitting.
    std::vector<ScalingPoint> mean;
    double single_lo = 1e9, single_hi = -1e9;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const double e = fragility_exponent(family(FamilyKind::product_random, 0.2, seed),
                                            NoiseModel::collective(1.0), ns).fit.exponent;
        single_lo = std::min(single_lo, e);
        single_hi = std::max(single_hi, e);
    }
    for (int n : ns) {
        double acc = 0.0;
        for (std::uint64_t seed = 1; seed <= 100; ++seed) {
            acc += gamma_perturbative(gen_product_random(n, seed), NoiseModel::collective(1.0));
        }
        mean.push_back({n, acc / 100.0});
    }
    const double pc = fit_exponent(mean).exponent;
    o.require(std::abs(cw - 1.0) <= 0.02, "(cat, white) = 1.00 +- 0.02");
    o.require(std::abs(cc - 2.0) <= 0.02, "(cat, collective) = 2.00 +- 0.02");
    o.require(std::abs(pc - 1.0) <= 0.05, "(product_random, collective) = 1.00 +- 0.05");

    const auto t0 = std::chrono::steady_clock::now();
    const GammaReport mc = gamma_montecarlo(gen_cat(8), NoiseModel::white(1.0), 1e-3, 4000, 2024, par);
    const double secs = seconds_since(t0);
    const double z = std::abs(mc.gamma_mc - mc.gamma_pert) / mc.mc_stderr;
    o.require(z <= 3.0, "Monte Carlo within 3 stderr");
    o.require(secs < 60.0, "Monte Carlo < 60 s");
    o.detail << "cat/white=" << cw << " cat/collective=" << cc << " product/collective=" << pc
             << " (100-seed mean; single seeds span " << single_lo << ".." << single_hi << ")"
             << " | cat N=8 white: pert=" << mc.gamma_pert << " mc=" << mc.gamma_mc << "+-" << mc.mc_stderr
             << " (" << z << " sigma, " << secs << "s)";
    return o;
}

Outcome criterion7() {
    Outcome o;
    const int n = 10;
    const std::vector<std::pair<std::string, StateVector>> catalog{
        {"product", gen_product_random(n, 1)},          {"W", gen_w(n)},
        {"bell_pair", gen_bell_pair(n)},                {"cat", gen_cat(n)},
        {"ising_h3", gen_ising_ground(n, 1.0, 3.0)},    {"ising_h0.2", gen_ising_ground(n, 1.0, 0.2)},
    };
    double worst_weak = 0.0, worst_cat = 2.0;
    int weak_pairs = 0;
    for (const auto &[name, s] : catalog) {
        const StabilityReport rep = stability_vs_cluster(s, 0.01, kDefaultStabilityC, 2, {}, default_parallelism());
        for (const StabilityRow &r : rep.rows) {
            if (r.pair_strength <= 0.01) {
                ++weak_pairs;
                worst_weak = std::max(worst_weak, r.disturbance);
                o.require(r.disturbance <= 0.05, name + " pair (" + std::to_string(r.x) + "," +
                                                     std::to_string(r.y) + ") disturbance <= 0.05");
            }
            if (name == "cat") {
                worst_cat = std::min(worst_cat, r.disturbance);
                o.require(r.disturbance >= 0.9, "cat disturbance >= 0.9");
            }
        }
    }
    o.detail << "weakly correlated pairs=" << weak_pairs << " max disturbance among them=" << worst_weak
             << " min cat disturbance=" << worst_cat;
    return o;
}

Outcome criterion8() {
    Outcome o;
    for (int n : {4, 8, 12}) {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            Rng rng(derive_seed(seed, n));
            const int c = iterated_reduction(gen_cat(n), 0.01, ReductionPolicy::argmax_pair, rng).count;
            o.require(c == 1, "cat count = 1 at N=" + std::to_string(n));
        }
    }
    const int n = 12;
    const StateVector ising = gen_ising_ground(n, 1.0, 0.2);
    std::vector<int> counts(100);
    parallel_for(counts.size(), default_parallelism(), [&](std::size_t i) {
        Rng rng(derive_seed(7, i));
        counts[i] = iterated_reduction(ising, 0.05, ReductionPolicy::argmax_pair, rng).count;
    });
    std::sort(counts.begin(), counts.end());
    const double median = 0.5 * (counts[49] + counts[50]);
    o.require(median <= n / 3.0, "Ising median count <= N/3");
    o.detail << "Ising h=0.2 N=12 eps=0.05: median=" << median << " max=" << counts.back();
    return o;
}

Outcome criterion9() {
    Outcome o;
    const ShorInstance inst = make_shor_instance(15, 7);
    const StageAnalysis ht = stage_index_p(inst, ShorStage::HT);
    const StageAnalysis me = stage_index_p(inst, ShorStage::ME);
    const double n = inst.total_qubits();
    o.require(ht.classification == FluctuationClass::NFS, "HT classified NFS");
    o.require(me.fluctuation.oracle_max >= kStageAfsFraction * n * n, "ME reaches the AFS band");
    const NoiseModel noise = NoiseModel::collective(1.0);
    const NoisyStageReport rht = noisy_stage_report(inst, ShorStage::HT, noise, 1e-3, 4000, 11);
    const NoisyStageReport rme = noisy_stage_report(inst, ShorStage::ME, noise, 1e-3, 4000, 11);
    o.require(rme.one_minus_f > rht.one_minus_f, "(1-F) at ME exceeds HT");
    o.detail << "HT max_fluct=" << ht.fluctuation.relaxed_max << " (" << to_string(ht.classification)
             << ") ME oracle_max=" << me.fluctuation.oracle_max << " band=" << kStageAfsFraction * n * n
             << " 1-F: HT=" << rht.one_minus_f << " ME=" << rme.one_minus_f;
    return o;
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome criterion10() {
    Outcome o;
    // covariance PSD and dense-oracle equality
    double worst_diff = 0.0, worst_eig = 1.0;
    for (int n = 1; n <= 4; ++n) {
        std::vector<StateVector> cat{gen_cat(n), gen_w(n), gen_plus_all(n), gen_product_random(n, 3),
                                     gen_haar_random(n, 4)};
        if (n >= 2) {
            cat.push_back(gen_bell_pair(n));
            cat.push_back(gen_dicke(n, n / 2));
            cat.push_back(gen_ising_ground(n, 1.0, 0.2));
            cat.push_back(gen_ising_ground(n, 1.0, 3.0));
        }
        for (const StateVector &s : cat) {
            const CovarianceMatrix v = build_vcm(s);
            worst_diff = std::max(worst_diff, (v.entries() - oracle::covariance(s)).cwiseAbs().maxCoeff());
            worst_eig = std::min(worst_eig, v.eigenvalues().minCoeff());
        }
    }
    for (int n : {6, 10, 14}) {
        for (const StateVector &s : {gen_cat(n), gen_w(n), gen_ising_ground(n, 1.0, 0.2), gen_haar_random(n, 1)}) {
            worst_eig = std::min(worst_eig, build_vcm(s).eigenvalues().minCoeff());
        }
    }
    o.require(worst_diff <= 1e-10, "dense-oracle equality");
    o.require(worst_eig >= -1e-8, "covariance PSD");

    // no-signaling
    double worst_signal = 0.0;
    Rng rng(99);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 50; ++trial) {
        const StateVector s = gen_haar_random(5, rng());
        const Vec3 axis = Vec3(g(rng), g(rng), g(rng)).normalized();
        const int x = trial % 5;
        const auto br = measure_branches(s, x, axis);
        for (int y = 0; y < 5; ++y) {
            if (y == x) {
                continue;
            }
            Vec3 avg = Vec3::Zero();
            for (const auto &b : br) {
                if (b.post_state) {
                    avg += b.probability * bloch_vector(*b.post_state, y);
                }
            }
            worst_signal = std::max(worst_signal, (avg - bloch_vector(s, y)).norm());
        }
    }
    o.require(worst_signal <= 1e-9, "no-signaling");

    // relaxed >= oracle on 200 random states
    int ordered = 0;
    for (int i = 0; i < 200; ++i) {
        const int n = 2 + i % 6;
        const StateVector s = i % 2 == 0 ? gen_haar_random(n, 1000 + i) : gen_product_random(n, 1000 + i);
        const FluctuationResult r = max_fluctuation(s, FluctuationMethod::both);
        ordered += r.relaxed_max >= r.oracle_max - 1e-9 ? 1 : 0;
    }
    o.require(ordered == 200, "relaxed_max >= oracle_max on 200 states");

    // byte-identical CLI reruns
    const fs::path base = fs::temp_directory_path() / "macroent_acceptance";
    fs::remove_all(base);
    std::string first_csv;
    bool identical = true;
    for (int rerun = 0; rerun < 2; ++rerun) {
        const fs::path dir = base / std::to_string(rerun);
        const std::string cmd = std::string(MACROENT_CLI_PATH) +
                                " decoherence --family haar_random --N 4,5,6,7 --noise exponential --xi 2"
                                " --runs 1000 --seed 31 --parallelism " +
                                std::to_string(1 + 3 * rerun) + " --out-dir " + dir.string() + " >/dev/null";
        const int status = std::system(cmd.c_str());
        if (status != 0) {
            identical = false;
            break;
        }
        const std::string csv = slurp(dir / "decoherence.csv");
        if (rerun == 0) {
            first_csv = csv;
        } else {
            identical = identical && csv == first_csv && !csv.empty();
        }
    }
    o.require(identical, "byte-identical CLI reruns");
    o.detail << "max|V - dense|=" << worst_diff << " min eig=" << worst_eig << " signaling=" << worst_signal
             << " ordered=" << ordered << "/200";
    return o;
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"cat index p = 2", criterion1},
        {"separable baselines p = 1", criterion2},
        {"W and Bell-pair p = 1, confined Omega", criterion3},
        {"Mermin ratio for cat", criterion4},
        {"Ising symmetric ground state", criterion5},
        {"fragility dichotomy", criterion6},
        {"stability vs cluster", criterion7},
        {"iterated reduction", criterion8},
        {"Shor stages", criterion9},
        {"property suites", criterion10},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception &e) {
            o.pass = false;
            o.detail << "exception: " << e.what();
        }
        failures += o.pass ? 0 : 1;
        std::printf("%s criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    o.detail.str().c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
