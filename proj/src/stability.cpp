#include "macroent/stability.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "macroent/parallel.hpp"

namespace macroent {

double disturbance_at_axis(const PairMoments &m, const Vec3 &axis) {
    const Vec3 n = axis.normalized();
    const double s = n.dot(m.bloch_x);
    const Vec3 tn = m.corr.transpose() * n;
    Mat3 spread = Mat3::Zero();
    for (int outcome : {+1, -1}) {
        const double p = 0.5 * (1.0 + outcome * s);
        if (p < kVanishingBranch) {
            continue;
        }
        // <P_o (x) sigma(y)> = (v + o T^T n) / 2
        const Vec3 after = 0.5 * (m.bloch_y + outcome * tn) / p;
        const Vec3 shift = after - m.bloch_y;
        spread += p * shift * shift.transpose();
    }
    Eigen::SelfAdjointEigenSolver<Mat3> es(spread, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, es.eigenvalues()(2)));
}

std::vector<Vec3> sphere_points(int count) {
    std::vector<Vec3> pts;
    pts.reserve(count);
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
        const double z = 1.0 - (2.0 * i + 1.0) / count;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden * i;
        pts.emplace_back(r * std::cos(phi), r * std::sin(phi), z);
    }
    return pts;
}

DisturbanceReport disturbance(const PairMoments &moments, const DisturbanceOptions &options) {
    const std::vector<Vec3> design = sphere_points(options.design_points);
    std::vector<double> values(design.size());
    for (std::size_t i = 0; i < design.size(); ++i) {
        values[i] = disturbance_at_axis(moments, design[i]);
    }
    std::vector<std::size_t> order(design.size());
    std::iota(order.begin(), order.end(), 0);
    const int n_starts = std::min<int>(options.refine_starts, static_cast<int>(design.size()));
    std::partial_sort(order.begin(), order.begin() + n_starts, order.end(),
                      [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });

    DisturbanceReport best;
    best.value = -1.0;
    for (int s = 0; s < n_starts; ++s) {
        Vec3 n = design[order[s]];
        double value = values[order[s]];
        // pattern search in the tangent plane
        double step = 0.25;
        while (step > options.refine_tolerance) {
            Vec3 u = n.unitOrthogonal();
            Vec3 w = n.cross(u);
            bool improved = false;
            for (const Vec3 &dir : {u, Vec3(-u), w, Vec3(-w)}) {
                const Vec3 trial = (n + std::tan(step) * dir).normalized();
                const double v = disturbance_at_axis(moments, trial);
                if (v > value) {
                    value = v;
                    n = trial;
                    improved = true;
                    break;
                }
            }
            if (!improved) {
                step *= 0.5;
            }
        }
        if (value > best.value) {
            best.value = value;
            best.argmax_axis = n;
        }
    }
    return best;
}

DisturbanceReport disturbance(const StateVector &state, int x, int y, const DisturbanceOptions &options) {
    DisturbanceReport r = disturbance(pair_moments(state, x, y), options);
    r.x = x;
    r.y = y;
    return r;
}

StabilityReport stability_vs_cluster(const StateVector &state, double epsilon, double c_threshold,
                                     int min_distance, const DisturbanceOptions &options, int parallelism) {
    if (!(epsilon > 0.0)) {
        throw ValidationError("epsilon must be positive");
    }
    const int n = state.n_qubits();
    const CovarianceMatrix vcm = build_vcm(state);

    StabilityReport report;
    report.epsilon = epsilon;
    report.c_threshold = c_threshold;
    for (int x = 0; x < n; ++x) {
        for (int y = 0; y < n; ++y) {
            if (x != y && state.distance(x, y) >= min_distance) {
                report.rows.push_back(StabilityRow{x, y, state.distance(x, y), pair_strength(vcm, x, y), 0.0});
            }
        }
    }
    parallel_for(report.rows.size(), parallelism, [&](std::size_t i) {
        StabilityRow &row = report.rows[i];
        row.disturbance = disturbance(state, row.x, row.y, options).value;
    });

    const double bound = c_threshold * std::sqrt(epsilon);
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        const StabilityRow &row = report.rows[i];
        if (row.pair_strength <= epsilon) {
            report.c_calibrated = std::max(report.c_calibrated, row.disturbance / std::sqrt(epsilon));
            if (row.disturbance > bound) {
                report.violations.push_back(i);
            }
        }
    }
    return report;
}

double max_pair_strength(const CovarianceMatrix &vcm) {
    double best = 0.0;
    for (int x = 0; x < vcm.n_qubits(); ++x) {
        for (int y = x + 1; y < vcm.n_qubits(); ++y) {
            best = std::max(best, pair_strength(vcm, x, y));
        }
    }
    return best;
}

ReductionResult iterated_reduction(const StateVector &state, double epsilon, ReductionPolicy policy, Rng &rng) {
    if (!(epsilon > 0.0)) {
        throw ValidationError("epsilon must be positive");
    }
    const int n = state.n_qubits();
    ReductionResult result{0, state, {}, 0.0};
    std::vector<bool> measured(n, false);

    while (true) {
        const CovarianceMatrix vcm = build_vcm(result.final_state);
        // strongest pair with at least one unmeasured site
        double strongest = 0.0;
        int bx = -1, by = -1;
        for (int x = 0; x < n; ++x) {
            for (int y = x + 1; y < n; ++y) {
                const double s = pair_strength(vcm, x, y);
                if (s > strongest && (!measured[x] || !measured[y])) {
                    strongest = s;
                    bx = x;
                    by = y;
                }
            }
        }
        result.final_max_strength = max_pair_strength(vcm);
        if (result.final_max_strength <= epsilon || result.count >= n || bx < 0) {
            break;
        }

        int site = 0;
        Vec3 axis = Vec3::UnitZ();
        if (policy == ReductionPolicy::round_robin_z) {
            site = result.count;
        } else {
            const int partner = measured[bx] ? bx : by;
            site = measured[bx] ? by : bx;
            Eigen::JacobiSVD<Mat3> svd(vcm.block(site, partner), Eigen::ComputeFullU);
            axis = svd.matrixU().col(0).normalized();
        }
        MeasurementResult m = measure_site(result.final_state, site, axis, rng);
        result.final_state = std::move(m.post_state);
        measured[site] = true;
        result.measured_sites.push_back(site);
        ++result.count;
    }
    return result;
}

} // namespace macroent
