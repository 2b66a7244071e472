#include "macroent/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>

#include "macroent/decoherence.hpp"
#include "macroent/parallel.hpp"

namespace macroent {

namespace {

ScalingPoint compute_point(const StateFamily &family, Quantity quantity, int n, const SweepConfig &config) {
    const StateVector state = generate(family, n);
    switch (quantity) {
    case Quantity::max_fluctuation: {
        FluctuationOptions opts = config.fluctuation;
        opts.seed = derive_seed(config.seed, static_cast<std::uint64_t>(n));
        const FluctuationResult r = max_fluctuation(build_vcm(state), config.estimator, opts);
        return ScalingPoint{n, r.value(config.estimator), 0.0};
    }
    case Quantity::gamma:
        return ScalingPoint{n, gamma_perturbative(state, config.noise), 0.0};
    case Quantity::one_minus_F: {
        const double t = config.gamma_t / config.noise.gamma;
        const GammaReport r = gamma_montecarlo(state, config.noise, t, config.runs,
                                               derive_seed(config.seed, static_cast<std::uint64_t>(n)));
        return ScalingPoint{n, 1.0 - r.fidelity, r.fidelity_stderr};
    }
    case Quantity::delta_T:
        throw ValidationError("delta_T is only defined for Shor instances, not state families");
    }
    throw ValidationError("unknown quantity");
}

} // namespace

std::string_view to_string(Quantity q) {
    switch (q) {
    case Quantity::max_fluctuation:
        return "max_fluctuation";
    case Quantity::gamma:
        return "gamma";
    case Quantity::one_minus_F:
        return "one_minus_F";
    case Quantity::delta_T:
        return "delta_T";
    }
    return "unknown";
}

std::string_view to_string(FluctuationClass c) {
    switch (c) {
    case FluctuationClass::NFS:
        return "NFS";
    case FluctuationClass::intermediate:
        return "intermediate";
    case FluctuationClass::AFS:
        return "AFS";
    }
    return "unknown";
}

ScalingSeries sweep(const StateFamily &family, Quantity quantity, const std::vector<int> &n_list,
                    const SweepConfig &config) {
    for (std::size_t i = 1; i < n_list.size(); ++i) {
        if (n_list[i] <= n_list[i - 1]) {
            throw ValidationError("sweep sizes must be strictly increasing");
        }
    }
    ScalingSeries series;
    series.family = family;
    series.quantity = quantity;
    series.points.resize(n_list.size());

    parallel_for(n_list.size(), config.parallelism, [&](std::size_t i) {
        const int n = n_list[i];
        try {
            series.points[i] = compute_point(family, quantity, n, config);
        } catch (const ValidationError &e) {
            throw ValidationError("sweep " + family.label() + " at N=" + std::to_string(n) + ": " + e.what());
        } catch (const NumericalError &e) {
            throw NumericalError("sweep " + family.label() + " at N=" + std::to_string(n) + ": " + e.what());
        }
    });
    return series;
}

ScalingFit fit_exponent(const ScalingSeries &series) { return fit_exponent(series.points); }

ScalingFit fit_exponent(const std::vector<ScalingPoint> &points) {
    const int m = static_cast<int>(points.size());
    if (m < kMinFitPoints) {
        throw ValidationError("exponent fit needs at least " + std::to_string(kMinFitPoints) + " points");
    }
    for (int i = 0; i < m; ++i) {
        if (!(points[i].value > 0.0)) {
            throw ValidationError("log of nonpositive sample at N=" + std::to_string(points[i].n));
        }
        if (points[i].n <= 0 || (i > 0 && points[i].n <= points[i - 1].n)) {
            throw ValidationError("fit sizes must be positive and strictly increasing");
        }
    }
    double mx = 0.0, my = 0.0;
    for (const auto &p : points) {
        mx += std::log(static_cast<double>(p.n));
        my += std::log(p.value);
    }
    mx /= m;
    my /= m;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto &p : points) {
        const double dx = std::log(static_cast<double>(p.n)) - mx;
        const double dy = std::log(p.value) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    ScalingFit fit;
    fit.n_points = m;
    fit.exponent = sxy / sxx;
    const double intercept = my - fit.exponent * mx;
    fit.prefactor = std::exp(intercept);
    double ssr = 0.0;
    for (const auto &p : points) {
        const double r = std::log(p.value) - (intercept + fit.exponent * std::log(static_cast<double>(p.n)));
        ssr += r * r;
    }
    fit.std_error = std::sqrt(ssr / (m - 2) / sxx);
    fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ssr / syy, 0.0, 1.0) : 1.0;
    return fit;
}

int omega_range(const CovarianceMatrix &vcm, double epsilon) {
    if (!(epsilon > 0.0)) {
        throw ValidationError("epsilon must be positive");
    }
    const int n = vcm.n_qubits();
    int range = 0;
    for (int x = 0; x < n; ++x) {
        for (int y = x + 1; y < n; ++y) {
            if (pair_strength(vcm, x, y) > epsilon) {
                range = std::max(range, site_distance(vcm.geometry(), n, x, y));
            }
        }
    }
    if (range > 0 && range >= max_site_distance(vcm.geometry(), n)) {
        return n;
    }
    return range;
}

int omega_range(const StateVector &state, double epsilon) { return omega_range(build_vcm(state), epsilon); }

FluctuationClass classify_exponent(double exponent, const ClassifyThresholds &thresholds) {
    if (exponent < thresholds.nfs_below) {
        return FluctuationClass::NFS;
    }
    if (exponent > thresholds.afs_above) {
        return FluctuationClass::AFS;
    }
    return FluctuationClass::intermediate;
}

FluctuationClass classify(const ScalingFit &fit, const ClassifyThresholds &thresholds) {
    if (!std::isfinite(fit.exponent)) {
        throw ValidationError("cannot classify a non-finite exponent");
    }
    return classify_exponent(fit.exponent, thresholds);
}

} // namespace macroent
