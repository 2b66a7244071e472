#include "macroent/noise.hpp"

#include <cmath>
#include <string>

namespace macroent {

std::string_view to_string(NoiseKind kind) {
    switch (kind) {
    case NoiseKind::white:
        return "white";
    case NoiseKind::collective:
        return "collective";
    case NoiseKind::exponential:
        return "exponential";
    }
    return "unknown";
}

std::optional<NoiseKind> noise_kind_from_string(std::string_view name) {
    if (name == "white") {
        return NoiseKind::white;
    }
    if (name == "collective") {
        return NoiseKind::collective;
    }
    if (name == "exponential") {
        return NoiseKind::exponential;
    }
    return std::nullopt;
}

NoiseModel NoiseModel::white(double gamma, const Vec3 &axis) {
    NoiseModel m{NoiseKind::white, gamma, 1.0, axis};
    m.validate();
    return m;
}

NoiseModel NoiseModel::collective(double gamma, const Vec3 &axis) {
    NoiseModel m{NoiseKind::collective, gamma, 1.0, axis};
    m.validate();
    return m;
}

NoiseModel NoiseModel::exponential(double gamma, double xi, const Vec3 &axis) {
    NoiseModel m{NoiseKind::exponential, gamma, xi, axis};
    m.validate();
    return m;
}

void NoiseModel::validate() const {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw ValidationError("noise strength gamma must be positive");
    }
    if (kind == NoiseKind::exponential && (!(xi > 0.0) || !std::isfinite(xi))) {
        throw ValidationError("correlation length xi must be positive");
    }
    if (!(std::abs(axis.norm() - 1.0) <= 1e-12)) {
        throw ValidationError("noise axis must be a unit vector");
    }
}

double NoiseModel::kernel(Geometry geometry, int n, int x, int y) const {
    switch (kind) {
    case NoiseKind::white:
        return x == y ? gamma : 0.0;
    case NoiseKind::collective:
        return gamma;
    case NoiseKind::exponential:
        return gamma * std::exp(-site_distance(geometry, n, x, y) / xi);
    }
    return 0.0;
}

Eigen::MatrixXd NoiseModel::kernel_matrix(int n, Geometry geometry) const {
    validate();
    Eigen::MatrixXd g(n, n);
    for (int x = 0; x < n; ++x) {
        for (int y = 0; y < n; ++y) {
            g(x, y) = kernel(geometry, n, x, y);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g, Eigen::EigenvaluesOnly);
    if (es.eigenvalues()(0) < -1e-12 * gamma * n) {
        throw ValidationError("noise kernel is not positive semidefinite (min eigenvalue " +
                              std::to_string(es.eigenvalues()(0)) + ")");
    }
    return g;
}

NoiseModel NoiseModel::scaled(double factor) const {
    NoiseModel m = *this;
    m.gamma *= factor;
    m.validate();
    return m;
}

} // namespace macroent
