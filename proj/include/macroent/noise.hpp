#pragma once

// Classical Gaussian dephasing noise with a tunable spatial correlation
// kernel g(x, y):
//   white:        gamma * [x == y]
//   collective:   gamma for every pair
//   exponential:  gamma * exp(-d(x, y) / xi)

#include <optional>
#include <string_view>

#include <Eigen/Dense>

#include "macroent/statevec.hpp"

namespace macroent {

enum class NoiseKind { white, collective, exponential };

std::string_view to_string(NoiseKind kind);
std::optional<NoiseKind> noise_kind_from_string(std::string_view name);

struct NoiseModel {
    NoiseKind kind = NoiseKind::white;
    double gamma = 1.0;
    double xi = 1.0;
    Vec3 axis = Vec3::UnitZ();

    static NoiseModel white(double gamma, const Vec3 &axis = Vec3::UnitZ());
    static NoiseModel collective(double gamma, const Vec3 &axis = Vec3::UnitZ());
    static NoiseModel exponential(double gamma, double xi, const Vec3 &axis = Vec3::UnitZ());

    // Throws ValidationError for gamma <= 0, xi <= 0 or a non-unit axis.
    void validate() const;

    double kernel(Geometry geometry, int n, int x, int y) const;
    // N x N kernel matrix; rejects kernels with an eigenvalue below
    // -1e-12 * gamma * N, which cannot be sampled as a Gaussian covariance.
    Eigen::MatrixXd kernel_matrix(int n, Geometry geometry) const;

    NoiseModel scaled(double factor) const;
};

} // namespace macroent
