#include "macroent/correlator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "macroent/parallel.hpp"

namespace macroent {

namespace {

// ops[a][b](k, j) = <k| sigma_a(x) sigma_b(y) |j> with local index j = bit_x + 2 bit_y.
const std::array<std::array<Eigen::Matrix4cd, 3>, 3> &two_site_paulis() {
    static const auto table = [] {
        std::array<std::array<Eigen::Matrix4cd, 3>, 3> t;
        const auto &p = pauli_matrices();
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                for (int k = 0; k < 4; ++k) {
                    for (int j = 0; j < 4; ++j) {
                        t[a][b](k, j) = p[a](k & 1, j & 1) * p[b](k >> 1, j >> 1);
                    }
                }
            }
        }
        return t;
    }();
    return table;
}

Vec3 normalized_or(const Vec3 &v, const Vec3 &fallback) {
    const double n = v.norm();
    return n > 1e-300 ? Vec3(v / n) : fallback;
}

double total_objective(const CovarianceMatrix &vcm, const std::vector<Vec3> &c) {
    return vcm.additive_variance(c);
}

struct AscentResult {
    std::vector<Vec3> coeffs;
    double value;
    int sweeps;
};

AscentResult coordinate_ascent(const CovarianceMatrix &vcm, std::vector<Vec3> c,
                               const FluctuationOptions &options) {
    const int n = vcm.n_qubits();
    double value = total_objective(vcm, c);
    int sweeps = 0;
    for (; sweeps < options.max_sweeps; ++sweeps) {
        const double before = value;
        for (int x = 0; x < n; ++x) {
            const Mat3 a = vcm.block(x, x);
            Vec3 field = Vec3::Zero();
            for (int y = 0; y < n; ++y) {
                if (y != x) {
                    field += vcm.block(x, y) * c[y];
                }
            }
            const Vec3 candidate = solve_unit_quadratic(a, field, c[x]);
            const double f_old = c[x].dot(a * c[x]) + 2.0 * c[x].dot(field);
            const double f_new = candidate.dot(a * candidate) + 2.0 * candidate.dot(field);
            if (f_new > f_old) {
                c[x] = candidate;
            }
        }
        value = total_objective(vcm, c);
        const double gain = value - before;
        if (gain <= options.rel_tolerance * std::max(std::abs(before), 1e-300)) {
            ++sweeps;
            break;
        }
    }
    return AscentResult{std::move(c), value, sweeps};
}

} // namespace

// ---------------------------------------------------------------------------
// CovarianceMatrix

CovarianceMatrix::CovarianceMatrix(int n_qubits, Eigen::MatrixXd entries, Geometry geometry)
    : n_qubits_(n_qubits), entries_(std::move(entries)), geometry_(geometry) {
    if (entries_.rows() != 3 * n_qubits_ || entries_.cols() != 3 * n_qubits_) {
        throw ValidationError("covariance matrix must be 3N x 3N");
    }
    if ((entries_ - entries_.transpose()).cwiseAbs().maxCoeff() > 1e-10) {
        throw NumericalError("covariance matrix is not symmetric within 1e-10");
    }
}

Eigen::MatrixXd CovarianceMatrix::axis_block(const Vec3 &axis) const {
    Eigen::MatrixXd out(n_qubits_, n_qubits_);
    for (int x = 0; x < n_qubits_; ++x) {
        for (int y = 0; y < n_qubits_; ++y) {
            out(x, y) = axis.dot(block(x, y) * axis);
        }
    }
    return out;
}

double CovarianceMatrix::additive_variance(const std::vector<Vec3> &coeffs) const {
    if (static_cast<int>(coeffs.size()) != n_qubits_) {
        throw ValidationError("additive_variance: need one coefficient vector per site");
    }
    Eigen::VectorXd c(3 * n_qubits_);
    for (int x = 0; x < n_qubits_; ++x) {
        c.segment<3>(3 * x) = coeffs[x];
    }
    return c.dot(entries_ * c);
}

Eigen::VectorXd CovarianceMatrix::eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(entries_, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
        throw NumericalError("covariance eigensolver failed");
    }
    return es.eigenvalues();
}

double CovarianceMatrix::largest_eigenvalue() const {
    const Eigen::VectorXd ev = eigenvalues();
    return ev(ev.size() - 1);
}

// ---------------------------------------------------------------------------

CovarianceMatrix build_vcm(const StateVector &state, int parallelism) {
    const int n = state.n_qubits();
    const auto amps = state.amplitudes();

    std::vector<Vec3> bloch(n);
    for (int x = 0; x < n; ++x) {
        bloch[x] = bloch_vector(state, x);
    }

    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(3 * n, 3 * n);
    for (int x = 0; x < n; ++x) {
        // 1/2 {sigma_a, sigma_b} = delta_ab on one site
        v.block<3, 3>(3 * x, 3 * x) = Mat3::Identity() - bloch[x] * bloch[x].transpose();
    }

    const auto &ops = two_site_paulis();
    parallel_for(static_cast<std::size_t>(n), parallelism, [&](std::size_t task) {
        const int x = static_cast<int>(task);
        const int n_partners = n - x - 1;
        if (n_partners <= 0) {
            return;
        }
        const std::size_t mx = std::size_t{1} << x;
        // rho[y - x - 1] over local index bit_x + 2 bit_y, upper triangle
        std::vector<Eigen::Matrix4cd> rho(n_partners, Eigen::Matrix4cd::Zero());

        for (std::size_t base = 0; base < amps.size(); base += 2 * mx) {
            for (std::size_t i0 = base; i0 < base + mx; ++i0) {
                const Complex a = amps[i0];
                const Complex b = amps[i0 | mx];
                const double na = std::norm(a);
                const double nb = std::norm(b);
                const Complex ab = a * std::conj(b);
                for (int y = x + 1; y < n; ++y) {
                    const std::size_t my = std::size_t{1} << y;
                    Eigen::Matrix4cd &r = rho[y - x - 1];
                    if (i0 & my) {
                        r(2, 2) += na;
                        r(3, 3) += nb;
                        r(2, 3) += ab;
                    } else {
                        r(0, 0) += na;
                        r(1, 1) += nb;
                        r(0, 1) += ab;
                        const Complex c = amps[i0 | my];
                        const Complex d = amps[i0 | mx | my];
                        r(0, 2) += a * std::conj(c);
                        r(0, 3) += a * std::conj(d);
                        r(1, 2) += b * std::conj(c);
                        r(1, 3) += b * std::conj(d);
                    }
                }
            }
        }

        for (int y = x + 1; y < n; ++y) {
            Eigen::Matrix4cd r = rho[y - x - 1];
            for (int j = 0; j < 4; ++j) {
                for (int k = j + 1; k < 4; ++k) {
                    r(k, j) = std::conj(r(j, k));
                }
            }
            Mat3 cov;
            for (int a = 0; a < 3; ++a) {
                for (int b = 0; b < 3; ++b) {
                    // <O> = sum_jk rho_jk O_kj
                    const double corr = r.cwiseProduct(ops[a][b].transpose()).sum().real();
                    cov(a, b) = corr - bloch[x](a) * bloch[y](b);
                }
            }
            v.block<3, 3>(3 * x, 3 * y) = cov;
            v.block<3, 3>(3 * y, 3 * x) = cov.transpose();
        }
    });
    return CovarianceMatrix(n, std::move(v), state.geometry());
}

Vec3 solve_unit_quadratic(const Mat3 &a, const Vec3 &b, const Vec3 &previous) {
    Eigen::SelfAdjointEigenSolver<Mat3> es(a);
    // descending order
    const Vec3 ev = es.eigenvalues().reverse();
    const Mat3 q = es.eigenvectors().rowwise().reverse();
    const Vec3 bt = q.transpose() * b;
    const double scale = std::max({std::abs(ev(0)), std::abs(ev(2)), b.norm(), 1e-300});
    const double degenerate_tol = 1e-12 * scale;

    // Top eigenspace S and the field component inside it.
    int top = 1;
    while (top < 3 && ev(0) - ev(top) <= degenerate_tol) {
        ++top;
    }
    double beta2 = 0.0;
    for (int i = 0; i < top; ++i) {
        beta2 += bt(i) * bt(i);
    }

    auto secular = [&](double mu) {
        double s = 0.0;
        for (int i = 0; i < 3; ++i) {
            const double d = mu - ev(i);
            if (bt(i) != 0.0) {
                s += bt(i) * bt(i) / (d * d);
            }
        }
        return s;
    };
    auto from_mu = [&](double mu) {
        Vec3 ct;
        for (int i = 0; i < 3; ++i) {
            ct(i) = bt(i) / (mu - ev(i));
        }
        return ct;
    };

    const double bnorm = b.norm();
    if (bnorm <= degenerate_tol) {
        // Pure eigenproblem: keep the previous direction if it is already
        // optimal, otherwise take the top eigenvector.
        const Vec3 top_vec = q.col(0);
        const double prev_val = previous.dot(a * previous);
        if (prev_val >= ev(0) - degenerate_tol) {
            return previous;
        }
        return previous.dot(top_vec) < 0.0 ? Vec3(-top_vec) : top_vec;
    }

    double lo = ev(0);
    if (beta2 <= degenerate_tol * degenerate_tol) {
        // Hard case candidate: mu = top eigenvalue if the rest fits in the ball.
        Vec3 ct = Vec3::Zero();
        double used = 0.0;
        for (int i = top; i < 3; ++i) {
            ct(i) = bt(i) / (ev(0) - ev(i));
            used += ct(i) * ct(i);
        }
        if (used <= 1.0) {
            const Vec3 prev_t = q.transpose() * previous;
            Vec3 fill = Vec3::Zero();
            for (int i = 0; i < top; ++i) {
                fill(i) = prev_t(i);
            }
            ct += std::sqrt(1.0 - used) * normalized_or(fill, Vec3::UnitX());
            return normalized_or(q * ct, previous);
        }
    } else {
        lo = ev(0) + std::sqrt(beta2); // secular(mu) >= beta2 / (mu - ev0)^2
    }

    // secular(mu) decreases from > 1 at lo to <= 1 at hi
    double hi = ev(0) + bnorm;
    if (secular(lo) < 1.0) {
        lo = ev(0); // rounding at the bracket edge
    }
    for (int it = 0; it < 200 && hi - lo > 1e-16 * std::max(1.0, std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= ev(0) || secular(mid) > 1.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return normalized_or(q * from_mu(0.5 * (lo + hi)), previous);
}

double FluctuationResult::value(FluctuationMethod method) const {
    return method == FluctuationMethod::oracle ? oracle_max : relaxed_max;
}

double FluctuationResult::discrepancy() const {
    if (relaxed_max <= 0.0) {
        return 0.0;
    }
    return std::abs(relaxed_max - oracle_max) / relaxed_max;
}

FluctuationResult max_fluctuation(const CovarianceMatrix &vcm, FluctuationMethod method,
                                  const FluctuationOptions &options) {
    const int n = vcm.n_qubits();
    FluctuationResult out;
    out.n_qubits = n;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(vcm.entries());
    if (es.info() != Eigen::Success) {
        throw NumericalError("covariance eigensolver failed");
    }
    out.e_max = es.eigenvalues()(3 * n - 1);
    out.relaxed_max = n * out.e_max;
    if (method == FluctuationMethod::relaxed) {
        return out;
    }

    std::vector<std::vector<Vec3>> starts;
    {
        const Eigen::VectorXd top = es.eigenvectors().col(3 * n - 1);
        std::vector<Vec3> s(n);
        for (int x = 0; x < n; ++x) {
            s[x] = normalized_or(top.segment<3>(3 * x), Vec3::UnitZ());
        }
        starts.push_back(std::move(s));
    }
    for (int axis = 0; axis < 3; ++axis) {
        starts.emplace_back(n, Vec3::Unit(axis));
    }
    Rng rng(derive_seed(options.seed, static_cast<std::uint64_t>(n)));
    std::normal_distribution<double> normal(0.0, 1.0);
    while (static_cast<int>(starts.size()) < options.multistart) {
        std::vector<Vec3> s(n);
        for (int x = 0; x < n; ++x) {
            Vec3 g;
            do {
                g = Vec3(normal(rng), normal(rng), normal(rng));
            } while (g.norm() < 1e-8);
            s[x] = g.normalized();
        }
        starts.push_back(std::move(s));
    }

    out.oracle_max = -std::numeric_limits<double>::infinity();
    for (auto &start : starts) {
        AscentResult r = coordinate_ascent(vcm, std::move(start), options);
        out.sweeps += r.sweeps;
        if (r.value > out.oracle_max) {
            out.oracle_max = r.value;
            out.argmax_coeffs = std::move(r.coeffs);
        }
    }
    return out;
}

FluctuationResult max_fluctuation(const StateVector &state, FluctuationMethod method,
                                  const FluctuationOptions &options) {
    return max_fluctuation(build_vcm(state), method, options);
}

double pair_strength(const CovarianceMatrix &vcm, int x, int y) {
    const int n = vcm.n_qubits();
    if (x < 0 || y < 0 || x >= n || y >= n || x == y) {
        throw ValidationError("pair_strength needs two distinct valid sites");
    }
    Eigen::JacobiSVD<Mat3> svd(vcm.block(x, y));
    return svd.singularValues()(0);
}

double pair_strength(const StateVector &state, int x, int y) {
    const PairMoments m = pair_moments(state, x, y);
    Eigen::JacobiSVD<Mat3> svd(m.covariance());
    return svd.singularValues()(0);
}

MerminResult mermin_value(const StateVector &state) {
    const int n = state.n_qubits();
    if (n < 2) {
        throw ValidationError("mermin_value needs N >= 2");
    }
    // X + iY = 2|0><1| per site, so prod_x (X + iY) = 2^N |0...0><1...1| and
    // its expectation is 2^N conj(psi_0) psi_{1...1}; the X - iY product is
    // the hermitian conjugate.
    const Complex raise = std::ldexp(1.0, n) * std::conj(state[0]) * state[state.dim() - 1];
    const Complex lower = std::ldexp(1.0, n) * std::conj(state[state.dim() - 1]) * state[0];
    const double value = 0.5 * (raise + lower).real();
    const double bound = n % 2 == 0 ? std::ldexp(1.0, n / 2) : std::ldexp(1.0, (n - 1) / 2);
    return MerminResult{value, bound, value / bound};
}

} // namespace macroent
