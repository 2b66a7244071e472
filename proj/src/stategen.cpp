#include "macroent/stategen.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <limits>
#include <cmath>
#include <numeric>
#include <sstream>

namespace macroent {

namespace {

constexpr std::array<std::pair<FamilyKind, std::string_view>, 8> kFamilyNames{{
    {FamilyKind::product_random, "product_random"},
    {FamilyKind::plus_all, "plus_all"},
    {FamilyKind::cat, "cat"},
    {FamilyKind::w, "w"},
    {FamilyKind::bell_pair, "bell_pair"},
    {FamilyKind::dicke_k, "dicke_k"},
    {FamilyKind::ising_ground, "ising_ground"},
    {FamilyKind::haar_random, "haar_random"},
}};

std::vector<Complex> zeros(int n) {
    check_qubit_count(n);
    return std::vector<Complex>(std::size_t{1} << n, Complex{0.0, 0.0});
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

// v <- (v + P v)/2 with P = prod_x X_x, i.e. index i <-> ~i.
void project_even(std::span<double> v) {
    const std::size_t mask = v.size() - 1;
    for (std::size_t i = 0; i < v.size() / 2; ++i) {
        const double avg = 0.5 * (v[i] + v[i ^ mask]);
        v[i] = avg;
        v[i ^ mask] = avg;
    }
}

} // namespace

std::string_view to_string(FamilyKind kind) {
    for (const auto &[k, name] : kFamilyNames) {
        if (k == kind) {
            return name;
        }
    }
    return "unknown";
}

std::optional<FamilyKind> family_kind_from_string(std::string_view name) {
    for (const auto &[k, n] : kFamilyNames) {
        if (n == name) {
            return k;
        }
    }
    // aliases
    if (name == "product") {
        return FamilyKind::product_random;
    }
    if (name == "dicke") {
        return FamilyKind::dicke_k;
    }
    if (name == "ising") {
        return FamilyKind::ising_ground;
    }
    return std::nullopt;
}

std::string StateFamily::label() const {
    std::ostringstream os;
    os << to_string(kind);
    switch (kind) {
    case FamilyKind::ising_ground:
        os << "(J=" << J << ",h=" << h << ")";
        break;
    case FamilyKind::dicke_k:
        os << "(k=" << k << ")";
        break;
    case FamilyKind::product_random:
    case FamilyKind::haar_random:
        os << "(seed=" << seed << ")";
        break;
    default:
        break;
    }
    return os.str();
}

StateVector generate(const StateFamily &family, int n) {
    switch (family.kind) {
    case FamilyKind::product_random:
        return gen_product_random(n, family.seed, family.geometry);
    case FamilyKind::plus_all:
        return gen_plus_all(n, family.geometry);
    case FamilyKind::cat:
        return gen_cat(n, family.geometry);
    case FamilyKind::w:
        return gen_w(n, family.geometry);
    case FamilyKind::bell_pair:
        return gen_bell_pair(n, family.geometry);
    case FamilyKind::dicke_k:
        return gen_dicke(n, family.k, family.geometry);
    case FamilyKind::ising_ground:
        return gen_ising_ground(n, family.J, family.h).with_geometry(family.geometry);
    case FamilyKind::haar_random:
        return gen_haar_random(n, family.seed, family.geometry);
    }
    throw ValidationError("unknown state family");
}

StateVector gen_cat(int n, Geometry geometry) {
    auto amps = zeros(n);
    amps.front() = M_SQRT1_2;
    amps.back() = M_SQRT1_2;
    return StateVector(n, std::move(amps), geometry);
}

StateVector gen_w(int n, Geometry geometry) { return gen_dicke(n, 1, geometry); }

StateVector gen_bell_pair(int n, Geometry geometry) {
    if (n < 2) {
        throw ValidationError("bell_pair needs N >= 2");
    }
    auto amps = zeros(n);
    amps[std::size_t{1}] = M_SQRT1_2;                  // site 0 excited: |10...0>
    amps[std::size_t{1} << (n - 1)] = M_SQRT1_2;       // site N-1 excited: |0...01>
    return StateVector(n, std::move(amps), geometry);
}

StateVector gen_plus_all(int n, Geometry geometry) {
    auto amps = zeros(n);
    const double a = std::pow(2.0, -0.5 * n);
    std::fill(amps.begin(), amps.end(), Complex{a, 0.0});
    return StateVector::normalized(n, std::move(amps), geometry);
}

StateVector gen_dicke(int n, int k, Geometry geometry) {
    if (k < 0 || k > n) {
        throw ValidationError("dicke excitation number must lie in [0, N]");
    }
    auto amps = zeros(n);
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if (std::popcount(i) == k) {
            amps[i] = 1.0;
        }
    }
    return StateVector::normalized(n, std::move(amps), geometry);
}

StateVector gen_product_random(int n, std::uint64_t seed, Geometry geometry) {
    check_qubit_count(n);
    std::vector<Complex> amps{Complex{1.0, 0.0}};
    amps.reserve(std::size_t{1} << n);
    for (int site = 0; site < n; ++site) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(site)));
        std::uniform_real_distribution<double> uniform(0.0, 1.0);
        // uniform on the sphere: cos(theta) uniform in [-1, 1]
        const double cos_theta = 2.0 * uniform(rng) - 1.0;
        const double phi = 2.0 * M_PI * uniform(rng);
        const double theta = std::acos(cos_theta);
        const Complex c0{std::cos(0.5 * theta), 0.0};
        const Complex c1 = std::polar(std::sin(0.5 * theta), phi);
        // new site is the next most significant bit
        std::vector<Complex> next(amps.size() * 2);
        for (std::size_t i = 0; i < amps.size(); ++i) {
            next[i] = amps[i] * c0;
            next[i + amps.size()] = amps[i] * c1;
        }
        amps = std::move(next);
    }
    return StateVector::normalized(n, std::move(amps), geometry);
}

StateVector gen_haar_random(int n, std::uint64_t seed, Geometry geometry) {
    auto amps = zeros(n);
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(n)));
    std::normal_distribution<double> normal(0.0, 1.0);
    for (Complex &a : amps) {
        const double re = normal(rng);
        const double im = normal(rng);
        a = Complex{re, im};
    }
    return StateVector::normalized(n, std::move(amps), geometry);
}

// ---------------------------------------------------------------------------
// Ising

void ising_apply(int n, double J, double h, std::span<const double> in, std::span<double> out) {
    const std::size_t dim = std::size_t{1} << n;
    const int bonds = n == 2 ? 1 : (n == 1 ? 0 : n);
    for (std::size_t i = 0; i < dim; ++i) {
        // diagonal: -J sum_bonds s_x s_{x+1}; aligned neighbours contribute -J
        int aligned = 0;
        for (int x = 0; x < bonds; ++x) {
            const int y = (x + 1) % n;
            aligned += (((i >> x) ^ (i >> y)) & 1U) == 0 ? 1 : -1;
        }
        double acc = -J * aligned * in[i];
        for (int x = 0; x < n; ++x) {
            acc -= h * in[i ^ (std::size_t{1} << x)];
        }
        out[i] = acc;
    }
}

double ising_energy(const StateVector &state, double J, double h) {
    const int n = state.n_qubits();
    std::vector<double> re(state.dim()), im(state.dim()), hre(state.dim()), him(state.dim());
    for (std::size_t i = 0; i < state.dim(); ++i) {
        re[i] = state[i].real();
        im[i] = state[i].imag();
    }
    ising_apply(n, J, h, re, hre);
    ising_apply(n, J, h, im, him);
    return dot(re, hre) + dot(im, him);
}

GroundState ising_ground_state(int n, double J, double h, const EigenSolverOptions &options) {
    check_qubit_count(n);
    if (n > kIsingMaxQubits) {
        throw ValidationError("ising_ground is limited to N <= " + std::to_string(kIsingMaxQubits));
    }
    if (!(J > 0.0) || !(h > 0.0)) {
        throw ValidationError("ising_ground needs J > 0 and h > 0");
    }
    const std::size_t dim = std::size_t{1} << n;

    // Start from |+...+>, which is parity-even and has positive overlap with
    // the (positive, Perron-Frobenius) ground state.
    std::vector<double> start(dim, 1.0 / std::sqrt(static_cast<double>(dim)));
    std::vector<double> w(dim);

    int matvecs = 0;
    double residual = std::numeric_limits<double>::infinity();
    double energy = 0.0;
    const int m_max = std::max(2, std::min<int>(options.krylov_dim, static_cast<int>(dim)));

    while (matvecs < options.max_iterations) {
        std::vector<std::vector<double>> basis;
        basis.push_back(start);
        std::vector<double> alpha, beta;

        for (int j = 0; j < m_max && matvecs < options.max_iterations; ++j) {
            ising_apply(n, J, h, basis[j], w);
            ++matvecs;
            const double a = dot(basis[j], w);
            alpha.push_back(a);
            // full reorthogonalisation, twice
            for (int pass = 0; pass < 2; ++pass) {
                for (const auto &q : basis) {
                    const double c = dot(q, w);
                    for (std::size_t i = 0; i < dim; ++i) {
                        w[i] -= c * q[i];
                    }
                }
            }
            project_even(w);
            const double b = std::sqrt(dot(w, w));
            if (b < 1e-13 || j + 1 == m_max) {
                break; // invariant subspace found or restart length reached
            }
            beta.push_back(b);
            std::vector<double> next(dim);
            for (std::size_t i = 0; i < dim; ++i) {
                next[i] = w[i] / b;
            }
            basis.push_back(std::move(next));
        }

        const int m = static_cast<int>(alpha.size());
        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
        for (int j = 0; j < m; ++j) {
            t(j, j) = alpha[j];
            if (j + 1 < m) {
                t(j, j + 1) = t(j + 1, j) = beta[j];
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri(t);
        const Eigen::VectorXd y = tri.eigenvectors().col(0);
        energy = tri.eigenvalues()(0);

        std::fill(start.begin(), start.end(), 0.0);
        for (int j = 0; j < m; ++j) {
            for (std::size_t i = 0; i < dim; ++i) {
                start[i] += y(j) * basis[j][i];
            }
        }
        project_even(start);
        const double norm = std::sqrt(dot(start, start));
        for (double &v : start) {
            v /= norm;
        }

        ising_apply(n, J, h, start, w);
        ++matvecs;
        energy = dot(start, w);
        double r2 = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            const double r = w[i] - energy * start[i];
            r2 += r * r;
        }
        residual = std::sqrt(r2);
        if (residual < options.residual_tolerance) {
            break;
        }
    }
    if (!(residual < options.residual_tolerance)) {
        throw NumericalError("ising ground state: Lanczos did not converge (residual " +
                             std::to_string(residual) + " after " + std::to_string(matvecs) +
                             " matvecs)");
    }

    // Fix the global phase so amplitudes are positive.
    const double total = std::accumulate(start.begin(), start.end(), 0.0);
    const double sign = total < 0.0 ? -1.0 : 1.0;
    std::vector<Complex> amps(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        amps[i] = sign * start[i];
    }
    return GroundState{StateVector::normalized(n, std::move(amps), Geometry::ring), energy, residual,
                       matvecs};
}

StateVector gen_ising_ground(int n, double J, double h) {
    return ising_ground_state(n, J, h).state;
}

} // namespace macroent
