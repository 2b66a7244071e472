#include "macroent/statevec.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <string>

namespace macroent {

namespace {

std::optional<int> g_cap_override;
std::mutex g_cap_mutex;

int cap_from_env() {
    const char *env = std::getenv("MACROENT_QUBIT_CAP");
    if (env == nullptr || *env == '\0') {
        return kDefaultQubitCap;
    }
    char *end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1 || v > 40) {
        throw ValidationError("MACROENT_QUBIT_CAP must be an integer in [1, 40], got '" +
                              std::string(env) + "'");
    }
    return static_cast<int>(v);
}

// Applies an arbitrary 2x2 matrix at `site`; no norm bookkeeping.
void apply_matrix(std::vector<Complex> &amps, int site, const Mat2c &m) {
    const std::size_t stride = std::size_t{1} << site;
    const Complex m00 = m(0, 0), m01 = m(0, 1), m10 = m(1, 0), m11 = m(1, 1);
    for (std::size_t base = 0; base < amps.size(); base += 2 * stride) {
        for (std::size_t i = base; i < base + stride; ++i) {
            const Complex a0 = amps[i];
            const Complex a1 = amps[i + stride];
            amps[i] = m00 * a0 + m01 * a1;
            amps[i + stride] = m10 * a0 + m11 * a1;
        }
    }
}

double sum_norm(std::span<const Complex> amps) {
    double s = 0.0;
    for (const Complex &a : amps) {
        s += std::norm(a);
    }
    return s;
}

Mat2c projector(const Vec3 &axis, int outcome) {
    const Mat2c n_sigma = SiteOperator(axis).matrix();
    return 0.5 * (Mat2c::Identity() + static_cast<double>(outcome) * n_sigma);
}

} // namespace

int qubit_cap() {
    std::lock_guard lock(g_cap_mutex);
    if (g_cap_override) {
        return *g_cap_override;
    }
    return cap_from_env();
}

void set_qubit_cap(std::optional<int> cap) {
    std::lock_guard lock(g_cap_mutex);
    g_cap_override = cap;
}

void check_qubit_count(int n) {
    const int cap = qubit_cap();
    if (n < 1 || n > cap) {
        throw ValidationError("qubit count " + std::to_string(n) + " outside [1, " +
                              std::to_string(cap) + "]");
    }
}

int site_distance(Geometry geometry, int n, int x, int y) {
    const int d = std::abs(x - y);
    return geometry == Geometry::ring ? std::min(d, n - d) : d;
}

int max_site_distance(Geometry geometry, int n) {
    if (n < 2) {
        return 0;
    }
    return geometry == Geometry::ring ? n / 2 : n - 1;
}

// ---------------------------------------------------------------------------
// StateVector

StateVector::StateVector(int n_qubits, std::vector<Complex> amplitudes, Geometry geometry)
    : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)), geometry_(geometry) {
    check_qubit_count(n_qubits_);
    if (amplitudes_.size() != (std::size_t{1} << n_qubits_)) {
        throw ValidationError("amplitude count " + std::to_string(amplitudes_.size()) +
                              " does not match 2^" + std::to_string(n_qubits_));
    }
    const double n2 = norm_squared();
    if (!(std::abs(n2 - 1.0) <= kNormTolerance)) {
        throw ValidationError("amplitudes have norm^2 " + std::to_string(n2) + ", expected 1");
    }
}

StateVector StateVector::normalized(int n_qubits, std::vector<Complex> amplitudes, Geometry geometry) {
    const double norm = std::sqrt(sum_norm(amplitudes));
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw NumericalError("cannot normalise a zero or non-finite amplitude vector");
    }
    for (Complex &a : amplitudes) {
        a /= norm;
    }
    return StateVector(n_qubits, std::move(amplitudes), geometry);
}

StateVector StateVector::with_geometry(Geometry geometry) const {
    StateVector out = *this;
    out.geometry_ = geometry;
    return out;
}

double StateVector::norm_squared() const { return sum_norm(amplitudes_); }

void StateVector::check_site(int site) const {
    if (site < 0 || site >= n_qubits_) {
        throw ValidationError("site " + std::to_string(site) + " out of range for N=" +
                              std::to_string(n_qubits_));
    }
}

void StateVector::check_norm() const {
    const double n2 = norm_squared();
    if (!(std::abs(n2 - 1.0) <= kNormTolerance)) {
        throw NumericalError("state norm^2 " + std::to_string(n2) + " deviates from 1");
    }
}

void StateVector::apply_one_qubit_inplace(int site, const Mat2c &u) {
    check_site(site);
    if ((u.adjoint() * u - Mat2c::Identity()).norm() > 1e-10) {
        throw ValidationError("single-qubit gate is not unitary within 1e-10");
    }
    apply_matrix(amplitudes_, site, u);
    check_norm();
}

void StateVector::apply_controlled_phase_inplace(int control, int target, double theta) {
    check_site(control);
    check_site(target);
    if (control == target) {
        throw ValidationError("controlled phase needs distinct sites");
    }
    const std::size_t mask = (std::size_t{1} << control) | (std::size_t{1} << target);
    const Complex phase = std::polar(1.0, theta);
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
        if ((i & mask) == mask) {
            amplitudes_[i] *= phase;
        }
    }
}

void StateVector::apply_swap_inplace(int a, int b) {
    check_site(a);
    check_site(b);
    if (a == b) {
        return;
    }
    const std::size_t ma = std::size_t{1} << a;
    const std::size_t mb = std::size_t{1} << b;
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
        // visit each (bit a = 1, bit b = 0) index once and swap with its partner
        if ((i & ma) && !(i & mb)) {
            std::swap(amplitudes_[i], amplitudes_[(i ^ ma) | mb]);
        }
    }
}

void StateVector::apply_permutation_inplace(std::span<const std::size_t> perm) {
    if (perm.size() != amplitudes_.size()) {
        throw ValidationError("permutation size does not match state dimension");
    }
    std::vector<Complex> out(amplitudes_.size(), Complex{0.0, 0.0});
    std::vector<bool> hit(amplitudes_.size(), false);
    for (std::size_t i = 0; i < perm.size(); ++i) {
        const std::size_t j = perm[i];
        if (j >= out.size() || hit[j]) {
            throw ValidationError("index map is not a permutation");
        }
        hit[j] = true;
        out[j] = amplitudes_[i];
    }
    amplitudes_ = std::move(out);
    check_norm();
}

// ---------------------------------------------------------------------------
// SiteOperator

SiteOperator::SiteOperator(const Vec3 &coeffs) : coeffs_(coeffs) {
    if (!(std::abs(coeffs_.norm() - 1.0) <= 1e-12)) {
        throw ValidationError("site operator coefficients must have unit norm");
    }
}

SiteOperator SiteOperator::along(const Vec3 &direction) {
    const double n = direction.norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw ValidationError("site operator direction must be nonzero and finite");
    }
    return SiteOperator(direction / n);
}

Mat2c SiteOperator::matrix() const {
    const auto &p = pauli_matrices();
    return coeffs_(0) * p[0] + coeffs_(1) * p[1] + coeffs_(2) * p[2];
}

const std::array<Mat2c, 3> &pauli_matrices() {
    static const std::array<Mat2c, 3> paulis = [] {
        const Complex i{0.0, 1.0};
        Mat2c sx, sy, sz;
        sx << 0.0, 1.0, 1.0, 0.0;
        sy << 0.0, -i, i, 0.0;
        sz << 1.0, 0.0, 0.0, -1.0;
        return std::array<Mat2c, 3>{sx, sy, sz};
    }();
    return paulis;
}

// ---------------------------------------------------------------------------
// Free functions

StateVector make_basis_state(int n, std::string_view bits, Geometry geometry) {
    check_qubit_count(n);
    if (bits.size() != static_cast<std::size_t>(n)) {
        throw ValidationError("bitstring length " + std::to_string(bits.size()) +
                              " does not match N=" + std::to_string(n));
    }
    std::size_t index = 0;
    for (std::size_t site = 0; site < bits.size(); ++site) {
        if (bits[site] == '1') {
            index |= std::size_t{1} << site;
        } else if (bits[site] != '0') {
            throw ValidationError("bitstring may only contain '0' and '1'");
        }
    }
    std::vector<Complex> amps(std::size_t{1} << n, Complex{0.0, 0.0});
    amps[index] = 1.0;
    return StateVector(n, std::move(amps), geometry);
}

StateVector apply_one_qubit(const StateVector &state, int site, const Mat2c &u) {
    StateVector out = state;
    out.apply_one_qubit_inplace(site, u);
    return out;
}

Vec3 bloch_vector(const StateVector &state, int site) {
    if (site < 0 || site >= state.n_qubits()) {
        throw ValidationError("site out of range");
    }
    const auto amps = state.amplitudes();
    const std::size_t stride = std::size_t{1} << site;
    double rho00 = 0.0, rho11 = 0.0;
    Complex rho01{0.0, 0.0};
    for (std::size_t base = 0; base < amps.size(); base += 2 * stride) {
        for (std::size_t i = base; i < base + stride; ++i) {
            const Complex a0 = amps[i];
            const Complex a1 = amps[i + stride];
            rho00 += std::norm(a0);
            rho11 += std::norm(a1);
            rho01 += a0 * std::conj(a1);
        }
    }
    return Vec3(2.0 * rho01.real(), -2.0 * rho01.imag(), rho00 - rho11);
}

double expect_site(const StateVector &state, int site, const SiteOperator &op) {
    return op.coeffs().dot(bloch_vector(state, site));
}

PairMoments pair_moments(const StateVector &state, int x, int y) {
    const int n = state.n_qubits();
    if (x < 0 || y < 0 || x >= n || y >= n || x == y) {
        throw ValidationError("pair_moments needs two distinct valid sites");
    }
    const std::size_t mx = std::size_t{1} << x;
    const std::size_t my = std::size_t{1} << y;
    const auto amps = state.amplitudes();

    // Reduced density matrix over local index j = bit_x + 2 * bit_y.
    Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if (i & (mx | my)) {
            continue;
        }
        const std::array<Complex, 4> c{amps[i], amps[i | mx], amps[i | my], amps[i | mx | my]};
        for (int j = 0; j < 4; ++j) {
            for (int k = 0; k < 4; ++k) {
                rho(j, k) += c[j] * std::conj(c[k]);
            }
        }
    }

    const auto &p = pauli_matrices();
    PairMoments out;
    // sigma_a on x is the low bit of the local index, so op = kron(I_y, sigma_a)
    for (int a = 0; a < 3; ++a) {
        Eigen::Matrix4cd ox = Eigen::Matrix4cd::Zero();
        Eigen::Matrix4cd oy = Eigen::Matrix4cd::Zero();
        for (int r = 0; r < 4; ++r) {
            for (int c = 0; c < 4; ++c) {
                if ((r >> 1) == (c >> 1)) {
                    ox(r, c) = p[a](r & 1, c & 1);
                }
                if ((r & 1) == (c & 1)) {
                    oy(r, c) = p[a](r >> 1, c >> 1);
                }
            }
        }
        // rho_jk = c_j c_k^*, so <O> = sum_jk rho_jk O_kj
        out.bloch_x(a) = (rho.cwiseProduct(ox.transpose())).sum().real();
        out.bloch_y(a) = (rho.cwiseProduct(oy.transpose())).sum().real();
    }
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            Eigen::Matrix4cd o;
            for (int r = 0; r < 4; ++r) {
                for (int c = 0; c < 4; ++c) {
                    o(r, c) = p[a](r & 1, c & 1) * p[b](r >> 1, c >> 1);
                }
            }
            out.corr(a, b) = (rho.cwiseProduct(o.transpose())).sum().real();
        }
    }
    return out;
}

double covar_pair_sym(const StateVector &state, int x, const SiteOperator &a, int y,
                      const SiteOperator &b) {
    const int n = state.n_qubits();
    if (x < 0 || y < 0 || x >= n || y >= n) {
        throw ValidationError("covar_pair_sym: site out of range");
    }
    // Direct route: apply the operators to copies of the amplitude array.
    std::vector<Complex> a_psi(state.amplitudes().begin(), state.amplitudes().end());
    std::vector<Complex> b_psi = a_psi;
    apply_matrix(a_psi, x, a.matrix());
    apply_matrix(b_psi, y, b.matrix());
    Complex ab{0.0, 0.0};
    for (std::size_t i = 0; i < a_psi.size(); ++i) {
        ab += std::conj(a_psi[i]) * b_psi[i];
    }
    // a, b hermitian: <psi|A B|psi> = <A psi|B psi>, and the anticommutator
    // mean is its real part.
    const double mean_a = expect_site(state, x, a);
    const double mean_b = expect_site(state, y, b);
    return ab.real() - mean_a * mean_b;
}

std::array<MeasurementBranch, 2> measure_branches(const StateVector &state, int site, const Vec3 &axis) {
    if (site < 0 || site >= state.n_qubits()) {
        throw ValidationError("measure: site out of range");
    }
    const Vec3 bloch = bloch_vector(state, site);
    const Vec3 n = SiteOperator(axis).coeffs();
    std::array<MeasurementBranch, 2> out{MeasurementBranch{+1, 0.0, std::nullopt},
                                         MeasurementBranch{-1, 0.0, std::nullopt}};
    for (auto &branch : out) {
        branch.probability = std::clamp(0.5 * (1.0 + branch.outcome * n.dot(bloch)), 0.0, 1.0);
        if (branch.probability < kVanishingBranch) {
            continue;
        }
        std::vector<Complex> amps(state.amplitudes().begin(), state.amplitudes().end());
        apply_matrix(amps, site, projector(n, branch.outcome));
        branch.post_state = StateVector::normalized(state.n_qubits(), std::move(amps), state.geometry());
    }
    return out;
}

StateVector project_site(const StateVector &state, int site, const Vec3 &axis, int outcome) {
    if (outcome != 1 && outcome != -1) {
        throw ValidationError("measurement outcome must be +1 or -1");
    }
    auto branches = measure_branches(state, site, axis);
    auto &branch = outcome == 1 ? branches[0] : branches[1];
    if (!branch.post_state) {
        throw NumericalError("vanishing branch");
    }
    return std::move(*branch.post_state);
}

MeasurementResult measure_site(const StateVector &state, int site, const Vec3 &axis, Rng &rng) {
    auto branches = measure_branches(state, site, axis);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    const double u = uniform(rng);
    const bool plus =
        !branches[1].post_state || (branches[0].post_state && u < branches[0].probability);
    auto &chosen = plus ? branches[0] : branches[1];
    return MeasurementResult{chosen.outcome, chosen.probability, std::move(*chosen.post_state)};
}

Complex inner_product(const StateVector &a, const StateVector &b) {
    if (a.n_qubits() != b.n_qubits()) {
        throw ValidationError("inner product of states with different N");
    }
    Complex s{0.0, 0.0};
    for (std::size_t i = 0; i < a.dim(); ++i) {
        s += std::conj(a[i]) * b[i];
    }
    return s;
}

double fidelity(const StateVector &a, const StateVector &b) {
    return std::clamp(std::norm(inner_product(a, b)), 0.0, 1.0);
}

} // namespace macroent
