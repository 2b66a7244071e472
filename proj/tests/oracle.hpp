#pragma once

// Dense reference implementations for small N. Everything here builds full
// 2^N x 2^N operators with Kronecker products, so it shares no code path with
// the library kernels.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "macroent/statevec.hpp"

namespace oracle {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using macroent::Complex;

inline MatrixXcd kron(const MatrixXcd &a, const MatrixXcd &b) {
    MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

inline MatrixXcd pauli(int a) {
    MatrixXcd m(2, 2);
    switch (a) {
    case 0:
        m << 0, 1, 1, 0;
        break;
    case 1:
        m << 0, Complex(0, -1), Complex(0, 1), 0;
        break;
    case 2:
        m << 1, 0, 0, -1;
        break;
    default:
        m = MatrixXcd::Identity(2, 2);
    }
    return m;
}

// Site 0 is the least significant bit, so it is the rightmost factor.
inline MatrixXcd site_op(int n, int site, const MatrixXcd &op) {
    MatrixXcd out = MatrixXcd::Identity(1, 1);
    for (int s = n - 1; s >= 0; --s) {
        out = kron(out, s == site ? op : MatrixXcd::Identity(2, 2));
    }
    return out;
}

inline VectorXcd to_vector(const macroent::StateVector &s) {
    VectorXcd v(static_cast<Eigen::Index>(s.dim()));
    for (std::size_t i = 0; i < s.dim(); ++i) {
        v(static_cast<Eigen::Index>(i)) = s[i];
    }
    return v;
}

inline Complex expect(const VectorXcd &psi, const MatrixXcd &op) { return psi.dot(op * psi); }

// V[(x,a),(y,b)] = 1/2 <{dA, dB}>
inline Eigen::MatrixXd covariance(const macroent::StateVector &s) {
    const int n = s.n_qubits();
    const VectorXcd psi = to_vector(s);
    std::vector<MatrixXcd> ops;
    std::vector<double> means;
    for (int x = 0; x < n; ++x) {
        for (int a = 0; a < 3; ++a) {
            ops.push_back(site_op(n, x, pauli(a)));
            means.push_back(expect(psi, ops.back()).real());
        }
    }
    Eigen::MatrixXd v(3 * n, 3 * n);
    for (int i = 0; i < 3 * n; ++i) {
        for (int j = 0; j < 3 * n; ++j) {
            const MatrixXcd anti = ops[i] * ops[j] + ops[j] * ops[i];
            v(i, j) = 0.5 * expect(psi, anti).real() - means[i] * means[j];
        }
    }
    return v;
}

// Dense transverse-field Ising Hamiltonian on a ring: -J sum Z Z - h sum X.
inline Eigen::MatrixXd ising_hamiltonian(int n, double J, double h) {
    const std::size_t dim = std::size_t{1} << n;
    MatrixXcd hm = MatrixXcd::Zero(dim, dim);
    const int bonds = n == 2 ? 1 : n;
    for (int b = 0; b < bonds; ++b) {
        hm -= J * site_op(n, b, pauli(2)) * site_op(n, (b + 1) % n, pauli(2));
    }
    for (int x = 0; x < n; ++x) {
        hm -= h * site_op(n, x, pauli(0));
    }
    return hm.real();
}

// exp(-i phi axis.sigma) on one site, as a dense 2x2 matrix.
inline MatrixXcd rotation(const macroent::Vec3 &axis, double phi) {
    MatrixXcd s = axis(0) * pauli(0) + axis(1) * pauli(1) + axis(2) * pauli(2);
    return std::cos(phi) * MatrixXcd::Identity(2, 2) - Complex(0, std::sin(phi)) * s;
}

} // namespace oracle
