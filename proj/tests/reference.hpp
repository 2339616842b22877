#pragma once

// Test-only references built directly from matrix products.

#include <Eigen/Dense>

#include <random>

#include "qvdp/density_matrix.hpp"
#include "qvdp/fock_algebra.hpp"
#include "qvdp/liouvillian.hpp"

namespace qvdp::test {

// D[c] rho evaluated as matrices.
inline DenseMatrix dissipator(const DenseMatrix& c, const DenseMatrix& rho) {
    const DenseMatrix cdc = c.adjoint() * c;
    return c * rho * c.adjoint() - 0.5 * (cdc * rho + rho * cdc);
}

// Right-hand side of the master equation, straight from its definition.
inline DenseMatrix master_rhs(const SystemParams& p, const TruncationSpec& t, const DenseMatrix& rho) {
    const DenseMatrix a1 = DenseMatrix(annihilation(Mode::one, t));
    const DenseMatrix a2 = DenseMatrix(annihilation(Mode::two, t));
    const DenseMatrix n1 = a1.adjoint() * a1;
    const DenseMatrix n2 = a2.adjoint() * a2;
    const DenseMatrix h = p.omega(Mode::one) * n1 + p.k1 * n1 * n1 + p.omega(Mode::two) * n2 + p.k2 * n2 * n2;
    const Complex i(0.0, 1.0);
    DenseMatrix out = -i * (h * rho - rho * h);
    out += p.gain * (dissipator(a1.adjoint(), rho) + dissipator(a2.adjoint(), rho));
    out += p.kappa * (dissipator(a1 * a1, rho) + dissipator(a2 * a2, rho));
    out += p.v * dissipator(a1 - a2, rho);
    return out;
}

inline DenseMatrix random_density(int d, std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    DenseMatrix a(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) a(i, j) = Complex(n(rng), n(rng));
    DenseMatrix rho = a * a.adjoint();
    return rho / rho.trace();
}

inline DenseMatrix random_matrix(int d, std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    DenseMatrix a(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) a(i, j) = Complex(n(rng), n(rng));
    return a;
}

inline double trace_distance(const DenseMatrix& a, const DenseMatrix& b) {
    const DenseMatrix diff = a - b;
    Eigen::SelfAdjointEigenSolver<DenseMatrix> s(0.5 * (diff + diff.adjoint()), Eigen::EigenvaluesOnly);
    return 0.5 * s.eigenvalues().cwiseAbs().sum();
}

inline SystemParams params(double delta, double k1, double k2, double kappa, double v) {
    SystemParams p;
    p.delta = delta;
    p.k1 = k1;
    p.k2 = k2;
    p.kappa = kappa;
    p.v = v;
    return p;
}

// Stationary populations of one truncated vdP oscillator from its rate
// equations: gain n -> n+1 at G(n+1) below the cutoff, loss n -> n-2 at kappa n(n-1).
inline Eigen::VectorXd truncated_rate_steady(double gain, double kappa, int n_max) {
    const int d = n_max + 1;
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(d, d);
    for (int n = 0; n < d; ++n) {
        if (n + 1 < d) {
            w(n + 1, n) += gain * (n + 1);
            w(n, n) -= gain * (n + 1);
        }
        if (n >= 2) {
            w(n - 2, n) += kappa * n * (n - 1);
            w(n, n) -= kappa * n * (n - 1);
        }
    }
    w.row(0).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(d);
    rhs(0) = 1.0;
    return w.fullPivLu().solve(rhs);
}

} // namespace qvdp::test
