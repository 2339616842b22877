#pragma once

// Closed-form and brute-force references for the numerical solvers.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <vector>

#include "qvdp/density_matrix.hpp"
#include "qvdp/errors.hpp"
#include "qvdp/fock_algebra.hpp"
#include "qvdp/liouvillian.hpp"

namespace qvdp {

// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            carry_ += (sum_ - t) + x;
        } else {
            carry_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const noexcept { return sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

// Rising factorial x (x+1) ... (x+n-1).
inline double pochhammer(double x, int n) {
    if (n < 0) throw InvalidArgument("pochhammer: n must be >= 0");
    double p = 1.0;
    for (int k = 0; k < n; ++k) p *= x + k;
    return p;
}

// Kummer's confluent hypergeometric function 1F1(a; b; z) by its power series.
inline double kummer_phi(double a, double b, double z, int max_terms = 100000) {
    if (b <= 0.0 && b == std::floor(b)) throw InvalidArgument("kummer_phi: b must not be a non-positive integer");
    if (z < 0.0) throw InvalidArgument("kummer_phi: only z >= 0 is supported");
    CompensatedSum sum;
    double term = 1.0;
    sum.add(term);
    for (int k = 1; k <= max_terms; ++k) {
        term *= (a + k - 1) * z / ((b + k - 1) * k);
        sum.add(term);
        if (term == 0.0) return sum.value();
        // Terms decrease monotonically once k exceeds z - b + 1, so the tail
        // is bounded by a geometric series from here on.
        const double ratio = std::abs((a + k) * z / ((b + k) * (k + 1)));
        if (ratio < 1.0 && std::abs(term) < 1e-16 * std::abs(sum.value()) * (1.0 - ratio)) {
            return sum.value();
        }
    }
    throw NonConvergence("kummer_phi did not converge within " + std::to_string(max_terms) + " terms");
}

struct SteadyDiagonal {
    std::vector<double> probabilities;

    double sum() const {
        CompensatedSum s;
        for (double p : probabilities) s.add(p);
        return s.value();
    }
    double mean() const {
        CompensatedSum s;
        for (std::size_t n = 0; n < probabilities.size(); ++n) s.add(static_cast<double>(n) * probabilities[n]);
        return s.value();
    }
};

// Fock populations of a single uncoupled vdP oscillator (any Kerr parameter):
//   p_n = r^n Phi(1+n, r+n, r) / [(r)_n Phi(1, r, 2r)],  r = G/kappa.
// The truncated list is not renormalized.
inline SteadyDiagonal single_vdp_steady_diag(double g_over_kappa, int n_max) {
    if (!(g_over_kappa > 0.0)) throw InvalidArgument("single_vdp_steady_diag: G/kappa must be > 0");
    if (n_max < 0) throw InvalidArgument("single_vdp_steady_diag: n_max must be >= 0");
    const double r = g_over_kappa;
    const double norm = kummer_phi(1.0, r, 2.0 * r);
    SteadyDiagonal out;
    out.probabilities.reserve(static_cast<std::size_t>(n_max) + 1);
    double prefactor = 1.0; // r^n / (r)_n
    for (int n = 0; n <= n_max; ++n) {
        if (n > 0) prefactor *= r / (r + n - 1);
        out.probabilities.push_back(prefactor * kummer_phi(1.0 + n, r + n, r) / norm);
    }
    return out;
}

// Linear stability window of the rest state: G < V < (Delta^2 + G^2) / (2G).
inline bool aronson_death_region(double g, double v, double delta) {
    if (!(g > 0.0)) throw InvalidArgument("aronson_death_region: g must be > 0");
    return g < v && v < (delta * delta + g * g) / (2.0 * g);
}

// Brute-force steady state: dense Liouvillian built column by column from the
// Lindblad definition, kernel from the full spectrum and inverse iteration.
inline DensityMatrix dense_steady_oracle(const SystemParams& params, const TruncationSpec& trunc) {
    params.validate();
    trunc.validate();
    const int d = trunc.dim();
    if (d * d > 4096) throw InvalidArgument("dense_steady_oracle: d^2 exceeds 4096");

    const DenseMatrix a1 = DenseMatrix(annihilation(Mode::one, trunc));
    const DenseMatrix a2 = DenseMatrix(annihilation(Mode::two, trunc));
    const DenseMatrix n1 = a1.adjoint() * a1;
    const DenseMatrix n2 = a2.adjoint() * a2;
    const DenseMatrix h = params.omega(Mode::one) * n1 + params.k1 * n1 * n1 +
                          params.omega(Mode::two) * n2 + params.k2 * n2 * n2;

    struct Channel {
        double rate;
        DenseMatrix jump;
    };
    const std::vector<Channel> channels = {
        {params.gain, a1.adjoint()}, {params.gain, a2.adjoint()},
        {params.kappa, a1 * a1},     {params.kappa, a2 * a2},
        {params.v, a1 - a2},
    };

    const Complex i_unit(0.0, 1.0);
    DenseMatrix generator(d * d, d * d);
    for (int j = 0; j < d; ++j) {
        for (int i = 0; i < d; ++i) {
            DenseMatrix e = DenseMatrix::Zero(d, d);
            e(i, j) = 1.0;
            DenseMatrix out = -i_unit * (h * e - e * h);
            for (const auto& ch : channels) {
                const DenseMatrix& c = ch.jump;
                const DenseMatrix cdc = c.adjoint() * c;
                out += ch.rate * (c * e * c.adjoint() - 0.5 * (cdc * e + e * cdc));
            }
            generator.col(i + d * j) = Eigen::Map<const ComplexVector>(out.data(), d * d);
        }
    }

    Eigen::ComplexEigenSolver<DenseMatrix> solver(generator, false);
    if (solver.info() != Eigen::Success) throw SingularSolve("dense_steady_oracle: eigendecomposition failed");
    const auto& values = solver.eigenvalues();
    Eigen::Index best = 0;
    for (Eigen::Index k = 1; k < values.size(); ++k)
        if (std::abs(values(k)) < std::abs(values(best))) best = k;
    for (Eigen::Index k = 0; k < values.size(); ++k) {
        if (k != best && std::abs(values(k)) < 1e-10) {
            throw AmbiguousKernel("dense_steady_oracle: two eigenvalues within 1e-10 of zero");
        }
    }
    // Eigenvector by inverse iteration on the isolated eigenvalue.
    const DenseMatrix shifted = generator - values(best) * DenseMatrix::Identity(d * d, d * d);
    const Eigen::PartialPivLU<DenseMatrix> lu(shifted);
    ComplexVector x = ComplexVector::Ones(d * d);
    for (int it = 0; it < 3; ++it) {
        x = lu.solve(x);
        x /= x.norm();
    }
    DenseMatrix rho = unvec(x, d);
    rho /= rho.trace();
    return {std::move(rho), trunc, DensityMatrix::Check::skip};
}

} // namespace qvdp
