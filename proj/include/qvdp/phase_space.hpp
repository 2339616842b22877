#pragma once

// Reduced single-mode states and their Wigner functions.
//
// Normalization: the integral of W over d(Re a) d(Im a) is 1, so the vacuum
// is W(a) = (2/pi) exp(-2|a|^2).

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>

#include "qvdp/density_matrix.hpp"
#include "qvdp/errors.hpp"
#include "qvdp/liouvillian.hpp"

namespace qvdp {

inline DenseMatrix partial_trace(const DensityMatrix& rho, Mode keep) {
    const TruncationSpec& trunc = rho.trunc();
    const int dk = trunc.dim(keep);
    const int dt = trunc.dim(other(keep));
    DenseMatrix out = DenseMatrix::Zero(dk, dk);
    for (int i = 0; i < dk; ++i) {
        for (int j = 0; j < dk; ++j) {
            Complex s(0.0, 0.0);
            for (int t = 0; t < dt; ++t) {
                const int row = keep == Mode::one ? trunc.index(i, t) : trunc.index(t, i);
                const int col = keep == Mode::one ? trunc.index(j, t) : trunc.index(t, j);
                s += rho.matrix()(row, col);
            }
            out(i, j) = s;
        }
    }
    return out;
}

struct WignerGrid {
    double re_min = -3.5;
    double re_max = 3.5;
    double im_min = -3.5;
    double im_max = 3.5;
    int n_re = 101;
    int n_im = 101;
    Eigen::MatrixXd values; // n_im rows x n_re columns

    double re(int k) const { return re_min + k * re_step(); }
    double im(int k) const { return im_min + k * im_step(); }
    double re_step() const { return (re_max - re_min) / (n_re - 1); }
    double im_step() const { return (im_max - im_min) / (n_im - 1); }

    void validate() const {
        if (!(re_min < re_max) || !(im_min < im_max)) throw InvalidArgument("Wigner window bounds must be ordered");
        if (n_re < 8 || n_im < 8) throw InvalidArgument("Wigner grid needs at least 8 points per axis");
    }
};

// Square window of half-width 3.5, scaled by sqrt(G/kappa) when kappa > 0.
inline WignerGrid default_wigner_grid(const SystemParams& params, int points = 101) {
    const double half = params.kappa > 0.0 ? 3.5 * std::sqrt(params.gain / params.kappa) : 3.5;
    WignerGrid g;
    g.re_min = g.im_min = -half;
    g.re_max = g.im_max = half;
    g.n_re = g.n_im = points;
    return g;
}

// W(a) = (2/pi) e^{-2|a|^2} sum_{m<=n} w_mn with
//   w_mm = rho_mm (-1)^m L_m(4|a|^2)
//   w_mn = 2 Re[rho_mn (-1)^m (2a)^{n-m} sqrt(m!/n!) L_m^{(n-m)}(4|a|^2)],  n > m,
// the Laguerre polynomials evaluated by their three-term recurrence in m.
inline double wigner_point(const DenseMatrix& rho, Complex alpha) {
    const int d = static_cast<int>(rho.rows());
    const double r2 = std::norm(alpha);
    const double x = 4.0 * r2;
    const Complex two_alpha = 2.0 * alpha;
    double total = 0.0;
    for (int k = 0; k < d; ++k) {
        // L_{m-1}^{(k)}, L_m^{(k)}
        double l_prev = 0.0;
        double l_curr = 1.0;
        // (-1)^m (2a)^k sqrt(m!/(m+k)!) e^{-2|a|^2}
        Complex coeff = std::exp(-2.0 * r2);
        for (int j = 1; j <= k; ++j) coeff *= two_alpha / std::sqrt(static_cast<double>(j));
        for (int m = 0; m + k < d; ++m) {
            if (m > 0) {
                const double l_next = ((2.0 * (m - 1) + 1.0 + k - x) * l_curr - (m - 1 + k) * l_prev) / m;
                l_prev = l_curr;
                l_curr = l_next;
                coeff *= -std::sqrt(static_cast<double>(m) / (m + k));
            }
            const Complex term = rho(m, m + k) * coeff * l_curr;
            total += (k == 0 ? 1.0 : 2.0) * term.real();
        }
    }
    return 2.0 / std::numbers::pi * total;
}

inline WignerGrid wigner(const DenseMatrix& rho_single, WignerGrid grid) {
    grid.validate();
    if (rho_single.rows() != rho_single.cols()) throw DimensionMismatch("wigner: state must be square");
    if ((rho_single - rho_single.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
        throw InvariantViolation("wigner: state is not Hermitian");
    }
    if (std::abs(rho_single.trace() - Complex(1.0, 0.0)) > 1e-8) {
        throw InvariantViolation("wigner: state is not trace one");
    }
    grid.values.resize(grid.n_im, grid.n_re);
    for (int i = 0; i < grid.n_im; ++i)
        for (int r = 0; r < grid.n_re; ++r) grid.values(i, r) = wigner_point(rho_single, {grid.re(r), grid.im(i)});
    return grid;
}

// Riemann sum of f(a) W(a) over the grid cells.
template <typename F>
double integrate(const WignerGrid& grid, F&& f) {
    double s = 0.0;
    for (int i = 0; i < grid.n_im; ++i)
        for (int r = 0; r < grid.n_re; ++r) s += f(Complex(grid.re(r), grid.im(i))) * grid.values(i, r);
    return s * grid.re_step() * grid.im_step();
}

// Distance from the origin of the grid maximum.
inline double peak_radius(const WignerGrid& grid) {
    Eigen::Index row = 0;
    Eigen::Index col = 0;
    grid.values.maxCoeff(&row, &col);
    return std::hypot(grid.re(static_cast<int>(col)), grid.im(static_cast<int>(row)));
}

} // namespace qvdp
