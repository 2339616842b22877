#pragma once

// Liouvillian of two Kerr van der Pol oscillators with a shared dissipative
// reservoir, plus steady-state and time-evolution solvers.
//
// Vectorization is column stacking, vec(A rho B) = (B^T (x) A) vec(rho), so
//   L = -i (I (x) H - H^T (x) I)
//       + sum_c [ conj(c) (x) c - (I (x) c^dag c + (c^dag c)^T (x) I) / 2 ].
// The rotating frame puts omega_1 = frame_shift and omega_2 = frame_shift + delta.

#include <Eigen/Dense>
#include <Eigen/SparseLU>
#include <boost/numeric/odeint.hpp>
#include <boost/numeric/odeint/external/eigen/eigen.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "qvdp/density_matrix.hpp"
#include "qvdp/errors.hpp"
#include "qvdp/fock_algebra.hpp"

namespace boost::numeric::odeint {
template <>
struct vector_space_norm_inf<Eigen::VectorXcd> {
    using result_type = double;
    double operator()(const Eigen::VectorXcd& x) const { return x.cwiseAbs().maxCoeff(); }
};
} // namespace boost::numeric::odeint

namespace qvdp {

// All rates in units of the gain G.
struct SystemParams {
    double delta = 0.0;       // omega_2 - omega_1
    double k1 = 0.0;          // Kerr parameter of mode 1
    double k2 = 0.0;          // Kerr parameter of mode 2
    double gain = 1.0;        // one-phonon gain G
    double kappa = 0.0;       // two-phonon loss
    double v = 0.0;           // dissipative coupling
    double frame_shift = 0.0; // common frequency offset, omega_1

    double omega(Mode m) const noexcept { return m == Mode::one ? frame_shift : frame_shift + delta; }
    double kerr(Mode m) const noexcept { return m == Mode::one ? k1 : k2; }

    void validate() const {
        for (double x : {delta, k1, k2, gain, kappa, v, frame_shift}) {
            if (!std::isfinite(x)) throw InvalidArgument("system parameters must be finite");
        }
        if (gain <= 0.0) throw InvalidArgument("gain must be > 0");
        if (kappa < 0.0) throw InvalidArgument("kappa must be >= 0");
        if (v < 0.0) throw InvalidArgument("coupling v must be >= 0");
        if (k1 < 0.0 || k2 < 0.0) throw InvalidArgument("Kerr parameters must be >= 0");
    }
};

// Generator acting on column-stacked density matrices. When `basis` is empty
// the matrix covers the full d^2 space; otherwise basis[k] is the full
// vec-index of the k-th retained coordinate.
struct Superoperator {
    SparseMatrix matrix;
    int hilbert_dim = 0;
    std::vector<int> basis;
    std::optional<TruncationSpec> trunc;

    bool is_full() const noexcept { return basis.empty(); }
};

enum class LiouvilleSpace {
    full,
    // Coordinates |n1 n2><m1 m2| with n1 + n2 == m1 + m2. Every term of the
    // master equation maps this block to itself and the trace lives in it.
    balanced,
};

namespace detail {

// coeff * left * rho * right
struct SandwichTerm {
    Complex coeff;
    SparseMatrix left;
    SparseMatrix right;
};

inline void add_commutator(std::vector<SandwichTerm>& terms, const SparseMatrix& h) {
    const SparseMatrix id = identity(static_cast<int>(h.rows()));
    terms.push_back({Complex(0.0, -1.0), h, id});
    terms.push_back({Complex(0.0, 1.0), id, h});
}

inline void add_dissipator(std::vector<SandwichTerm>& terms, const SparseMatrix& c, double rate) {
    if (rate == 0.0) return;
    const SparseMatrix cdag = c.adjoint();
    SparseMatrix cdc = cdag * c;
    cdc.prune(Complex(0.0, 0.0));
    const SparseMatrix id = identity(static_cast<int>(c.rows()));
    terms.push_back({Complex(rate, 0.0), c, cdag});
    terms.push_back({Complex(-0.5 * rate, 0.0), cdc, id});
    terms.push_back({Complex(-0.5 * rate, 0.0), id, cdc});
}

// Builds the matrix of sum_t coeff_t * L_t * rho * R_t restricted to `basis`
// (full space when empty). Throws if a retained column leaks out of the basis.
inline SparseMatrix assemble(const std::vector<SandwichTerm>& terms, int dim,
                             const std::vector<int>& basis) {
    const long long full = static_cast<long long>(dim) * dim;
    const bool restricted = !basis.empty();
    std::vector<int> position;
    if (restricted) {
        position.assign(static_cast<std::size_t>(full), -1);
        for (std::size_t k = 0; k < basis.size(); ++k) position[basis[k]] = static_cast<int>(k);
    }
    const int n = restricted ? static_cast<int>(basis.size()) : static_cast<int>(full);

    std::vector<SparseMatrix> right_t;
    right_t.reserve(terms.size());
    for (const auto& t : terms) right_t.emplace_back(t.right.transpose());

    std::vector<Triplet> entries;
    entries.reserve(static_cast<std::size_t>(n) * 8 * terms.size() / 3 + 16);
    for (int col = 0; col < n; ++col) {
        const int flat = restricted ? basis[col] : col;
        const int i = flat % dim;
        const int j = flat / dim;
        for (std::size_t t = 0; t < terms.size(); ++t) {
            // left(:, i) and right(j, :) = right^T(:, j)
            for (SparseMatrix::InnerIterator p(terms[t].left, i); p; ++p) {
                for (SparseMatrix::InnerIterator q(right_t[t], j); q; ++q) {
                    const long long out = p.row() + static_cast<long long>(dim) * q.row();
                    int row = static_cast<int>(out);
                    if (restricted) {
                        row = position[static_cast<std::size_t>(out)];
                        if (row < 0) {
                            throw InvalidArgument("Liouvillian does not preserve the requested subspace");
                        }
                    }
                    entries.emplace_back(row, col, terms[t].coeff * p.value() * q.value());
                }
            }
        }
    }
    SparseMatrix out(n, n);
    out.setFromTriplets(entries.begin(), entries.end());
    out.prune(Complex(0.0, 0.0));
    return out;
}

inline std::vector<int> balanced_basis(const TruncationSpec& trunc) {
    const int d = trunc.dim();
    std::vector<int> basis;
    for (int j = 0; j < d; ++j) {
        const int nj = trunc.level(j, Mode::one) + trunc.level(j, Mode::two);
        for (int i = 0; i < d; ++i) {
            if (trunc.level(i, Mode::one) + trunc.level(i, Mode::two) == nj) basis.push_back(i + d * j);
        }
    }
    return basis;
}

inline double row_sum_norm(const SparseMatrix& m) {
    Eigen::VectorXd sums = Eigen::VectorXd::Zero(m.rows());
    for (int c = 0; c < m.outerSize(); ++c)
        for (SparseMatrix::InnerIterator it(m, c); it; ++it) sums(it.row()) += std::abs(it.value());
    return m.rows() > 0 ? sums.maxCoeff() : 0.0;
}

} // namespace detail

// Diagonal H_m = omega_m n + K_m n^2, embedded in the two-mode space.
inline SparseMatrix build_hamiltonian(const SystemParams& params, Mode mode, const TruncationSpec& trunc) {
    const int n_max = trunc.n_max(mode);
    const double omega = params.omega(mode);
    const double kerr = params.kerr(mode);
    SparseMatrix h(n_max + 1, n_max + 1);
    std::vector<Triplet> diag;
    for (int n = 0; n <= n_max; ++n) {
        const double e = omega * n + kerr * static_cast<double>(n) * n;
        if (e != 0.0) diag.emplace_back(n, n, Complex(e, 0.0));
    }
    h.setFromTriplets(diag.begin(), diag.end());
    return embed(h, mode, trunc);
}

// Superoperator of D[c] rho = c rho c^dag - (c^dag c rho + rho c^dag c)/2.
inline Superoperator lindblad_term(const SparseMatrix& c) {
    if (c.rows() != c.cols()) throw DimensionMismatch("lindblad_term: jump operator must be square");
    std::vector<detail::SandwichTerm> terms;
    detail::add_dissipator(terms, c, 1.0);
    const int d = static_cast<int>(c.rows());
    Superoperator out;
    out.hilbert_dim = d;
    out.matrix = terms.empty() ? SparseMatrix(d * d, d * d) : detail::assemble(terms, d, {});
    return out;
}

inline Superoperator build_liouvillian(const SystemParams& params, const TruncationSpec& trunc,
                                       LiouvilleSpace space = LiouvilleSpace::full) {
    params.validate();
    trunc.validate();
    std::vector<detail::SandwichTerm> terms;
    for (Mode m : {Mode::one, Mode::two}) {
        detail::add_commutator(terms, build_hamiltonian(params, m, trunc));
        const SparseMatrix a = annihilation(m, trunc);
        detail::add_dissipator(terms, SparseMatrix(a.adjoint()), params.gain);
        SparseMatrix a2 = a * a;
        a2.prune(Complex(0.0, 0.0));
        detail::add_dissipator(terms, a2, params.kappa);
    }
    detail::add_dissipator(terms, collective_jump(trunc), params.v);

    Superoperator out;
    out.hilbert_dim = trunc.dim();
    out.trunc = trunc;
    if (space == LiouvilleSpace::balanced) out.basis = detail::balanced_basis(trunc);
    out.matrix = detail::assemble(terms, trunc.dim(), out.basis);
    return out;
}

// Applies a full-space superoperator to rho.
inline DenseMatrix apply(const Superoperator& op, const DenseMatrix& rho) {
    if (!op.is_full()) throw InvalidArgument("apply: superoperator is restricted to a subspace");
    if (rho.rows() != op.hilbert_dim || rho.cols() != op.hilbert_dim) {
        throw DimensionMismatch("apply: state dimension does not match superoperator");
    }
    return unvec(op.matrix * vec(rho), op.hilbert_dim);
}

struct SteadyState {
    DensityMatrix rho;
    double residual = 0.0;      // ||L vec(rho)||_inf / ||L||_inf
    int solve_dimension = 0;    // size of the linear system actually factorized
};

namespace detail {

// Largest balanced block if `op` is full and leaves it invariant; empty otherwise.
inline std::vector<int> invariant_balanced_basis(const Superoperator& op) {
    if (!op.is_full() || !op.trunc) return {};
    std::vector<int> basis = balanced_basis(*op.trunc);
    const long long full = static_cast<long long>(op.hilbert_dim) * op.hilbert_dim;
    std::vector<char> inside(static_cast<std::size_t>(full), 0);
    for (int b : basis) inside[b] = 1;
    for (int b : basis) {
        for (SparseMatrix::InnerIterator it(op.matrix, b); it; ++it) {
            if (!inside[it.row()]) return {};
        }
    }
    return basis;
}

inline SparseMatrix restrict_to(const SparseMatrix& m, const std::vector<int>& basis) {
    std::vector<int> position(static_cast<std::size_t>(m.rows()), -1);
    for (std::size_t k = 0; k < basis.size(); ++k) position[basis[k]] = static_cast<int>(k);
    std::vector<Triplet> entries;
    for (std::size_t k = 0; k < basis.size(); ++k) {
        for (SparseMatrix::InnerIterator it(m, basis[k]); it; ++it) {
            const int row = position[it.row()];
            if (row >= 0) entries.emplace_back(row, static_cast<int>(k), it.value());
        }
    }
    const auto n = static_cast<int>(basis.size());
    SparseMatrix out(n, n);
    out.setFromTriplets(entries.begin(), entries.end());
    return out;
}

constexpr int dense_fallback_limit = 2500;

inline ComplexVector dense_kernel(const SparseMatrix& m, int hilbert_dim, const std::vector<int>& basis) {
    const DenseMatrix dense(m);
    Eigen::BDCSVD<DenseMatrix> svd(dense, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const double scale = std::max(s(0), 1.0);
    int null_count = 0;
    for (Eigen::Index k = 0; k < s.size(); ++k)
        if (s(k) <= 1e-10 * scale) ++null_count;
    if (null_count != 1) {
        throw SingularSolve("steady state kernel has dimension " + std::to_string(null_count));
    }
    ComplexVector x = svd.matrixV().col(s.size() - 1);
    Complex trace(0.0, 0.0);
    for (std::size_t k = 0; k < x.size(); ++k) {
        const int flat = basis.empty() ? static_cast<int>(k) : basis[k];
        if (flat % hilbert_dim == flat / hilbert_dim) trace += x(static_cast<Eigen::Index>(k));
    }
    return x / trace;
}

} // namespace detail

// Solves L vec(rho) = 0 with one row replaced by the trace functional.
inline SteadyState steady_state(const Superoperator& op) {
    if (!op.trunc) throw InvalidArgument("steady_state: superoperator lacks a two-mode truncation");
    const int d = op.hilbert_dim;

    std::vector<int> basis = op.basis;
    SparseMatrix system = op.matrix;
    if (op.is_full()) {
        basis = detail::invariant_balanced_basis(op);
        if (!basis.empty()) system = detail::restrict_to(op.matrix, basis);
    }
    const auto n = static_cast<int>(system.rows());
    auto flat_index = [&](int k) { return basis.empty() ? k : basis[k]; };

    // Replace the row of the vacuum population with the trace functional.
    int trace_row = -1;
    for (int k = 0; k < n && trace_row < 0; ++k)
        if (flat_index(k) == 0) trace_row = k;

    std::vector<Triplet> entries;
    entries.reserve(static_cast<std::size_t>(system.nonZeros()) + d);
    for (int c = 0; c < system.outerSize(); ++c)
        for (SparseMatrix::InnerIterator it(system, c); it; ++it)
            if (it.row() != trace_row) entries.emplace_back(it.row(), c, it.value());
    for (int k = 0; k < n; ++k) {
        const int flat = flat_index(k);
        if (flat % d == flat / d) entries.emplace_back(trace_row, k, Complex(1.0, 0.0));
    }
    SparseMatrix bordered(n, n);
    bordered.setFromTriplets(entries.begin(), entries.end());
    bordered.makeCompressed();

    ComplexVector rhs = ComplexVector::Zero(n);
    rhs(trace_row) = 1.0;

    ComplexVector x;
    Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(bordered);
    bool solved = lu.info() == Eigen::Success;
    if (solved) {
        x = lu.solve(rhs);
        solved = lu.info() == Eigen::Success && x.allFinite();
    }
    if (!solved) {
        if (n > detail::dense_fallback_limit) {
            throw SingularSolve("sparse factorization of the steady-state system failed: " + lu.lastErrorMessage());
        }
        x = detail::dense_kernel(system, d, basis);
    }

    DenseMatrix rho = DenseMatrix::Zero(d, d);
    for (int k = 0; k < n; ++k) {
        const int flat = flat_index(k);
        rho(flat % d, flat / d) = x(k);
    }
    rho = 0.5 * (rho + rho.adjoint()).eval();
    rho /= rho.trace();

    // Residual against the unbordered generator in the solved coordinates.
    ComplexVector xs(n);
    for (int k = 0; k < n; ++k) {
        const int flat = flat_index(k);
        xs(k) = rho(flat % d, flat / d);
    }
    const double norm = detail::row_sum_norm(system);
    const double residual = norm > 0.0 ? (system * xs).cwiseAbs().maxCoeff() / norm : 0.0;
    if (!std::isfinite(residual) || residual > 1e-6) {
        throw SingularSolve("steady-state residual " + format_number(residual) +
                            " indicates a degenerate kernel");
    }
    return {DensityMatrix(std::move(rho), *op.trunc), residual, n};
}

inline SteadyState steady_state(const SystemParams& params, const TruncationSpec& trunc) {
    return steady_state(build_liouvillian(params, trunc, LiouvilleSpace::balanced));
}

// Adaptive Dormand-Prince integration of vec(rho)' = L vec(rho).
inline DensityMatrix evolve(const DensityMatrix& rho0, const Superoperator& op, double t_final, double tol) {
    namespace ode = boost::numeric::odeint;
    if (!op.is_full()) throw InvalidArgument("evolve: superoperator must act on the full space");
    if (rho0.dim() != op.hilbert_dim) throw DimensionMismatch("evolve: state/superoperator dimension mismatch");
    if (t_final < 0.0 || !(tol > 0.0)) throw InvalidArgument("evolve: need t_final >= 0 and tol > 0");
    if (t_final == 0.0) return rho0;

    using State = ComplexVector;
    auto rhs = [&op](const State& x, State& dxdt, double) { dxdt.noalias() = op.matrix * x; };
    auto stepper = ode::make_controlled(
        tol, tol, ode::runge_kutta_dopri5<State, double, State, double, ode::vector_space_algebra>());

    State x = vec(rho0.matrix());
    double t = 0.0;
    double dt = std::min(1e-2, t_final);
    const double min_dt = 1e-13 * std::max(1.0, t_final);
    while (t < t_final) {
        if (t + dt > t_final) dt = t_final - t;
        const auto result = stepper.try_step(rhs, x, t, dt);
        if (result == ode::fail && dt < min_dt) {
            throw StepSizeUnderflow("evolve: step size underflow at t = " + format_number(t));
        }
    }
    const DenseMatrix raw = unvec(x, op.hilbert_dim);
    DenseMatrix rho = 0.5 * (raw + raw.adjoint());
    DensityMatrix out(std::move(rho), rho0.trunc(), DensityMatrix::Check::skip);
    out.validate();
    return out;
}

inline double mean_phonon(const DensityMatrix& rho, Mode mode) {
    Complex sum(0.0, 0.0);
    for (int k = 0; k < rho.dim(); ++k) sum += static_cast<double>(rho.trunc().level(k, mode)) * rho.matrix()(k, k);
    if (std::abs(sum.imag()) >= 1e-10) {
        throw InvariantViolation("mean phonon number has imaginary part " + format_number(sum.imag()));
    }
    return sum.real();
}

inline double phonon_difference(const DensityMatrix& rho) {
    return mean_phonon(rho, Mode::one) - mean_phonon(rho, Mode::two);
}

// Fock populations of one mode.
inline Eigen::VectorXd populations(const DensityMatrix& rho, Mode mode) {
    const TruncationSpec& trunc = rho.trunc();
    Eigen::VectorXd p = Eigen::VectorXd::Zero(trunc.dim(mode));
    for (int k = 0; k < rho.dim(); ++k) p(trunc.level(k, mode)) += rho.matrix()(k, k).real();
    return p;
}

// Population of the two highest retained Fock levels, maximized over modes.
inline double check_truncation(const DensityMatrix& rho, const TruncationSpec& trunc) {
    if (!(rho.trunc() == trunc)) throw DimensionMismatch("check_truncation: truncation mismatch");
    double worst = 0.0;
    for (Mode m : {Mode::one, Mode::two}) {
        const Eigen::VectorXd p = populations(rho, m);
        const auto top = p.size() - 1;
        worst = std::max(worst, p(top) + p(top - 1));
    }
    return worst;
}

constexpr double truncation_warn_level = 1e-6;
constexpr double truncation_error_level = 1e-3;

} // namespace qvdp
