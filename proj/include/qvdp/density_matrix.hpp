#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "qvdp/errors.hpp"
#include "qvdp/fock_algebra.hpp"

namespace qvdp {

using DenseMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

struct DensityTolerances {
    double hermiticity = 1e-12;
    double trace = 1e-9;
    double min_eigenvalue = -1e-8;
};

// Two-mode density matrix over a TruncationSpec. Validated on construction
// unless explicitly skipped.
class DensityMatrix {
public:
    enum class Check { validate, skip };

    DensityMatrix(DenseMatrix matrix, const TruncationSpec& trunc, Check check = Check::validate)
        : matrix_(std::move(matrix)), trunc_(trunc) {
        if (matrix_.rows() != trunc_.dim() || matrix_.cols() != trunc_.dim()) {
            throw DimensionMismatch("density matrix is " + std::to_string(matrix_.rows()) + "x" +
                                    std::to_string(matrix_.cols()) + ", expected dimension " +
                                    std::to_string(trunc_.dim()));
        }
        if (check == Check::validate) validate();
    }

    static DensityMatrix fock(const TruncationSpec& trunc, int n1, int n2) {
        DenseMatrix m = DenseMatrix::Zero(trunc.dim(), trunc.dim());
        const int k = trunc.index(n1, n2);
        m(k, k) = 1.0;
        return {std::move(m), trunc};
    }

    static DensityMatrix vacuum(const TruncationSpec& trunc) { return fock(trunc, 0, 0); }

    // rho1 (x) rho2 for single-mode states of matching dimensions.
    static DensityMatrix product(const DenseMatrix& rho1, const DenseMatrix& rho2) {
        TruncationSpec trunc{static_cast<int>(rho1.rows()) - 1, static_cast<int>(rho2.rows()) - 1};
        DenseMatrix m(trunc.dim(), trunc.dim());
        for (int i = 0; i < rho1.rows(); ++i)
            for (int j = 0; j < rho1.cols(); ++j)
                m.block(i * rho2.rows(), j * rho2.cols(), rho2.rows(), rho2.cols()) = rho1(i, j) * rho2;
        return {std::move(m), trunc};
    }

    const DenseMatrix& matrix() const noexcept { return matrix_; }
    const TruncationSpec& trunc() const noexcept { return trunc_; }
    int dim() const noexcept { return static_cast<int>(matrix_.rows()); }

    Complex trace() const { return matrix_.trace(); }

    double hermiticity_error() const { return (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff(); }

    // Exploits block structure in the total excitation number when present;
    // every steady state of the phase-covariant model has it.
    double min_eigenvalue() const {
        const int d = dim();
        std::map<int, std::vector<int>> blocks;
        for (int k = 0; k < d; ++k) {
            blocks[trunc_.level(k, Mode::one) + trunc_.level(k, Mode::two)].push_back(k);
        }
        bool block_diagonal = true;
        for (int j = 0; j < d && block_diagonal; ++j) {
            const int nj = trunc_.level(j, Mode::one) + trunc_.level(j, Mode::two);
            for (int i = 0; i < d; ++i) {
                const int ni = trunc_.level(i, Mode::one) + trunc_.level(i, Mode::two);
                if (ni != nj && matrix_(i, j) != Complex(0.0, 0.0)) {
                    block_diagonal = false;
                    break;
                }
            }
        }
        const DenseMatrix herm = 0.5 * (matrix_ + matrix_.adjoint());
        if (!block_diagonal) {
            Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(herm, Eigen::EigenvaluesOnly);
            return solver.eigenvalues().minCoeff();
        }
        double lowest = std::numeric_limits<double>::infinity();
        for (const auto& [excitations, idx] : blocks) {
            const auto n = static_cast<Eigen::Index>(idx.size());
            DenseMatrix block(n, n);
            for (Eigen::Index a = 0; a < n; ++a)
                for (Eigen::Index b = 0; b < n; ++b) block(a, b) = herm(idx[a], idx[b]);
            Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(block, Eigen::EigenvaluesOnly);
            lowest = std::min(lowest, solver.eigenvalues().minCoeff());
        }
        return lowest;
    }

    void validate(const DensityTolerances& tol = {}) const {
        if (!matrix_.allFinite()) throw InvariantViolation("density matrix has non-finite entries");
        const double herm = hermiticity_error();
        if (herm > tol.hermiticity) {
            throw InvariantViolation("density matrix not Hermitian (max |rho - rho^dag| = " +
                                     format_number(herm) + ")");
        }
        const Complex tr = trace();
        if (std::abs(tr - Complex(1.0, 0.0)) > tol.trace) {
            throw InvariantViolation("density matrix trace deviates from 1 by " +
                                     format_number(std::abs(tr - 1.0)));
        }
        const double lowest = min_eigenvalue();
        if (lowest < tol.min_eigenvalue) {
            throw InvariantViolation("density matrix has eigenvalue " + format_number(lowest) +
                                     "; truncation likely too small");
        }
    }

private:
    DenseMatrix matrix_;
    TruncationSpec trunc_;
};

// Column stacking: vec(rho)[i + d*j] = rho(i, j).
inline ComplexVector vec(const DenseMatrix& m) {
    return Eigen::Map<const ComplexVector>(m.data(), m.size());
}

inline DenseMatrix unvec(const ComplexVector& v, int dim) {
    if (v.size() != static_cast<Eigen::Index>(dim) * dim) {
        throw DimensionMismatch("unvec: vector length is not dim^2");
    }
    return Eigen::Map<const DenseMatrix>(v.data(), dim, dim);
}

} // namespace qvdp
