#include <gtest/gtest.h>

#include <cmath>

#include "qvdp/density_matrix.hpp"
#include "qvdp/fock_algebra.hpp"

using namespace qvdp;

namespace {

DenseMatrix dense(const SparseMatrix& m) { return DenseMatrix(m); }

} // namespace

TEST(FockAlgebra, AnnihilationSingleLevel) {
    DenseMatrix expected(2, 2);
    expected << 0, 1, 0, 0;
    EXPECT_EQ(dense(annihilation(1)), expected);
}

TEST(FockAlgebra, AnnihilationSuperdiagonal) {
    const DenseMatrix a = dense(annihilation(2));
    EXPECT_DOUBLE_EQ(a(0, 1).real(), 1.0);
    EXPECT_DOUBLE_EQ(a(1, 2).real(), std::sqrt(2.0));
    EXPECT_EQ(a.cwiseAbs().sum(), 1.0 + std::sqrt(2.0));
}

TEST(FockAlgebra, NumberOperatorDiagonal) {
    const DenseMatrix n = dense(number(3));
    for (int k = 0; k <= 3; ++k) EXPECT_EQ(n(k, k), Complex(k, 0.0));
    EXPECT_TRUE((dense(creation(3)) * dense(annihilation(3)) - n).isZero(1e-14));
}

TEST(FockAlgebra, RejectsNegativeCutoff) { EXPECT_THROW(annihilation(-1), InvalidArgument); }

TEST(FockAlgebra, EmbeddedModesCommute) {
    const TruncationSpec t{3, 4};
    const DenseMatrix a1 = dense(annihilation(Mode::one, t));
    const DenseMatrix a2 = dense(annihilation(Mode::two, t));
    EXPECT_TRUE((a1 * a2 - a2 * a1).isZero(0.0));
    EXPECT_TRUE((a1 * a2.adjoint() - a2.adjoint() * a1).isZero(0.0));
}

TEST(FockAlgebra, EmbeddedIdentity) {
    const TruncationSpec t{2, 3};
    EXPECT_TRUE(dense(embed(identity(3), Mode::one, t)).isIdentity(0.0));
    EXPECT_EQ(embed(identity(4), Mode::two, t).rows(), 12);
}

TEST(FockAlgebra, EmbedRejectsWrongDimension) {
    EXPECT_THROW(embed(identity(5), Mode::one, uniform_truncation(3)), DimensionMismatch);
}

TEST(FockAlgebra, ProductStateExpectation) {
    const TruncationSpec t = uniform_truncation(3);
    const DensityMatrix rho = DensityMatrix::fock(t, 1, 0);
    EXPECT_EQ((dense(number(Mode::one, t)) * rho.matrix()).trace(), Complex(1.0, 0.0));
    EXPECT_EQ((dense(number(Mode::two, t)) * rho.matrix()).trace(), Complex(0.0, 0.0));
}

TEST(FockAlgebra, IndexOrderingMode1Slow) {
    const TruncationSpec t{2, 3};
    EXPECT_EQ(t.index(1, 2), 6);
    EXPECT_EQ(t.level(6, Mode::one), 1);
    EXPECT_EQ(t.level(6, Mode::two), 2);
}

TEST(FockAlgebra, CollectiveJumpActions) {
    const TruncationSpec t = uniform_truncation(2);
    const DenseMatrix c = dense(collective_jump(t));
    Eigen::VectorXcd ket10 = Eigen::VectorXcd::Zero(t.dim());
    Eigen::VectorXcd ket01 = Eigen::VectorXcd::Zero(t.dim());
    Eigen::VectorXcd ket00 = Eigen::VectorXcd::Zero(t.dim());
    ket10(t.index(1, 0)) = 1.0;
    ket01(t.index(0, 1)) = 1.0;
    ket00(t.index(0, 0)) = 1.0;
    EXPECT_TRUE((c * ket10 - ket00).isZero(0.0));
    EXPECT_TRUE((c * ket01 + ket00).isZero(0.0));
    EXPECT_TRUE((c * (ket10 + ket01) / std::sqrt(2.0)).isZero(1e-15));
}

TEST(TruncationSpec, Validation) {
    EXPECT_NO_THROW(uniform_truncation(6).validate());
    EXPECT_THROW((TruncationSpec{1, 6}.validate()), InvalidArgument);
    EXPECT_THROW(uniform_truncation(70).validate(), InvalidArgument);
    EXPECT_NO_THROW(uniform_truncation(70).validate(1 << 20));
}

TEST(DensityMatrix, RejectsInvalidStates) {
    const TruncationSpec t = uniform_truncation(2);
    DenseMatrix m = DenseMatrix::Zero(t.dim(), t.dim());
    m(0, 0) = 0.5;
    EXPECT_THROW(DensityMatrix(m, t), InvariantViolation);
    m(0, 0) = 1.5;
    m(1, 1) = -0.5;
    EXPECT_THROW(DensityMatrix(m, t), InvariantViolation);
    m(1, 1) = 0.0;
    m(0, 0) = 1.0;
    m(0, 1) = 0.1;
    EXPECT_THROW(DensityMatrix(m, t), InvariantViolation);
    EXPECT_THROW(DensityMatrix(DenseMatrix::Identity(3, 3) / 3.0, t), DimensionMismatch);
}

TEST(DensityMatrix, VecIsColumnStacking) {
    DenseMatrix m(2, 2);
    m << 1, 2, 3, 4;
    const ComplexVector v = vec(m);
    EXPECT_EQ(v(1), Complex(3.0, 0.0));
    EXPECT_EQ(v(2), Complex(2.0, 0.0));
    EXPECT_EQ(unvec(v, 2), m);
}
