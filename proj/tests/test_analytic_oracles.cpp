#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "qvdp/analytic_oracles.hpp"
#include "reference.hpp"

using namespace qvdp;

TEST(Kummer, ZeroArgument) {
    EXPECT_EQ(kummer_phi(2.5, 1.5, 0.0), 1.0);
    EXPECT_EQ(kummer_phi(-1.0, 7.0, 0.0), 1.0);
}

TEST(Kummer, ReducesToExponential) {
    EXPECT_NEAR(kummer_phi(1.0, 1.0, 1.0), std::numbers::e, 1e-12);
    EXPECT_NEAR(kummer_phi(3.0, 3.0, 10.0), std::exp(10.0), 1e-12 * std::exp(10.0));
}

TEST(Kummer, HighPrecisionReference) {
    // 1F1(2; 3; 0.7) = 2 (e^z (z - 1) + 1) / z^2 at z = 0.7, evaluated in exact arithmetic.
    EXPECT_NEAR(kummer_phi(2.0, 3.0, 0.7), 1.615813011260641, 1e-13);
    const double z = 0.7;
    EXPECT_NEAR(kummer_phi(2.0, 3.0, z), 2.0 * (std::exp(z) * (z - 1.0) + 1.0) / (z * z), 1e-14);
}

TEST(Kummer, ContiguousRelation) {
    // b(b-1) M(a,b-1,z) + b(1-b-z) M(a,b,z) + z(b-a) M(a,b+1,z) = 0
    for (double z : {0.3, 2.0, 9.5}) {
        const double a = 1.7, b = 3.2;
        const double lhs = b * (b - 1) * kummer_phi(a, b - 1, z) + b * (1 - b - z) * kummer_phi(a, b, z) +
                           z * (b - a) * kummer_phi(a, b + 1, z);
        EXPECT_NEAR(lhs, 0.0, 1e-12 * b * b * kummer_phi(a, b - 1, z));
    }
}

TEST(Kummer, RejectsPoles) { EXPECT_THROW(kummer_phi(1.0, -2.0, 1.0), InvalidArgument); }

TEST(Pochhammer, Values) {
    EXPECT_EQ(pochhammer(3.3, 0), 1.0);
    EXPECT_EQ(pochhammer(1.0, 5), 120.0);
    EXPECT_DOUBLE_EQ(pochhammer(2.5, 3), 39.375);
}

TEST(SingleVdp, VanishingGainLimit) {
    // Rate balance in the G -> 0 limit gives p0 = 2/3, p1 = 1/3.
    const SteadyDiagonal d = single_vdp_steady_diag(1e-6, 6);
    EXPECT_NEAR(d.probabilities[0], 2.0 / 3.0, 1e-5);
    EXPECT_NEAR(d.probabilities[1], 1.0 / 3.0, 1e-5);
    EXPECT_LT(d.probabilities[2], 1e-5);
}

TEST(SingleVdp, TailSumsToOne) {
    EXPECT_NEAR(single_vdp_steady_diag(5.0, 30).sum(), 1.0, 1e-6);
    EXPECT_NEAR(single_vdp_steady_diag(0.5, 30).sum(), 1.0, 1e-12);
}

TEST(SingleVdp, SatisfiesRateEquations) {
    // Diagonal master equation of one oscillator:
    //   0 = G[n p_{n-1} - (n+1) p_n] + kappa[(n+2)(n+1) p_{n+2} - n(n-1) p_n]
    const double r = 2.0;
    const SteadyDiagonal d = single_vdp_steady_diag(r, 60);
    const auto& p = d.probabilities;
    for (int n = 0; n + 2 < 60; ++n) {
        const double gain = r * ((n > 0 ? n * p[n - 1] : 0.0) - (n + 1) * p[n]);
        const double loss = (n + 2.0) * (n + 1.0) * p[n + 2] - n * (n - 1.0) * p[n];
        EXPECT_NEAR(gain + loss, 0.0, 1e-13) << n;
    }
}

TEST(SingleVdp, MatchesNumericalSteadyState) {
    const SystemParams p = test::params(0.0, 3.0, 0.0, 0.2, 0.0);
    const TruncationSpec t = uniform_truncation(15);
    const Eigen::VectorXd pops = populations(steady_state(p, t).rho, Mode::one);
    const SteadyDiagonal exact = single_vdp_steady_diag(5.0, 15);
    // The cutoff at 15 leaves a tail of order 1e-6 at G/kappa = 5.
    const double tail = 1.0 - exact.sum();
    EXPECT_LT(tail, 1e-5);
    for (int n = 0; n <= 15; ++n) EXPECT_NEAR(pops(n), exact.probabilities[n], 2.0 * tail);
}

TEST(Aronson, Window) {
    EXPECT_TRUE(aronson_death_region(1.0, 6.0, 5.0));
    EXPECT_FALSE(aronson_death_region(1.0, 0.5, 5.0));
    EXPECT_FALSE(aronson_death_region(1.0, 14.0, 5.0));
    EXPECT_FALSE(aronson_death_region(1.0, 6.0, 0.0));
}

TEST(DenseOracle, AgreesWithSparseSolver) {
    const SystemParams p = test::params(0.0, 1.0, 1.0, 0.2, 6.0);
    const TruncationSpec t = uniform_truncation(4);
    const DensityMatrix oracle = dense_steady_oracle(p, t);
    EXPECT_LT((oracle.matrix() - steady_state(p, t).rho.matrix()).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_NEAR(oracle.trace().real(), 1.0, 1e-14);
    EXPECT_LT(test::master_rhs(p, t, oracle.matrix()).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(DenseOracle, UncoupledDiagonal) {
    const SystemParams p = test::params(0.0, 0.0, 0.0, 2.0, 0.0);
    const TruncationSpec t = uniform_truncation(5);
    const Eigen::VectorXd pops = populations(dense_steady_oracle(p, t), Mode::one);
    const Eigen::VectorXd rates = test::truncated_rate_steady(1.0, 2.0, 5);
    EXPECT_LT((pops - rates).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(DenseOracle, RejectsLargeSystems) {
    EXPECT_THROW(dense_steady_oracle(SystemParams{}, uniform_truncation(8)), InvalidArgument);
}
