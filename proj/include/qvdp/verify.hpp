#pragma once

// Self-checks of the solvers against independent oracles.

#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "qvdp/analytic_oracles.hpp"
#include "qvdp/classical.hpp"
#include "qvdp/langevin.hpp"
#include "qvdp/liouvillian.hpp"
#include "qvdp/philox.hpp"

namespace qvdp {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

namespace detail {

inline std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

template <typename F>
CheckResult run_check(const std::string& name, F&& f) {
    CheckResult r{name, false, {}};
    try {
        f(r);
    } catch (const std::exception& e) {
        r.passed = false;
        r.detail = std::string("exception: ") + e.what();
    }
    return r;
}

} // namespace detail

inline std::vector<CheckResult> run_oracle_suite() {
    using detail::sci;
    std::vector<CheckResult> out;

    out.push_back(detail::run_check("philox known-answer vector", [](CheckResult& r) {
        const auto x = Philox4x32::generate({0, 0, 0, 0}, {0, 0});
        const auto y = Philox4x32::generate({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                            {0xa4093822u, 0x299f31d0u});
        r.passed = x == Philox4x32::Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u} &&
                   y == Philox4x32::Counter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u};
        r.detail = r.passed ? "2 vectors" : "mismatch";
    }));

    out.push_back(detail::run_check("analytic single-oscillator steady state", [](CheckResult& r) {
        double worst = 0.0;
        for (double ratio : {0.5, 2.0}) {
            SystemParams p;
            p.kappa = 1.0 / ratio;
            const TruncationSpec t = uniform_truncation(15);
            const SteadyState ss = steady_state(p, t);
            const Eigen::VectorXd pops = populations(ss.rho, Mode::one);
            const SteadyDiagonal exact = single_vdp_steady_diag(ratio, 15);
            for (int n = 0; n <= 15; ++n) worst = std::max(worst, std::abs(pops(n) - exact.probabilities[n]));
        }
        r.passed = worst < 1e-8;
        r.detail = "max |dp| = " + sci(worst) + " (G/kappa = 0.5, 2)";
    }));

    out.push_back(detail::run_check("dense null-space oracle", [](CheckResult& r) {
        SystemParams p;
        p.kappa = 0.2;
        p.v = 6.0;
        p.k1 = p.k2 = 1.0;
        const TruncationSpec t = uniform_truncation(4);
        const double diff =
            (steady_state(p, t).rho.matrix() - dense_steady_oracle(p, t).matrix()).cwiseAbs().maxCoeff();
        r.passed = diff < 1e-8;
        r.detail = "max |d rho| = " + sci(diff);
    }));

    out.push_back(detail::run_check("noise matrix reproduces diffusion", [](CheckResult& r) {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> u(-2.0, 2.0);
        SystemParams p;
        p.kappa = 0.2;
        p.v = 2.0;
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const PhaseState s{u(rng), u(rng), u(rng), u(rng)};
            const DiffusionMatrix d = diffusion(s, p);
            const NoiseMatrix sigma = noise_matrix(d);
            worst = std::max(worst, (sigma * sigma.transpose() - d).cwiseAbs().maxCoeff());
        }
        r.passed = worst < 1e-12;
        r.detail = "max |sigma sigma^T - D| = " + sci(worst) + " over 1000 states";
    }));

    out.push_back(detail::run_check("classical death matches the Aronson window", [](CheckResult& r) {
        // (delta, v) pairs well inside and well outside G < V < (delta^2 + G^2) / (2G).
        const double pts[][2] = {{0.0, 0.5}, {0.0, 4.0}, {6.0, 5.0}, {8.0, 10.0}, {3.0, 15.0}, {2.0, 0.3}};
        int agree = 0;
        for (const auto& pt : pts) {
            SystemParams p;
            p.kappa = 0.2;
            p.delta = pt[0];
            p.v = pt[1];
            ClassicalOptions opt;
            opt.n_starts = 4;
            agree += classical_death(p, opt) == aronson_death_region(p.gain, p.v, p.delta) ? 1 : 0;
        }
        r.passed = agree == 6;
        r.detail = std::to_string(agree) + "/6 points agree";
    }));
    return out;
}

} // namespace qvdp
