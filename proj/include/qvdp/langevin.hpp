#pragma once

// Semiclassical model: the truncated (second-order) Wigner Fokker-Planck
// equation in Cartesian coordinates X = (x1, y1, x2, y2), simulated through its
// Langevin form dX = mu dt + sigma dW with sigma sigma^T = D.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "qvdp/classical.hpp"
#include "qvdp/errors.hpp"
#include "qvdp/liouvillian.hpp"
#include "qvdp/philox.hpp"

namespace qvdp {

struct DriftVector {
    double mu_x1 = 0.0;
    double mu_y1 = 0.0;
    double mu_x2 = 0.0;
    double mu_y2 = 0.0;
};

using DiffusionMatrix = Eigen::Matrix4d;
using NoiseMatrix = Eigen::Matrix4d;

inline DriftVector drift(const PhaseState& s, const SystemParams& p) {
    const double r1 = s.amp_sq(Mode::one);
    const double r2 = s.amp_sq(Mode::two);
    const double rot1 = p.omega(Mode::one) + 2.0 * p.k1 * r1;
    const double rot2 = p.omega(Mode::two) + 2.0 * p.k2 * r2;
    const double lin1 = 0.5 * p.gain - p.kappa * (r1 - 1.0) - 0.5 * p.v;
    const double lin2 = 0.5 * p.gain - p.kappa * (r2 - 1.0) - 0.5 * p.v;
    return {
        rot1 * s.y1 + lin1 * s.x1 + 0.5 * p.v * s.x2,
        -rot1 * s.x1 + lin1 * s.y1 + 0.5 * p.v * s.y2,
        rot2 * s.y2 + lin2 * s.x2 + 0.5 * p.v * s.x1,
        -rot2 * s.x2 + lin2 * s.y2 + 0.5 * p.v * s.y1,
    };
}

// nu_m = G/2 + kappa (2|a_m|^2 - 1) + V/2
inline double diffusion_nu(const PhaseState& s, const SystemParams& p, Mode m) {
    return 0.5 * p.gain + p.kappa * (2.0 * s.amp_sq(m) - 1.0) + 0.5 * p.v;
}

// D = 1/2 [[nu1, 0, -V/2, 0], [0, nu1, 0, -V/2], [-V/2, 0, nu2, 0], [0, -V/2, 0, nu2]]
inline DiffusionMatrix diffusion(const PhaseState& s, const SystemParams& p) {
    const double nu1 = diffusion_nu(s, p, Mode::one);
    const double nu2 = diffusion_nu(s, p, Mode::two);
    const double c = -0.5 * p.v;
    DiffusionMatrix d;
    d << nu1, 0.0, c, 0.0,
         0.0, nu1, 0.0, c,
         c, 0.0, nu2, 0.0,
         0.0, c, 0.0, nu2;
    return 0.5 * d;
}

constexpr double diffusion_clamp_tolerance = 1e-9;

// Symmetric square root U sqrt(D') U^T. Eigenvalues in [-1e-9, 0) are clamped
// to zero; anything lower means the drift-diffusion truncation has broken down.
inline NoiseMatrix noise_matrix(const DiffusionMatrix& d) {
    if ((d - d.transpose()).cwiseAbs().maxCoeff() > 1e-14 * std::max(1.0, d.cwiseAbs().maxCoeff())) {
        throw InvalidArgument("noise_matrix: diffusion matrix must be symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> solver(d);
    Eigen::Vector4d values = solver.eigenvalues();
    for (int k = 0; k < 4; ++k) {
        if (values(k) < -diffusion_clamp_tolerance) {
            throw IndefiniteDiffusion("diffusion matrix has eigenvalue " + format_number(values(k)));
        }
        values(k) = std::sqrt(std::max(values(k), 0.0));
    }
    return solver.eigenvectors() * values.asDiagonal() * solver.eigenvectors().transpose();
}

namespace detail {

// Square root of the symmetric block [[a, b], [b, c]] with the same clamping
// policy as noise_matrix. The 4x4 diffusion matrix is two copies of this block
// (one for the x components, one for the y components).
struct BlockRoot {
    double s11, s12, s22;
};

inline BlockRoot block_sqrt(double a, double b, double c) {
    const double mean = 0.5 * (a + c);
    const double radius = std::hypot(0.5 * (a - c), b);
    double hi = mean + radius;
    double lo = mean - radius;
    if (lo < -diffusion_clamp_tolerance) {
        throw IndefiniteDiffusion("diffusion matrix has eigenvalue " + format_number(lo));
    }
    hi = std::max(hi, 0.0);
    lo = std::max(lo, 0.0);
    const double shi = std::sqrt(hi);
    const double slo = std::sqrt(lo);
    if (radius == 0.0) return {shi, 0.0, shi};
    // sqrt(M) = [shi (M - lo I) - slo (M - hi I)] / (hi - lo), written with the
    // spectral projector to stay accurate when lo was clamped.
    const double inv = 1.0 / (2.0 * radius);
    const double p11 = (a - (mean - radius)) * inv; // projector onto the hi eigenvector
    const double p12 = b * inv;
    const double p22 = (c - (mean - radius)) * inv;
    return {slo + (shi - slo) * p11, (shi - slo) * p12, slo + (shi - slo) * p22};
}

} // namespace detail

enum class LangevinScheme {
    // X <- X + mu dt + sigma sqrt(dt) xi
    euler_maruyama,
    // Strang splitting: the amplitude-dependent rotation, which conserves
    // |a_m|, is applied exactly for dt/2 on either side of an Euler-Maruyama
    // step of the remaining drift and the noise.
    rotation_split,
};

struct LangevinOptions {
    LangevinScheme scheme = LangevinScheme::rotation_split;
    bool zero_noise = false;      // sigma forced to 0
    std::int64_t sample_every = 0; // record every n-th step (0: only the final state)
    double divergence_radius = 1e3;
};

namespace detail {

inline void rotate(PhaseState& s, const SystemParams& p, double tau) {
    const double phi1 = -(p.omega(Mode::one) + 2.0 * p.k1 * s.amp_sq(Mode::one)) * tau;
    const double phi2 = -(p.omega(Mode::two) + 2.0 * p.k2 * s.amp_sq(Mode::two)) * tau;
    const double c1 = std::cos(phi1), s1 = std::sin(phi1);
    const double c2 = std::cos(phi2), s2 = std::sin(phi2);
    s = {c1 * s.x1 - s1 * s.y1, s1 * s.x1 + c1 * s.y1, c2 * s.x2 - s2 * s.y2, s2 * s.x2 + c2 * s.y2};
}

// Euler-Maruyama step of the drift (without the rotation when `split`) plus
// the noise. `xi` are four standard normals.
inline void euler_step(PhaseState& s, const SystemParams& p, double dt, const std::array<double, 4>& xi, bool split,
                       bool zero_noise) {
    double m[4];
    if (split) {
        const double lin1 = 0.5 * p.gain - p.kappa * (s.amp_sq(Mode::one) - 1.0) - 0.5 * p.v;
        const double lin2 = 0.5 * p.gain - p.kappa * (s.amp_sq(Mode::two) - 1.0) - 0.5 * p.v;
        m[0] = lin1 * s.x1 + 0.5 * p.v * s.x2;
        m[1] = lin1 * s.y1 + 0.5 * p.v * s.y2;
        m[2] = lin2 * s.x2 + 0.5 * p.v * s.x1;
        m[3] = lin2 * s.y2 + 0.5 * p.v * s.y1;
    } else {
        const DriftVector mu = drift(s, p);
        m[0] = mu.mu_x1;
        m[1] = mu.mu_y1;
        m[2] = mu.mu_x2;
        m[3] = mu.mu_y2;
    }

    double n[4] = {0.0, 0.0, 0.0, 0.0};
    if (!zero_noise) {
        // Same sparsity as D: x components couple to x, y to y.
        const double nu1 = diffusion_nu(s, p, Mode::one);
        const double nu2 = diffusion_nu(s, p, Mode::two);
        const BlockRoot r = block_sqrt(0.5 * nu1, -0.25 * p.v, 0.5 * nu2);
        const double sq = std::sqrt(dt);
        n[0] = sq * (r.s11 * xi[0] + r.s12 * xi[2]);
        n[2] = sq * (r.s12 * xi[0] + r.s22 * xi[2]);
        n[1] = sq * (r.s11 * xi[1] + r.s12 * xi[3]);
        n[3] = sq * (r.s12 * xi[1] + r.s22 * xi[3]);
    }
    s.x1 += m[0] * dt + n[0];
    s.y1 += m[1] * dt + n[1];
    s.x2 += m[2] * dt + n[2];
    s.y2 += m[3] * dt + n[3];
}

// One step of the chosen scheme.
inline void langevin_step(PhaseState& s, const SystemParams& p, double dt, const std::array<double, 4>& xi,
                          const LangevinOptions& opt) {
    const bool split = opt.scheme == LangevinScheme::rotation_split;
    if (split) rotate(s, p, 0.5 * dt);
    euler_step(s, p, dt, xi, split, opt.zero_noise);
    if (split) rotate(s, p, 0.5 * dt);
}

inline bool diverged(const PhaseState& s, double radius) {
    const double norm2 = s.x1 * s.x1 + s.y1 * s.y1 + s.x2 * s.x2 + s.y2 * s.y2;
    return !(norm2 <= radius * radius);
}

} // namespace detail

// Noise for step k of stream `stream` is philox_normals(seed, stream, k), so a
// trajectory is a pure function of (seed, stream, dt).
inline Trajectory simulate_trajectory(const PhaseState& state0, const SystemParams& params, double dt,
                                      double t_final, std::uint64_t seed, std::uint32_t stream = 0,
                                      const LangevinOptions& opt = {}) {
    if (!(dt > 0.0) || !(t_final >= dt)) throw InvalidArgument("simulate_trajectory: need dt > 0 and t_final >= dt");
    params.validate();
    const auto steps = static_cast<std::int64_t>(std::llround(t_final / dt));
    Trajectory traj;
    traj.times.push_back(0.0);
    traj.states.push_back(state0);
    PhaseState s = state0;
    for (std::int64_t k = 0; k < steps; ++k) {
        const auto xi = opt.zero_noise ? std::array<double, 4>{} : philox_normals(seed, stream, static_cast<std::uint64_t>(k));
        detail::langevin_step(s, params, dt, xi, opt);
        if (detail::diverged(s, opt.divergence_radius)) {
            throw Divergence("simulate_trajectory: |X| exceeded " + format_number(opt.divergence_radius) +
                             " at t = " + format_number((k + 1) * dt));
        }
        const bool last = k + 1 == steps;
        if (last || (opt.sample_every > 0 && (k + 1) % opt.sample_every == 0)) {
            traj.times.push_back(static_cast<double>(k + 1) * dt);
            traj.states.push_back(s);
        }
    }
    return traj;
}

struct EnsembleStats {
    double mean_amp_sq_1 = 0.0;
    double mean_amp_sq_2 = 0.0;
    double standard_error_1 = 0.0;
    double standard_error_2 = 0.0;
    int n_trajectories = 0;
    int n_diverged = 0;
    double burn_in_time = 0.0;
    double average_time = 0.0;
};

struct EnsembleOptions {
    int n_traj = 256;
    double dt = 1e-3;
    double burn_in = 100.0;
    double average_time = 400.0;
    std::uint64_t seed = 1;
    LangevinScheme scheme = LangevinScheme::rotation_split;
    double max_divergent_fraction = 0.05;
};

// Starts on the uncoupled noiseless limit cycle |a|^2 = G/(2 kappa) with a
// random phase per mode; at the origin when kappa = 0.
inline PhaseState langevin_start(const SystemParams& params, std::uint64_t seed, std::uint32_t stream) {
    const double radius = params.kappa > 0.0 ? std::sqrt(params.gain / (2.0 * params.kappa)) : 0.0;
    const auto u = philox_uniforms(seed, stream, 0);
    const double p1 = 2.0 * std::numbers::pi * u[0];
    const double p2 = 2.0 * std::numbers::pi * u[1];
    return {radius * std::cos(p1), radius * std::sin(p1), radius * std::cos(p2), radius * std::sin(p2)};
}

struct TrajectoryAverage {
    double amp_sq_1 = 0.0;
    double amp_sq_2 = 0.0;
    bool diverged = false;
};

// Time average of |a_m|^2 over [burn_in, burn_in + average_time] for stream `index`.
inline TrajectoryAverage trajectory_average(const SystemParams& params, const EnsembleOptions& opt,
                                            std::uint32_t index) {
    const bool split = opt.scheme == LangevinScheme::rotation_split;
    const double radius = LangevinOptions{}.divergence_radius;
    PhaseState s = langevin_start(params, opt.seed, index);
    const auto burn = static_cast<std::int64_t>(std::llround(opt.burn_in / opt.dt));
    const auto total = burn + static_cast<std::int64_t>(std::llround(opt.average_time / opt.dt));
    double sum1 = 0.0;
    double sum2 = 0.0;
    // The rotation keeps |a_m|, so the closing half-rotation of one split step
    // and the opening one of the next merge into a single full rotation.
    if (split) detail::rotate(s, params, 0.5 * opt.dt);
    for (std::int64_t k = 0; k < total; ++k) {
        detail::euler_step(s, params, opt.dt, philox_normals(opt.seed, index, static_cast<std::uint64_t>(k)), split,
                           false);
        if (split) detail::rotate(s, params, k + 1 < total ? opt.dt : 0.5 * opt.dt);
        if (detail::diverged(s, radius)) return {0.0, 0.0, true};
        if (k >= burn) {
            sum1 += s.amp_sq(Mode::one);
            sum2 += s.amp_sq(Mode::two);
        }
    }
    const double count = static_cast<double>(total - burn);
    return {sum1 / count, sum2 / count, false};
}

inline EnsembleStats ensemble_average(const SystemParams& params, const EnsembleOptions& opt) {
    params.validate();
    if (opt.n_traj < 2) throw InvalidArgument("ensemble_average: n_traj must be >= 2");
    if (!(opt.dt > 0.0) || opt.burn_in < 0.0 || !(opt.average_time >= opt.dt)) {
        throw InvalidArgument("ensemble_average: need dt > 0, burn_in >= 0, average_time >= dt");
    }
    std::vector<TrajectoryAverage> results(static_cast<std::size_t>(opt.n_traj));
    for (int i = 0; i < opt.n_traj; ++i) results[i] = trajectory_average(params, opt, static_cast<std::uint32_t>(i));

    EnsembleStats stats;
    stats.burn_in_time = opt.burn_in;
    stats.average_time = opt.average_time;
    double s1 = 0.0, s2 = 0.0, q1 = 0.0, q2 = 0.0;
    for (const auto& r : results) {
        if (r.diverged) {
            ++stats.n_diverged;
            continue;
        }
        ++stats.n_trajectories;
        s1 += r.amp_sq_1;
        s2 += r.amp_sq_2;
    }
    if (stats.n_diverged > opt.max_divergent_fraction * opt.n_traj || stats.n_trajectories < 2) {
        throw Divergence("ensemble_average: " + std::to_string(stats.n_diverged) + " of " +
                         std::to_string(opt.n_traj) + " trajectories diverged");
    }
    const double n = stats.n_trajectories;
    stats.mean_amp_sq_1 = s1 / n;
    stats.mean_amp_sq_2 = s2 / n;
    for (const auto& r : results) {
        if (r.diverged) continue;
        q1 += (r.amp_sq_1 - stats.mean_amp_sq_1) * (r.amp_sq_1 - stats.mean_amp_sq_1);
        q2 += (r.amp_sq_2 - stats.mean_amp_sq_2) * (r.amp_sq_2 - stats.mean_amp_sq_2);
    }
    stats.standard_error_1 = std::sqrt(q1 / (n - 1.0) / n);
    stats.standard_error_2 = std::sqrt(q2 / (n - 1.0) / n);
    return stats;
}

} // namespace qvdp
