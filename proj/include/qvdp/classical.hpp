#pragma once

// Noiseless mean-field amplitudes of the two coupled oscillators:
//   d a_m/dt = -i[w_m + 2K_m |a_m|^2] a_m + (G/2) a_m - kappa |a_m|^2 a_m + (V/2)(a_other - a_m)

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "qvdp/errors.hpp"
#include "qvdp/liouvillian.hpp"
#include "qvdp/philox.hpp"

namespace qvdp {

// a_m = x_m + i y_m
struct PhaseState {
    double x1 = 0.0;
    double y1 = 0.0;
    double x2 = 0.0;
    double y2 = 0.0;

    double amp_sq(Mode m) const noexcept { return m == Mode::one ? x1 * x1 + y1 * y1 : x2 * x2 + y2 * y2; }
    bool finite() const noexcept {
        return std::isfinite(x1) && std::isfinite(y1) && std::isfinite(x2) && std::isfinite(y2);
    }

    std::array<double, 4> to_array() const noexcept { return {x1, y1, x2, y2}; }
    static PhaseState from_array(const std::array<double, 4>& a) noexcept { return {a[0], a[1], a[2], a[3]}; }

    // Multiplies both amplitudes by e^{i phi}.
    PhaseState rotated(double phi) const noexcept {
        const double c = std::cos(phi);
        const double s = std::sin(phi);
        return {c * x1 - s * y1, s * x1 + c * y1, c * x2 - s * y2, s * x2 + c * y2};
    }
};

inline PhaseState classical_rhs(const PhaseState& s, const SystemParams& p) {
    const double r1 = s.amp_sq(Mode::one);
    const double r2 = s.amp_sq(Mode::two);
    const double rot1 = p.omega(Mode::one) + 2.0 * p.k1 * r1;
    const double rot2 = p.omega(Mode::two) + 2.0 * p.k2 * r2;
    const double g1 = 0.5 * p.gain - p.kappa * r1 - 0.5 * p.v;
    const double g2 = 0.5 * p.gain - p.kappa * r2 - 0.5 * p.v;
    const double c = 0.5 * p.v;
    return {
        rot1 * s.y1 + g1 * s.x1 + c * s.x2,
        -rot1 * s.x1 + g1 * s.y1 + c * s.y2,
        rot2 * s.y2 + g2 * s.x2 + c * s.x1,
        -rot2 * s.x2 + g2 * s.y2 + c * s.y1,
    };
}

// w~_2 - w~_1 with w~_m = w_m + 2 K_m |a_m|^2.
inline double effective_detuning(const PhaseState& s, const SystemParams& p) {
    return (p.omega(Mode::two) + 2.0 * p.k2 * s.amp_sq(Mode::two)) -
           (p.omega(Mode::one) + 2.0 * p.k1 * s.amp_sq(Mode::one));
}

struct Trajectory {
    std::vector<double> times;
    std::vector<PhaseState> states;

    const PhaseState& final_state() const { return states.back(); }

    // Mean of |a_m|^2 over samples with time >= t_from.
    double time_average_amp_sq(Mode m, double t_from) const {
        double sum = 0.0;
        std::size_t count = 0;
        for (std::size_t k = 0; k < times.size(); ++k) {
            if (times[k] >= t_from) {
                sum += states[k].amp_sq(m);
                ++count;
            }
        }
        return count > 0 ? sum / static_cast<double>(count) : 0.0;
    }
};

struct ClassicalOptions {
    double t_final = 500.0;
    double tol = 1e-9;
    double sample_interval = 0.1;
    double average_fraction = 0.2;
    int n_starts = 8;
    std::uint64_t seed = 1;
};

// Dense-output Dormand-Prince integration sampled every `sample_interval`
// (and at t_final).
inline Trajectory integrate_classical(const PhaseState& state0, const SystemParams& params, double t_final,
                                      double tol, double sample_interval = 0.1) {
    namespace ode = boost::numeric::odeint;
    if (!(t_final > 0.0) || !(tol > 0.0) || !(sample_interval > 0.0)) {
        throw InvalidArgument("integrate_classical: t_final, tol and sample_interval must be > 0");
    }
    params.validate();
    using State = std::array<double, 4>;
    auto rhs = [&params](const State& x, State& dxdt, double) {
        dxdt = classical_rhs(PhaseState::from_array(x), params).to_array();
    };
    auto stepper = ode::make_dense_output(tol, tol, ode::runge_kutta_dopri5<State>());

    Trajectory traj;
    const auto samples = static_cast<std::size_t>(std::floor(t_final / sample_interval));
    traj.times.reserve(samples + 2);
    traj.states.reserve(samples + 2);
    State x = state0.to_array();
    traj.times.push_back(0.0);
    traj.states.push_back(state0);

    stepper.initialize(x, 0.0, std::min(1e-2, t_final));
    std::size_t next = 1;
    State sample{};
    const double min_dt = 1e-12 * std::max(1.0, t_final);
    try {
        while (stepper.current_time() < t_final) {
            stepper.do_step(rhs);
            if (stepper.current_time_step() < min_dt) {
                throw StepSizeUnderflow("integrate_classical: step size underflow at t = " +
                                        format_number(stepper.current_time()));
            }
            const double reached = std::min(stepper.current_time(), t_final);
            while (next <= samples && next * sample_interval <= reached) {
                stepper.calc_state(next * sample_interval, sample);
                traj.times.push_back(next * sample_interval);
                traj.states.push_back(PhaseState::from_array(sample));
                ++next;
            }
        }
    } catch (const ode::step_adjustment_error& e) {
        throw StepSizeUnderflow(std::string("integrate_classical: ") + e.what());
    }
    if (traj.times.back() < t_final) {
        stepper.calc_state(t_final, sample);
        traj.times.push_back(t_final);
        traj.states.push_back(PhaseState::from_array(sample));
    }
    if (!traj.final_state().finite()) throw Divergence("integrate_classical: state became non-finite");
    return traj;
}

// Random start uniform in the disk |a_m| <= 2 sqrt(G / kappa'), kappa' = max(kappa, 0.05 G).
inline PhaseState classical_start(const SystemParams& params, std::uint64_t seed, std::uint32_t start) {
    const double kappa_eff = std::max(params.kappa, 0.05 * params.gain);
    const double radius = 2.0 * std::sqrt(params.gain / kappa_eff);
    const auto u = philox_uniforms(seed, start, 0);
    const double r1 = radius * std::sqrt(u[0]);
    const double r2 = radius * std::sqrt(u[2]);
    const double p1 = 2.0 * std::numbers::pi * u[1];
    const double p2 = 2.0 * std::numbers::pi * u[3];
    return {r1 * std::cos(p1), r1 * std::sin(p1), r2 * std::cos(p2), r2 * std::sin(p2)};
}

struct ClassicalAmplitudes {
    double amp_sq_1 = 0.0;
    double amp_sq_2 = 0.0;
};

// Max over starts of the late-time average |a_m|^2.
inline ClassicalAmplitudes long_time_amplitudes(const SystemParams& params, const ClassicalOptions& opt = {}) {
    if (opt.n_starts < 1) throw InvalidArgument("long_time_amplitude: n_starts must be >= 1");
    ClassicalAmplitudes out;
    const double t_from = (1.0 - opt.average_fraction) * opt.t_final;
    for (int s = 0; s < opt.n_starts; ++s) {
        const Trajectory traj = integrate_classical(classical_start(params, opt.seed, static_cast<std::uint32_t>(s)),
                                                    params, opt.t_final, opt.tol, opt.sample_interval);
        out.amp_sq_1 = std::max(out.amp_sq_1, traj.time_average_amp_sq(Mode::one, t_from));
        out.amp_sq_2 = std::max(out.amp_sq_2, traj.time_average_amp_sq(Mode::two, t_from));
    }
    return out;
}

inline double long_time_amplitude(const SystemParams& params, int n_starts, const ClassicalOptions& base = {}) {
    ClassicalOptions opt = base;
    opt.n_starts = n_starts;
    return long_time_amplitudes(params, opt).amp_sq_1;
}

constexpr double classical_death_threshold = 1e-8;

inline bool classical_death(const SystemParams& params, const ClassicalOptions& opt = {}) {
    return long_time_amplitudes(params, opt).amp_sq_1 < classical_death_threshold;
}

} // namespace qvdp
