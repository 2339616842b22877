#pragma once

// Canned figure jobs (numbered 2 to 5) and the Wigner job.

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qvdp/config.hpp"
#include "qvdp/errors.hpp"
#include "qvdp/liouvillian.hpp"
#include "qvdp/phase_space.hpp"
#include "qvdp/sweep.hpp"

namespace qvdp {

struct WignerSpec {
    SystemParams params;
    TruncationSpec trunc;
    Mode mode = Mode::one;
    int points = 101;
    std::optional<double> half_width;

    WignerGrid grid() const {
        WignerGrid g = default_wigner_grid(params, points);
        if (half_width) {
            g.re_min = g.im_min = -*half_width;
            g.re_max = g.im_max = *half_width;
        }
        return g;
    }
};

inline WignerSpec parse_wigner_spec(const std::string& text) {
    const ConfigDocument doc = parse_config(text);
    if (!doc.sections.empty()) throw ConfigError("wigner configs take no sections", doc.sections.front().line());
    const ConfigBlock& top = doc.top;
    WignerSpec spec;
    SystemParams& p = spec.params;
    p.delta = top.get_double("delta", 0.0);
    p.gain = top.get_double("gain", 1.0);
    p.kappa = top.get_double("kappa", 0.0);
    p.v = top.get_double("v", 0.0);
    if (top.has("k") && (top.has("k1") || top.has("k2"))) throw ConfigError("give either k or k1/k2", top.line_of("k"), "k");
    const double k = top.get_double("k", 0.0);
    p.k1 = top.get_double("k1", k);
    p.k2 = top.get_double("k2", k);
    try {
        p.validate();
    } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
    }
    const long long n_max = top.get_int("n_max", default_truncation(p).n_max_1);
    spec.trunc = {static_cast<int>(top.get_int("n_max_1", n_max)), static_cast<int>(top.get_int("n_max_2", n_max))};
    try {
        spec.trunc.validate();
    } catch (const InvalidArgument& e) {
        throw ConfigError(e.what(), top.line_of("n_max"), "n_max");
    }
    const long long mode = top.get_int("mode", 1);
    if (mode != 1 && mode != 2) throw ConfigError("mode must be 1 or 2", top.line_of("mode"), "mode");
    spec.mode = mode_from_int(static_cast<int>(mode));
    const long long points = top.get_int("points", 101);
    if (points < 8 || points > 2001) throw ConfigError("points must be in [8, 2001]", top.line_of("points"), "points");
    spec.points = static_cast<int>(points);
    if (top.has("half_width")) {
        const double h = top.get_double("half_width");
        if (!(h > 0.0)) throw ConfigError("must be > 0", top.line_of("half_width"), "half_width");
        spec.half_width = h;
    }
    top.check_all_used();
    return spec;
}

inline std::string serialize(const WignerSpec& spec) {
    using detail::format_exact;
    std::ostringstream out;
    out << "delta = " << format_exact(spec.params.delta) << "\ngain = " << format_exact(spec.params.gain)
        << "\nkappa = " << format_exact(spec.params.kappa) << "\nv = " << format_exact(spec.params.v)
        << "\nk1 = " << format_exact(spec.params.k1) << "\nk2 = " << format_exact(spec.params.k2)
        << "\nn_max_1 = " << spec.trunc.n_max_1 << "\nn_max_2 = " << spec.trunc.n_max_2
        << "\nmode = " << to_int(spec.mode) << "\npoints = " << spec.points << '\n';
    if (spec.half_width) out << "half_width = " << format_exact(*spec.half_width) << '\n';
    return out.str();
}

struct WignerResult {
    WignerSpec spec;
    WignerGrid grid;
    double mean_phonon = 0.0;
    double trunc_check = 0.0;
    double residual = 0.0;
};

inline WignerResult run_wigner(const WignerSpec& spec) {
    const SteadyState ss = steady_state(spec.params, spec.trunc);
    WignerResult out;
    out.spec = spec;
    out.mean_phonon = mean_phonon(ss.rho, spec.mode);
    out.trunc_check = check_truncation(ss.rho, spec.trunc);
    out.residual = ss.residual;
    out.grid = wigner(partial_trace(ss.rho, spec.mode), spec.grid());
    return out;
}

inline std::string to_csv(const WignerResult& r) {
    using detail::format_value;
    std::ostringstream out;
    out << "# qvdp wigner\n# version = " << QVDP_VERSION << '\n';
    out << "# mean_phonon = " << format_value(r.mean_phonon) << '\n';
    out << "# trunc_check = " << format_value(r.trunc_check) << '\n';
    out << "# residual = " << format_value(r.residual) << '\n';
    out << csv_spec_begin << '\n';
    std::istringstream lines(serialize(r.spec));
    for (std::string line; std::getline(lines, line);) out << "# " << line << '\n';
    out << csv_spec_end << '\n';
    out << "re,im,w\n";
    for (int i = 0; i < r.grid.n_im; ++i)
        for (int k = 0; k < r.grid.n_re; ++k)
            out << format_value(r.grid.re(k)) << ',' << format_value(r.grid.im(i)) << ','
                << format_value(r.grid.values(i, k)) << '\n';
    return out.str();
}

struct FigureJob {
    std::string file;
    std::string description;
    std::optional<SweepSpec> sweep;
    std::optional<WignerSpec> wigner;
};

namespace detail {

inline SweepSpec figure_spec(Model model, Axis a1, std::optional<Axis> a2, SystemParams fixed,
                             std::vector<std::string> observables) {
    SweepSpec s;
    s.model = model;
    s.axis1 = std::move(a1);
    s.axis2 = std::move(a2);
    s.fixed = fixed;
    s.observables = std::move(observables);
    return s;
}

inline SystemParams make_params(double delta, double k1, double k2, double kappa, double v) {
    SystemParams p;
    p.delta = delta;
    p.k1 = k1;
    p.k2 = k2;
    p.kappa = kappa;
    p.v = v;
    return p;
}

// Ensemble settings for the canned semiclassical figures.
inline EnsembleOptions figure_ensemble(int n_traj) {
    EnsembleOptions e;
    e.n_traj = n_traj;
    e.burn_in = 20.0;
    e.average_time = 60.0;
    return e;
}

inline ClassicalOptions figure_classical() {
    ClassicalOptions c;
    c.t_final = 300.0;
    c.tol = 1e-8;
    c.n_starts = 4;
    return c;
}

} // namespace detail

// Jobs that reproduce the data behind figure `which` (2 to 5).
inline std::vector<FigureJob> figure_jobs(int which) {
    using detail::figure_spec;
    using detail::make_params;
    std::vector<FigureJob> jobs;
    switch (which) {
    case 2: {
        // (Delta, V) maps at kappa = 0.2 for K = 0 and K = 1 in all three models.
        for (double k : {0.0, 1.0}) {
            const std::string tag = k == 0.0 ? "k0" : "k1";
            const SystemParams p = make_params(0.0, k, k, 0.2, 0.0);
            SweepSpec c = figure_spec(Model::classical, {"delta", 0.0, 10.0, 61}, Axis{"v", 0.0, 20.0, 61}, p,
                                      {"amp_sq_1"});
            c.classical = detail::figure_classical();
            jobs.push_back({"fig2_classical_" + tag + ".csv", "noiseless |a1|^2 over (delta, v)", c, {}});
            SweepSpec s = figure_spec(Model::semiclassical, {"delta", 0.0, 10.0, 21}, Axis{"v", 0.0, 20.0, 21}, p,
                                      {"amp_sq_1"});
            s.ensemble = detail::figure_ensemble(64);
            jobs.push_back({"fig2_semiclassical_" + tag + ".csv", "ensemble mean |a1|^2 over (delta, v)", s, {}});
            SweepSpec q = figure_spec(Model::quantum, {"delta", 0.0, 10.0, 61}, Axis{"v", 0.0, 20.0, 61}, p,
                                      {"n1"});
            jobs.push_back({"fig2_quantum_" + tag + ".csv", "<n1> over (delta, v)", q, {}});
        }
        break;
    }
    case 3: {
        // Reduced Wigner functions before (delta = 2) and after (delta = 8)
        // amplitude death at V = 6, kappa = 0.2.
        for (double k : {0.0, 1.0}) {
            for (double delta : {2.0, 8.0}) {
                WignerSpec w;
                w.params = make_params(delta, k, k, 0.2, 6.0);
                w.trunc = uniform_truncation(12);
                w.half_width = 4.0;
                w.points = 101;
                const std::string name = std::string("fig3_wigner_k") + (k == 0.0 ? "0" : "1") + "_delta" +
                                         (delta == 2.0 ? "2" : "8") + ".csv";
                jobs.push_back({name, "reduced Wigner function of mode 1", {}, w});
            }
        }
        // <n1> and mean |a1|^2 against K at delta = 0.
        const SystemParams p = make_params(0.0, 0.0, 0.0, 0.2, 0.0);
        SweepSpec q = figure_spec(Model::quantum, {"k", 0.0, 2.0, 21}, Axis{"v", 2.0, 8.0, 2}, p, {"n1"});
        jobs.push_back({"fig3_quantum_k_sweep.csv", "<n1> against K for V = 2 and 8", q, {}});
        SweepSpec s = figure_spec(Model::semiclassical, {"k", 0.0, 2.0, 5}, Axis{"v", 2.0, 8.0, 2}, p, {"amp_sq_1"});
        s.ensemble = detail::figure_ensemble(256);
        jobs.push_back({"fig3_semiclassical_k_sweep.csv", "mean |a1|^2 against K for V = 2 and 8", s, {}});
        break;
    }
    case 4: {
        // Delta scans with K1 = 50; axis2 selects K2 = 0 or 50.
        for (double v : {2.0, 8.0}) {
            const std::string tag = v == 2.0 ? "v2" : "v8";
            const SystemParams p = make_params(0.0, 50.0, 0.0, 0.0, v);
            SweepSpec q = figure_spec(Model::quantum, {"delta", -150.0, 200.0, 351}, Axis{"k2", 0.0, 50.0, 2}, p,
                                      {"n1", "n2"});
            jobs.push_back({"fig4_quantum_" + tag + ".csv", "<n1>, <n2> against delta", q, {}});
            SweepSpec s = figure_spec(Model::semiclassical, {"delta", -150.0, 200.0, 36}, Axis{"k2", 0.0, 50.0, 2},
                                      p, {"amp_sq_1", "amp_sq_2"});
            s.ensemble = detail::figure_ensemble(128);
            jobs.push_back({"fig4_semiclassical_" + tag + ".csv", "mean |a1|^2, |a2|^2 against delta", s, {}});
        }
        break;
    }
    case 5: {
        SweepSpec a = figure_spec(Model::quantum, {"delta", -150.0, 150.0, 101}, Axis{"k", 0.0, 60.0, 61},
                                  make_params(0.0, 0.0, 0.0, 0.25, 2.0), {"n1", "ndiff"});
        a.trunc = uniform_truncation(10);
        jobs.push_back({"fig5_delta_k.csv", "<n1> and <n1 - n2> over (delta, K)", a, {}});
        SweepSpec c = figure_spec(Model::quantum, {"delta", -150.0, 150.0, 101}, Axis{"kappa", 0.0, 0.5, 61},
                                  make_params(0.0, 50.0, 50.0, 0.0, 2.0), {"ndiff"});
        c.trunc = uniform_truncation(12);
        jobs.push_back({"fig5_delta_kappa.csv", "<n1 - n2> over (delta, kappa)", c, {}});
        SweepSpec d = figure_spec(Model::quantum, {"delta", 0.0, 10.0, 61}, Axis{"v", 0.0, 20.0, 61},
                                  make_params(0.0, 1.0, 1.0, 0.2, 0.0), {"ndiff"});
        jobs.push_back({"fig5_delta_v.csv", "<n1 - n2> over (delta, v)", d, {}});
        break;
    }
    default:
        throw InvalidArgument("figure must be 2, 3, 4 or 5");
    }
    return jobs;
}

} // namespace qvdp
