#pragma once

// Parameter sweeps over the quantum, semiclassical and classical models, and
// their CSV persistence.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "qvdp/classical.hpp"
#include "qvdp/config.hpp"
#include "qvdp/errors.hpp"
#include "qvdp/langevin.hpp"
#include "qvdp/liouvillian.hpp"

#ifndef QVDP_VERSION
#define QVDP_VERSION "0.0.0"
#endif

namespace qvdp {

enum class Model { quantum, semiclassical, classical };

inline std::string to_string(Model m) {
    switch (m) {
    case Model::quantum: return "quantum";
    case Model::semiclassical: return "semiclassical";
    case Model::classical: return "classical";
    }
    return "unknown";
}

struct Axis {
    std::string param;
    double min = 0.0;
    double max = 1.0;
    int points = 2;

    double value(int k) const { return k == points - 1 ? max : min + (max - min) * k / (points - 1); }
};

struct SweepSpec {
    Model model = Model::quantum;
    Axis axis1;
    std::optional<Axis> axis2;
    SystemParams fixed;
    std::optional<TruncationSpec> trunc; // quantum only; chosen from K when absent
    bool auto_escalate = true;
    EnsembleOptions ensemble;            // semiclassical only
    ClassicalOptions classical;          // classical only
    std::uint64_t seed = 1;
    std::vector<std::string> observables;

    std::size_t n_points() const { return static_cast<std::size_t>(axis1.points) * (axis2 ? axis2->points : 1); }
};

inline const std::vector<std::string>& axis_parameters() {
    static const std::vector<std::string> names = {"delta", "v", "k", "k1", "k2", "kappa"};
    return names;
}

inline void set_parameter(SystemParams& p, const std::string& name, double value) {
    if (name == "delta") p.delta = value;
    else if (name == "v") p.v = value;
    else if (name == "k") p.k1 = p.k2 = value;
    else if (name == "k1") p.k1 = value;
    else if (name == "k2") p.k2 = value;
    else if (name == "kappa") p.kappa = value;
    else if (name == "gain") p.gain = value;
    else throw InvalidArgument("unknown sweep parameter '" + name + "'");
}

inline std::vector<std::string> default_observables(Model m) {
    if (m == Model::quantum) return {"n1", "n2", "ndiff"};
    return {"amp_sq_1", "amp_sq_2"};
}

namespace detail {

inline std::string format_exact(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string format_value(double x) {
    if (std::isnan(x)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

inline Axis parse_axis(const ConfigBlock& block) {
    Axis axis;
    axis.param = block.get_string("param");
    const auto& names = axis_parameters();
    if (std::find(names.begin(), names.end(), axis.param) == names.end()) {
        throw ConfigError("unknown axis parameter '" + axis.param + "'", block.line_of("param"), "param");
    }
    axis.min = block.get_double("min");
    axis.max = block.get_double("max");
    const long long points = block.get_int("points");
    if (points < 2) throw ConfigError("axis needs at least 2 points", block.line_of("points"), "points");
    if (!(axis.min < axis.max)) throw ConfigError("axis range must satisfy min < max", block.line_of("max"), "max");
    axis.points = static_cast<int>(points);
    block.check_all_used();
    return axis;
}

// Physical keys an axis parameter occupies.
inline std::vector<std::string> occupied_keys(const std::string& axis_param) {
    if (axis_param == "k") return {"k", "k1", "k2"};
    if (axis_param == "k1" || axis_param == "k2") return {axis_param, "k"};
    return {axis_param};
}

} // namespace detail

inline SweepSpec parse_sweep_spec(const std::string& text) {
    const ConfigDocument doc = parse_config(text);
    const ConfigBlock& top = doc.top;
    SweepSpec spec;

    const std::string model = top.get_string("model");
    if (model == "quantum") spec.model = Model::quantum;
    else if (model == "semiclassical") spec.model = Model::semiclassical;
    else if (model == "classical") spec.model = Model::classical;
    else throw ConfigError("model must be quantum, semiclassical or classical", top.line_of("model"), "model");

    for (const auto& section : doc.sections) {
        if (section.name() != "axis1" && section.name() != "axis2") {
            throw ConfigError("unknown section [" + section.name() + "]", section.line());
        }
    }
    const ConfigBlock* a1 = doc.section("axis1");
    if (!a1) throw ConfigError("missing required section [axis1]", 0, "axis1");
    spec.axis1 = detail::parse_axis(*a1);
    if (const ConfigBlock* a2 = doc.section("axis2")) spec.axis2 = detail::parse_axis(*a2);

    std::set<std::string> occupied;
    for (const Axis* axis : {&spec.axis1, spec.axis2 ? &*spec.axis2 : nullptr}) {
        if (!axis) continue;
        for (const auto& key : detail::occupied_keys(axis->param)) {
            if (axis != &spec.axis1 && detail::occupied_keys(spec.axis1.param) == detail::occupied_keys(axis->param)) {
                throw ConfigError("axis parameters must be distinct", doc.section("axis2")->line_of("param"), "param");
            }
            if (top.has(key)) {
                throw ConfigError("parameter is swept by an axis and cannot also be fixed", top.line_of(key), key);
            }
            occupied.insert(key);
        }
    }
    if (spec.axis2 && ((spec.axis1.param == "k" && (spec.axis2->param == "k1" || spec.axis2->param == "k2")) ||
                       (spec.axis2->param == "k" && (spec.axis1.param == "k1" || spec.axis1.param == "k2")))) {
        throw ConfigError("axis parameters must be distinct", doc.section("axis2")->line_of("param"), "param");
    }

    SystemParams& p = spec.fixed;
    p.delta = top.get_double("delta", 0.0);
    p.gain = top.get_double("gain", 1.0);
    p.kappa = top.get_double("kappa", 0.0);
    p.v = top.get_double("v", 0.0);
    if (top.has("k") && (top.has("k1") || top.has("k2"))) {
        throw ConfigError("give either k or k1/k2", top.line_of("k"), "k");
    }
    const double k = top.get_double("k", 0.0);
    p.k1 = top.get_double("k1", k);
    p.k2 = top.get_double("k2", k);
    try {
        SystemParams probe = p;
        set_parameter(probe, spec.axis1.param, spec.axis1.min);
        probe.validate();
    } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
    }

    spec.seed = static_cast<std::uint64_t>(top.get_int("seed", 1));
    if (top.has("observables")) {
        spec.observables = top.get_list("observables");
    } else {
        spec.observables = default_observables(spec.model);
    }
    const std::vector<std::string> allowed = spec.model == Model::quantum
                                                 ? std::vector<std::string>{"n1", "n2", "ndiff"}
                                                 : std::vector<std::string>{"amp_sq_1", "amp_sq_2"};
    for (const auto& o : spec.observables) {
        if (std::find(allowed.begin(), allowed.end(), o) == allowed.end()) {
            throw ConfigError("observable '" + o + "' is not available for model " + model,
                              top.line_of("observables"), "observables");
        }
    }

    auto positive = [&](const std::string& key, double x) {
        if (!(x > 0.0)) throw ConfigError("must be > 0", top.line_of(key), key);
        return x;
    };

    switch (spec.model) {
    case Model::quantum: {
        const bool has_both = top.has("n_max");
        if (has_both && (top.has("n_max_1") || top.has("n_max_2"))) {
            throw ConfigError("give either n_max or n_max_1/n_max_2", top.line_of("n_max"), "n_max");
        }
        if (has_both || top.has("n_max_1") || top.has("n_max_2")) {
            const long long both = top.get_int("n_max", 6);
            TruncationSpec t{static_cast<int>(top.get_int("n_max_1", both)),
                             static_cast<int>(top.get_int("n_max_2", both))};
            try {
                t.validate();
            } catch (const InvalidArgument& e) {
                throw ConfigError(e.what(), top.line_of(has_both ? "n_max" : "n_max_1"), has_both ? "n_max" : "n_max_1");
            }
            spec.trunc = t;
        }
        spec.auto_escalate = top.get_bool("auto_escalate", true);
        break;
    }
    case Model::semiclassical: {
        EnsembleOptions& e = spec.ensemble;
        const long long n_traj = top.get_int("n_traj", e.n_traj);
        if (n_traj < 2) throw ConfigError("n_traj must be >= 2", top.line_of("n_traj"), "n_traj");
        e.n_traj = static_cast<int>(n_traj);
        e.dt = positive("dt", top.get_double("dt", e.dt));
        e.burn_in = top.get_double("burn_in", e.burn_in);
        if (e.burn_in < 0.0) throw ConfigError("must be >= 0", top.line_of("burn_in"), "burn_in");
        e.average_time = positive("average_time", top.get_double("average_time", e.average_time));
        const std::string scheme = top.get_string("scheme", "split");
        if (scheme == "split") e.scheme = LangevinScheme::rotation_split;
        else if (scheme == "euler") e.scheme = LangevinScheme::euler_maruyama;
        else throw ConfigError("scheme must be split or euler", top.line_of("scheme"), "scheme");
        e.seed = spec.seed;
        break;
    }
    case Model::classical: {
        ClassicalOptions& c = spec.classical;
        const long long starts = top.get_int("n_starts", c.n_starts);
        if (starts < 1) throw ConfigError("n_starts must be >= 1", top.line_of("n_starts"), "n_starts");
        c.n_starts = static_cast<int>(starts);
        c.t_final = positive("t_final", top.get_double("t_final", c.t_final));
        c.tol = positive("tol", top.get_double("tol", c.tol));
        c.sample_interval = positive("sample_interval", top.get_double("sample_interval", c.sample_interval));
        c.seed = spec.seed;
        break;
    }
    }
    top.check_all_used();
    return spec;
}

// Canonical config text; parse_sweep_spec(serialize(s)) reproduces s.
inline std::string serialize(const SweepSpec& spec) {
    using detail::format_exact;
    std::ostringstream out;
    out << "model = " << to_string(spec.model) << '\n';
    std::set<std::string> occupied;
    for (const Axis* a : {&spec.axis1, spec.axis2 ? &*spec.axis2 : nullptr})
        if (a)
            for (const auto& k : detail::occupied_keys(a->param)) occupied.insert(k);
    auto emit = [&](const std::string& key, double value) {
        if (!occupied.count(key)) out << key << " = " << format_exact(value) << '\n';
    };
    emit("delta", spec.fixed.delta);
    emit("gain", spec.fixed.gain);
    emit("kappa", spec.fixed.kappa);
    emit("v", spec.fixed.v);
    emit("k1", spec.fixed.k1);
    emit("k2", spec.fixed.k2);
    out << "seed = " << spec.seed << '\n';
    out << "observables = ";
    for (std::size_t i = 0; i < spec.observables.size(); ++i) out << (i ? ", " : "") << spec.observables[i];
    out << '\n';
    switch (spec.model) {
    case Model::quantum:
        if (spec.trunc) out << "n_max_1 = " << spec.trunc->n_max_1 << "\nn_max_2 = " << spec.trunc->n_max_2 << '\n';
        out << "auto_escalate = " << (spec.auto_escalate ? "true" : "false") << '\n';
        break;
    case Model::semiclassical:
        out << "n_traj = " << spec.ensemble.n_traj << '\n'
            << "dt = " << format_exact(spec.ensemble.dt) << '\n'
            << "burn_in = " << format_exact(spec.ensemble.burn_in) << '\n'
            << "average_time = " << format_exact(spec.ensemble.average_time) << '\n'
            << "scheme = " << (spec.ensemble.scheme == LangevinScheme::rotation_split ? "split" : "euler") << '\n';
        break;
    case Model::classical:
        out << "n_starts = " << spec.classical.n_starts << '\n'
            << "t_final = " << format_exact(spec.classical.t_final) << '\n'
            << "tol = " << format_exact(spec.classical.tol) << '\n'
            << "sample_interval = " << format_exact(spec.classical.sample_interval) << '\n';
        break;
    }
    auto emit_axis = [&](const char* name, const Axis& a) {
        out << '[' << name << "]\nparam = " << a.param << "\nmin = " << format_exact(a.min)
            << "\nmax = " << format_exact(a.max) << "\npoints = " << a.points << '\n';
    };
    emit_axis("axis1", spec.axis1);
    if (spec.axis2) emit_axis("axis2", *spec.axis2);
    return out.str();
}

struct SweepRow {
    double axis1 = 0.0;
    double axis2 = 0.0;
    std::vector<double> values;       // one per observable
    std::vector<double> uncertainty;  // semiclassical: one per observable
    double trunc_check = std::numeric_limits<double>::quiet_NaN();
    double residual = std::numeric_limits<double>::quiet_NaN();
    int n_max = 0;
    std::string status = "ok";

    bool failed() const { return status.rfind("error", 0) == 0; }
};

struct SweepResult {
    SweepSpec spec;
    std::vector<SweepRow> rows;
    double wall_seconds = 0.0;
    std::size_t failures = 0;
};

// Threads from the flag, then QVDP_THREADS, then the hardware.
inline int resolve_threads(std::optional<int> flag) {
    if (flag && *flag > 0) return *flag;
    if (const char* env = std::getenv("QVDP_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

// Dynamic scheduling over [0, n); fn must be safe to call concurrently for
// distinct indices.
inline void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    };
    const int extra = std::max(0, std::min<int>(threads, static_cast<int>(n)) - 1);
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(extra));
    for (int t = 0; t < extra; ++t) pool.emplace_back(worker);
    worker();
}

// Default cutoff: 6 for strongly anharmonic regimes (K >= 10 G), 12 otherwise.
inline TruncationSpec default_truncation(const SystemParams& p) {
    return uniform_truncation(std::max(p.k1, p.k2) >= 10.0 * p.gain ? 6 : 12);
}

struct QuantumPoint {
    double n1 = 0.0;
    double n2 = 0.0;
    double trunc_check = 0.0;
    double residual = 0.0;
    int n_max = 0;
    bool flagged = false;
};

// Steady state at one parameter point; escalates the cutoff once by 50% if the
// top-level population check fails or positivity is lost.
inline QuantumPoint solve_quantum_point(const SystemParams& p, std::optional<TruncationSpec> trunc, bool escalate) {
    TruncationSpec t = trunc ? *trunc : default_truncation(p);
    for (int attempt = 0;; ++attempt) {
        const bool may_retry = escalate && attempt == 0;
        try {
            const SteadyState ss = steady_state(p, t);
            QuantumPoint q;
            q.trunc_check = check_truncation(ss.rho, t);
            q.residual = ss.residual;
            q.n_max = std::max(t.n_max_1, t.n_max_2);
            if (q.trunc_check > truncation_error_level && may_retry) throw InvariantViolation("truncation");
            q.n1 = mean_phonon(ss.rho, Mode::one);
            q.n2 = mean_phonon(ss.rho, Mode::two);
            q.flagged = q.trunc_check > truncation_error_level;
            return q;
        } catch (const InvariantViolation&) {
            if (!may_retry) throw;
            t = {t.n_max_1 + (t.n_max_1 + 1) / 2, t.n_max_2 + (t.n_max_2 + 1) / 2};
        }
    }
}

inline SweepRow evaluate_point(const SweepSpec& spec, double v1, double v2) {
    SweepRow row;
    row.axis1 = v1;
    row.axis2 = v2;
    SystemParams p = spec.fixed;
    set_parameter(p, spec.axis1.param, v1);
    if (spec.axis2) set_parameter(p, spec.axis2->param, v2);
    const std::size_t n_obs = spec.observables.size();
    row.values.assign(n_obs, std::numeric_limits<double>::quiet_NaN());
    if (spec.model == Model::semiclassical) row.uncertainty.assign(n_obs, std::numeric_limits<double>::quiet_NaN());
    try {
        p.validate();
        switch (spec.model) {
        case Model::quantum: {
            const QuantumPoint q = solve_quantum_point(p, spec.trunc, spec.auto_escalate);
            for (std::size_t i = 0; i < n_obs; ++i) {
                const auto& o = spec.observables[i];
                row.values[i] = o == "n1" ? q.n1 : o == "n2" ? q.n2 : q.n1 - q.n2;
            }
            row.trunc_check = q.trunc_check;
            row.residual = q.residual;
            row.n_max = q.n_max;
            if (q.flagged) row.status = "flagged_truncation";
            break;
        }
        case Model::semiclassical: {
            const EnsembleStats s = ensemble_average(p, spec.ensemble);
            for (std::size_t i = 0; i < n_obs; ++i) {
                const bool first = spec.observables[i] == "amp_sq_1";
                row.values[i] = first ? s.mean_amp_sq_1 : s.mean_amp_sq_2;
                row.uncertainty[i] = first ? s.standard_error_1 : s.standard_error_2;
            }
            break;
        }
        case Model::classical: {
            const ClassicalAmplitudes a = long_time_amplitudes(p, spec.classical);
            for (std::size_t i = 0; i < n_obs; ++i)
                row.values[i] = spec.observables[i] == "amp_sq_1" ? a.amp_sq_1 : a.amp_sq_2;
            break;
        }
        }
    } catch (const Error& e) {
        row.status = std::string("error:") + e.tag();
        std::fill(row.values.begin(), row.values.end(), std::numeric_limits<double>::quiet_NaN());
    }
    return row;
}

inline SweepResult run_sweep(const SweepSpec& spec, int parallelism) {
    const auto start = std::chrono::steady_clock::now();
    SweepResult result;
    result.spec = spec;
    const int n2 = spec.axis2 ? spec.axis2->points : 1;
    const std::size_t total = spec.n_points();
    result.rows.resize(total);
    if (!spec.observables.empty()) {
        parallel_for(total, parallelism, [&](std::size_t idx) {
            const int i1 = static_cast<int>(idx / static_cast<std::size_t>(n2));
            const int i2 = static_cast<int>(idx % static_cast<std::size_t>(n2));
            result.rows[idx] = evaluate_point(spec, spec.axis1.value(i1), spec.axis2 ? spec.axis2->value(i2) : 0.0);
        });
    } else {
        result.rows.clear();
    }
    for (const auto& r : result.rows) result.failures += r.failed() ? 1 : 0;
    result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (total > 0 && result.failures * 5 > total) {
        throw Error("sweep aborted: " + std::to_string(result.failures) + " of " + std::to_string(total) +
                    " points failed");
    }
    return result;
}

inline std::vector<std::string> csv_columns(const SweepSpec& spec) {
    std::vector<std::string> cols{spec.axis1.param};
    if (spec.axis2) cols.push_back(spec.axis2->param);
    for (const auto& o : spec.observables) cols.push_back(o);
    if (spec.model == Model::semiclassical)
        for (const auto& o : spec.observables) cols.push_back("se_" + o);
    if (spec.model == Model::quantum) {
        cols.push_back("trunc_check");
        cols.push_back("residual");
        cols.push_back("n_max");
    }
    cols.push_back("status");
    return cols;
}

inline constexpr const char* csv_magic = "# qvdp sweep";
inline constexpr const char* csv_spec_begin = "# spec-begin";
inline constexpr const char* csv_spec_end = "# spec-end";

inline std::string to_csv(const SweepResult& result) {
    using detail::format_value;
    const SweepSpec& spec = result.spec;
    std::ostringstream out;
    out << csv_magic << '\n';
    out << "# version = " << QVDP_VERSION << '\n';
    out << "# points = " << result.rows.size() << '\n';
    out << "# failed = " << result.failures << '\n';
    out << csv_spec_begin << '\n';
    std::istringstream spec_lines(serialize(spec));
    for (std::string line; std::getline(spec_lines, line);) out << "# " << line << '\n';
    out << csv_spec_end << '\n';
    const auto cols = csv_columns(spec);
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << '\n';
    for (const auto& r : result.rows) {
        out << format_value(r.axis1);
        if (spec.axis2) out << ',' << format_value(r.axis2);
        for (double v : r.values) out << ',' << format_value(v);
        for (double u : r.uncertainty) out << ',' << format_value(u);
        if (spec.model == Model::quantum) {
            out << ',' << format_value(r.trunc_check) << ',' << format_value(r.residual) << ',' << r.n_max;
        }
        out << ',' << r.status << '\n';
    }
    return out.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    out << text;
    out.flush();
    if (!out) throw Error("write to '" + path + "' failed");
}

inline void write_csv(const SweepResult& result, const std::string& path) { write_text_file(path, to_csv(result)); }

struct CsvTable {
    std::string spec_text;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> cells;

    int column(const std::string& name) const {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i] == name) return static_cast<int>(i);
        throw InvalidArgument("no column named '" + name + "'");
    }
    double number(std::size_t row, const std::string& name) const {
        return std::strtod(cells.at(row).at(static_cast<std::size_t>(column(name))).c_str(), nullptr);
    }
};

inline CsvTable parse_csv(const std::string& text) {
    CsvTable table;
    std::istringstream in(text);
    std::string line;
    bool in_spec = false;
    bool header_done = false;
    std::ostringstream spec;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (line == csv_spec_begin) in_spec = true;
            else if (line == csv_spec_end) in_spec = false;
            else if (in_spec) spec << (line.size() > 2 ? line.substr(2) : std::string{}) << '\n';
            continue;
        }
        std::vector<std::string> fields;
        std::stringstream ss(line);
        for (std::string f; std::getline(ss, f, ',');) fields.push_back(f);
        if (!header_done) {
            table.columns = std::move(fields);
            header_done = true;
        } else {
            table.cells.push_back(std::move(fields));
        }
    }
    table.spec_text = spec.str();
    return table;
}

inline CsvTable read_csv(const std::string& path) { return parse_csv(read_text_file(path)); }

// Accepts either a config file or a sweep CSV carrying an embedded spec.
inline SweepSpec load_sweep_spec(const std::string& path) {
    const std::string text = read_text_file(path);
    if (text.rfind(csv_magic, 0) == 0) return parse_sweep_spec(parse_csv(text).spec_text);
    return parse_sweep_spec(text);
}

} // namespace qvdp
