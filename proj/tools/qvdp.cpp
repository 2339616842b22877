// Command-line front end: parameter sweeps, Wigner grids, self-checks and
// canned figure data.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "qvdp/qvdp.hpp"

namespace {

constexpr int exit_runtime = 1;
constexpr int exit_config = 2;

void report_sweep(const qvdp::SweepResult& r, const std::string& out) {
    std::fprintf(stderr, "%s: %zu points, %zu failed, %.2f s\n", out.c_str(), r.rows.size(), r.failures,
                 r.wall_seconds);
    std::size_t flagged = 0;
    for (const auto& row : r.rows) flagged += row.status == "flagged_truncation" ? 1 : 0;
    if (flagged > 0) std::fprintf(stderr, "%s: %zu points flagged for truncation\n", out.c_str(), flagged);
}

int run_sweep_command(qvdp::Model expected, const std::string& config, const std::string& out,
                      std::optional<int> threads) {
    const qvdp::SweepSpec spec = qvdp::parse_sweep_spec(qvdp::read_text_file(config));
    if (spec.model != expected) {
        throw qvdp::ConfigError("model is '" + qvdp::to_string(spec.model) + "' but this command runs '" +
                                    qvdp::to_string(expected) + "'",
                                0, "model");
    }
    const qvdp::SweepResult result = qvdp::run_sweep(spec, qvdp::resolve_threads(threads));
    qvdp::write_csv(result, out);
    report_sweep(result, out);
    return 0;
}

int run_wigner_command(const std::string& config, const std::string& out) {
    const auto start = std::chrono::steady_clock::now();
    const qvdp::WignerSpec spec = qvdp::parse_wigner_spec(qvdp::read_text_file(config));
    const qvdp::WignerResult result = qvdp::run_wigner(spec);
    qvdp::write_text_file(out, qvdp::to_csv(result));
    std::fprintf(stderr, "%s: <n> = %.6g, %.2f s\n", out.c_str(), result.mean_phonon,
                 std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    return 0;
}

int run_verify_command() {
    int failed = 0;
    for (const auto& c : qvdp::run_oracle_suite()) {
        std::printf("%s  %s  (%s)\n", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
        failed += c.passed ? 0 : 1;
    }
    std::printf("%s\n", failed == 0 ? "all checks passed" : (std::to_string(failed) + " check(s) failed").c_str());
    return failed == 0 ? 0 : exit_runtime;
}

const char* figure_readme = R"(Figure data written by `qvdp figures`.

Sweep files (*.csv other than fig3_wigner_*):
  Lines starting with '#' are metadata. The block between '# spec-begin' and
  '# spec-end' is the sweep configuration; strip the leading '# ' to get a
  config file that reproduces the data.
  The first non-comment line names the columns:
    <axis1> [<axis2>]   parameter values of the grid point
    n1, n2              steady-state <a1^dag a1>, <a2^dag a2> (quantum)
    ndiff               <a1^dag a1 - a2^dag a2> (quantum)
    amp_sq_1, amp_sq_2  long-time mean |a_m|^2 (semiclassical, classical)
    se_<obs>            standard error of <obs> over trajectories
    trunc_check         population of the two highest Fock levels (max over modes)
    residual            max |L rho| / ||L||_inf of the steady-state solve
    n_max               Fock cutoff used
    status              ok, flagged_truncation or error:<kind>
  Rows are ordered by axis1, then axis2. Failed points hold nan.

Wigner files (fig3_wigner_*.csv):
  Columns re, im, w: the reduced Wigner function of mode 1 at a = re + i im.
  The grid is square; w integrates to 1 over the plane.
)";

int run_figures_command(int which, const std::string& dir, std::optional<int> threads) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw qvdp::Error("cannot create directory '" + dir + "': " + ec.message());
    const auto jobs = qvdp::figure_jobs(which);
    const int n_threads = qvdp::resolve_threads(threads);
    for (const auto& job : jobs) {
        const std::string path = (fs::path(dir) / job.file).string();
        if (job.sweep) {
            const qvdp::SweepResult r = qvdp::run_sweep(*job.sweep, n_threads);
            qvdp::write_csv(r, path);
            report_sweep(r, path);
        } else {
            const auto start = std::chrono::steady_clock::now();
            qvdp::write_text_file(path, qvdp::to_csv(qvdp::run_wigner(*job.wigner)));
            std::fprintf(stderr, "%s: %.2f s\n", path.c_str(),
                         std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
        }
        std::printf("%s  %s\n", job.file.c_str(), job.description.c_str());
    }
    qvdp::write_text_file((fs::path(dir) / "README.txt").string(), figure_readme);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coupled quantum van der Pol oscillators: steady states, Langevin ensembles and classical dynamics"};
    app.set_version_flag("--version", QVDP_VERSION);
    app.require_subcommand(1);

    std::string config;
    std::string out;
    std::optional<int> threads;
    int which = 0;

    struct SweepCommand {
        const char* name;
        qvdp::Model model;
        const char* help;
    };
    const SweepCommand sweeps[] = {
        {"quantum-sweep", qvdp::Model::quantum, "Steady-state master equation sweep"},
        {"semiclassical-sweep", qvdp::Model::semiclassical, "Langevin ensemble sweep"},
        {"classical-sweep", qvdp::Model::classical, "Noiseless mean-field sweep"},
    };
    for (const auto& s : sweeps) {
        auto* cmd = app.add_subcommand(s.name, s.help);
        cmd->add_option("--config", config, "Sweep configuration file")->required()->check(CLI::ExistingFile);
        cmd->add_option("--out", out, "Output CSV path")->required();
        cmd->add_option("--threads", threads, "Worker threads (default: QVDP_THREADS or all cores)")
            ->check(CLI::PositiveNumber);
    }
    auto* wig = app.add_subcommand("wigner", "Reduced Wigner function of a steady state");
    wig->add_option("--config", config, "Wigner configuration file")->required()->check(CLI::ExistingFile);
    wig->add_option("--out", out, "Output CSV path")->required();
    app.add_subcommand("verify", "Compare the solvers against independent oracles");
    auto* fig = app.add_subcommand("figures", "Write the data for a canned figure (2 to 5)");
    fig->add_option("--which", which, "Figure number")->required()->check(CLI::IsMember({2, 3, 4, 5}));
    fig->add_option("--out", out, "Output directory")->required();
    fig->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_config;
    }

    try {
        for (const auto& s : sweeps)
            if (app.got_subcommand(s.name)) return run_sweep_command(s.model, config, out, threads);
        if (app.got_subcommand("wigner")) return run_wigner_command(config, out);
        if (app.got_subcommand("verify")) return run_verify_command();
        if (app.got_subcommand("figures")) return run_figures_command(which, out, threads);
    } catch (const qvdp::ConfigError& e) {
        std::fprintf(stderr, "config error: %s: %s\n", config.c_str(), e.what());
        return exit_config;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_runtime;
    }
    return exit_runtime;
}
