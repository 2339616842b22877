#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <string>

#include "qvdp/analysis.hpp"
#include "qvdp/figures.hpp"
#include "qvdp/sweep.hpp"

using namespace qvdp;

namespace {

const char* basic_config = R"(# quantum sweep
model = quantum
kappa = 2
k = 1
n_max = 8
[axis1]
param = delta
min = 0
max = 4
points = 3
[axis2]
param = v
min = 0
max = 6
points = 2
)";

ConfigError config_error(const std::string& text) {
    try {
        parse_sweep_spec(text);
    } catch (const ConfigError& e) {
        return e;
    }
    ADD_FAILURE() << "no ConfigError for:\n" << text;
    return ConfigError("none");
}

std::string replace(std::string text, const std::string& from, const std::string& to) {
    const auto pos = text.find(from);
    EXPECT_NE(pos, std::string::npos) << from;
    return text.replace(pos, from.size(), to);
}

} // namespace

TEST(Config, ParsesSectionsAndComments) {
    const ConfigDocument doc = parse_config("a = 1\n  # note\n\n[s]\nb = x y\n");
    EXPECT_EQ(doc.top.get_int("a"), 1);
    ASSERT_NE(doc.section("s"), nullptr);
    EXPECT_EQ(doc.section("s")->get_string("b"), "x y");
    EXPECT_EQ(doc.section("s")->line_of("b"), 5);
}

TEST(Config, ReportsLineNumbers) {
    try {
        parse_config("a = 1\nb\n");
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.line(), 2);
    }
    try {
        parse_config("a = 1\na = 2\n");
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.line(), 2);
        EXPECT_EQ(e.key(), "a");
    }
}

TEST(SweepSpec, ParsesBasicConfig) {
    const SweepSpec s = parse_sweep_spec(basic_config);
    EXPECT_EQ(s.model, Model::quantum);
    EXPECT_EQ(s.axis1.param, "delta");
    ASSERT_TRUE(s.axis2.has_value());
    EXPECT_EQ(s.axis2->points, 2);
    EXPECT_EQ(s.fixed.k1, 1.0);
    EXPECT_EQ(s.fixed.k2, 1.0);
    ASSERT_TRUE(s.trunc.has_value());
    EXPECT_EQ(s.trunc->n_max_1, 8);
    EXPECT_EQ(s.n_points(), 6u);
    EXPECT_EQ(s.observables, default_observables(Model::quantum));
}

TEST(SweepSpec, MissingModel) {
    const ConfigError e = config_error(replace(basic_config, "model = quantum\n", ""));
    EXPECT_EQ(e.key(), "model");
    EXPECT_NE(std::string(e.what()).find("model"), std::string::npos);
}

TEST(SweepSpec, DegenerateAxisRejected) {
    EXPECT_EQ(config_error(replace(basic_config, "max = 4", "max = 0")).key(), "max");
    EXPECT_EQ(config_error(replace(basic_config, "points = 3", "points = 1")).key(), "points");
}

TEST(SweepSpec, AxisCollisions) {
    EXPECT_EQ(config_error(replace(basic_config, "kappa = 2", "kappa = 2\ndelta = 1")).key(), "delta");
    EXPECT_EQ(config_error(replace(basic_config, "param = v", "param = delta")).key(), "param");
    EXPECT_EQ(config_error(replace(basic_config, "param = v", "param = k2")).key(), "k");
}

TEST(SweepSpec, UnknownKeyAndBadValues) {
    const ConfigError unknown = config_error(replace(basic_config, "k = 1", "k = 1\nbogus = 3"));
    EXPECT_EQ(unknown.key(), "bogus");
    EXPECT_EQ(unknown.line(), 5);
    EXPECT_EQ(config_error(replace(basic_config, "kappa = 2", "kappa = fast")).key(), "kappa");
    EXPECT_EQ(config_error(replace(basic_config, "model = quantum", "model = magic")).key(), "model");
    EXPECT_EQ(config_error(replace(basic_config, "n_max = 8", "n_max = 1")).key(), "n_max");
    config_error(replace(basic_config, "kappa = 2", "kappa = -1"));
}

TEST(SweepSpec, ObservablesMustSuitModel) {
    EXPECT_EQ(config_error(replace(basic_config, "k = 1", "k = 1\nobservables = n1, amp_sq_1")).key(),
              "observables");
}

TEST(SweepSpec, ModelSpecificKeys) {
    const std::string semi = replace(replace(basic_config, "model = quantum", "model = semiclassical"),
                                     "n_max = 8", "n_traj = 8\ndt = 0.002\nscheme = euler");
    const SweepSpec s = parse_sweep_spec(semi);
    EXPECT_EQ(s.ensemble.n_traj, 8);
    EXPECT_EQ(s.ensemble.dt, 0.002);
    EXPECT_EQ(s.ensemble.scheme, LangevinScheme::euler_maruyama);
    // Quantum-only keys are unknown elsewhere.
    EXPECT_EQ(config_error(replace(basic_config, "model = quantum", "model = classical")).key(), "n_max");
}

TEST(SweepSpec, SerializationRoundTrip) {
    for (int which : {2, 3, 4, 5}) {
        for (const auto& job : figure_jobs(which)) {
            if (!job.sweep) continue;
            const std::string text = serialize(*job.sweep);
            EXPECT_EQ(serialize(parse_sweep_spec(text)), text) << job.file;
        }
    }
}

TEST(Sweep, GridOrderingAndColumns) {
    const SweepResult r = run_sweep(parse_sweep_spec(basic_config), 2);
    ASSERT_EQ(r.rows.size(), 6u);
    EXPECT_EQ(r.rows[0].axis1, 0.0);
    EXPECT_EQ(r.rows[1].axis2, 6.0);
    EXPECT_EQ(r.rows[5].axis1, 4.0);
    for (const auto& row : r.rows) {
        EXPECT_EQ(row.status, "ok");
        EXPECT_NEAR(row.values[2], row.values[0] - row.values[1], 1e-14);
        EXPECT_EQ(row.n_max, 8);
    }
    const auto cols = csv_columns(r.spec);
    EXPECT_EQ(cols.front(), "delta");
    EXPECT_EQ(cols.back(), "status");
}

TEST(Sweep, EmptyObservablesGiveHeaderOnlyFile) {
    SweepSpec s = parse_sweep_spec(basic_config);
    s.observables.clear();
    const SweepResult r = run_sweep(s, 1);
    const CsvTable t = parse_csv(to_csv(r));
    EXPECT_TRUE(t.cells.empty());
    EXPECT_FALSE(t.columns.empty());
}

TEST(Sweep, CsvRoundTrip) {
    const SweepResult r = run_sweep(parse_sweep_spec(basic_config), 1);
    const CsvTable t = parse_csv(to_csv(r));
    ASSERT_EQ(t.cells.size(), r.rows.size());
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
        EXPECT_EQ(t.number(i, "delta"), r.rows[i].axis1);
        EXPECT_NEAR(t.number(i, "n1"), r.rows[i].values[0], 1e-12 * std::abs(r.rows[i].values[0]));
        EXPECT_NEAR(t.number(i, "residual"), r.rows[i].residual, 1e-11 * r.rows[i].residual + 1e-300);
    }
    // The embedded spec reproduces the run.
    EXPECT_EQ(to_csv(run_sweep(parse_sweep_spec(t.spec_text), 1)), to_csv(r));
}

TEST(Sweep, ThreadCountIndependence) {
    // kappa < G/2 keeps the diffusion positive at the origin.
    std::string cfg = replace(basic_config, "model = quantum", "model = semiclassical");
    cfg = replace(replace(cfg, "kappa = 2", "kappa = 0.2"), "n_max = 8", "n_traj = 4\nburn_in = 1\naverage_time = 2");
    SweepSpec s = parse_sweep_spec(cfg);
    const std::string one = to_csv(run_sweep(s, 1));
    EXPECT_EQ(to_csv(run_sweep(s, 3)), one);
    EXPECT_EQ(to_csv(run_sweep(s, 1)), one);
}

TEST(Sweep, WriteAndReadFile) {
    const auto path = std::filesystem::temp_directory_path() / "qvdp_sweep_test.csv";
    const SweepResult r = run_sweep(parse_sweep_spec(basic_config), 1);
    write_csv(r, path.string());
    EXPECT_EQ(read_text_file(path.string()), to_csv(r));
    EXPECT_EQ(serialize(load_sweep_spec(path.string())), serialize(r.spec));
    std::filesystem::remove(path);
    EXPECT_THROW(write_csv(r, "/nonexistent-dir/x.csv"), Error);
}

TEST(Sweep, FailedPointsAreTagged) {
    // Divergence at every point aborts the sweep.
    const std::string cfg = R"(model = semiclassical
kappa = 0
v = 0
n_traj = 2
burn_in = 400
average_time = 10
[axis1]
param = delta
min = 0
max = 1
points = 2
)";
    EXPECT_THROW(run_sweep(parse_sweep_spec(cfg), 1), Error);
    const SweepRow row = evaluate_point(parse_sweep_spec(cfg), 0.0, 0.0);
    EXPECT_EQ(row.status, "error:Divergence");
    EXPECT_TRUE(std::isnan(row.values[0]));
}

TEST(Sweep, ResolveThreads) {
    EXPECT_EQ(resolve_threads(3), 3);
    setenv("QVDP_THREADS", "5", 1);
    EXPECT_EQ(resolve_threads(std::nullopt), 5);
    EXPECT_EQ(resolve_threads(2), 2);
    unsetenv("QVDP_THREADS");
    EXPECT_GE(resolve_threads(std::nullopt), 1);
}

TEST(Peaks, FindsProminentMaxima) {
    const std::vector<double> y = {0, 1, 0.5, 3, 0.2, 0.25, 0.2, 2, 2};
    const auto peaks = find_peaks(y);
    ASSERT_EQ(peaks.size(), 3u);
    EXPECT_EQ(peaks[0].index, 1u);
    EXPECT_EQ(peaks[1].index, 3u);
    EXPECT_EQ(peaks[2].index, 5u);
    EXPECT_NEAR(peaks[2].prominence, 0.05, 1e-15);
}

TEST(Peaks, NoiseThreshold) {
    const std::vector<double> y = {0, 1, 0.9, 1.05, 0};
    const std::vector<double> se(5, 0.1);
    const auto peaks = find_peaks(y, se);
    ASSERT_EQ(peaks.size(), 1u);
    EXPECT_EQ(peaks[0].index, 3u);
}

TEST(Figures, FourthFigureHasFourFiles) {
    const auto jobs = figure_jobs(4);
    EXPECT_EQ(jobs.size(), 4u);
    EXPECT_THROW(figure_jobs(1), InvalidArgument);
}

TEST(WignerSpec, ParseAndRun) {
    const WignerSpec w = parse_wigner_spec("kappa = 0.2\nv = 6\ndelta = 2\nn_max = 8\npoints = 21\nhalf_width = 3\n");
    EXPECT_EQ(w.trunc.n_max_1, 8);
    const WignerResult r = run_wigner(w);
    EXPECT_EQ(r.grid.values.rows(), 21);
    EXPECT_GT(r.mean_phonon, 0.0);
    try {
        parse_wigner_spec("kappa = 0.2\nmode = 3\n");
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.key(), "mode");
        EXPECT_EQ(e.line(), 2);
    }
}

TEST(SampleConfigs, AllParse) {
    int count = 0;
    for (const auto& entry : std::filesystem::directory_iterator(QVDP_CONFIG_DIR)) {
        if (entry.path().extension() != ".cfg") continue;
        const std::string text = read_text_file(entry.path().string());
        if (entry.path().filename() == "wigner.cfg") {
            EXPECT_NO_THROW(parse_wigner_spec(text));
        } else {
            EXPECT_NO_THROW(parse_sweep_spec(text)) << entry.path();
        }
        ++count;
    }
    EXPECT_GE(count, 5);
}
