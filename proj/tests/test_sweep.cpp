#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "qdrf/qdrf.hpp"

using namespace qdrf;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("qdrf_test_sweep_" + name);
    fs::remove_all(p);
    return p;
}

RunConfig small_config(const fs::path& dir) {
    auto c = parse_config(parse_json_text(R"({
        "name": "small",
        "system": {"Omega_meV": 0.4},
        "reservoir": {"type": "flat", "gamma_ueV": 1.5},
        "spectrum": {"half_width_meV": 1.2, "points": 401},
        "sweep": {"variable": "Delta_Lx", "values": [0.0, 0.1]},
        "variants": ["phonons", "no_phonons"]
    })", "small.json"));
    c.output.directory = dir.string();
    return c;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

SweepOptions serial() {
    SweepOptions o;
    o.threads = 1;
    return o;
}

} // namespace

TEST(Sweep, ManifestCoversEveryPoint) {
    const auto dir = scratch("manifest");
    const auto m = run_sweep(small_config(dir), serial());
    ASSERT_EQ(m.entries.size(), 4u);
    EXPECT_TRUE(m.all_ok());
    for (const auto& e : m.entries) {
        EXPECT_TRUE(fs::exists(dir / e.path)) << e.path;
        EXPECT_TRUE(e.positive);
        EXPECT_FALSE(e.skipped);
    }
    EXPECT_EQ(m.entries[0].path, "Delta_Lx_0_phonons.csv");
    EXPECT_EQ(m.entries[3].path, "Delta_Lx_0.1_no_phonons.csv");
    const auto j = json::parse(slurp(dir / "manifest.json"));
    EXPECT_EQ(j["points"].size(), 4u);
    EXPECT_EQ(j["config_hash"], m.config_hash);
}

TEST(Sweep, CsvRoundTrip) {
    const auto dir = scratch("roundtrip");
    const auto cfg = small_config(dir);
    run_sweep(cfg, serial());
    SweepContext ctx(cfg);
    const SweepPoint p{0.1, true};
    const auto sys = ctx.system_for(p);
    const auto r = solve_point(sys, *ctx.bath(true, 4.0), ctx.reservoir(), ctx.grid_for(sys), ctx.engine_options());
    const auto csv = read_spectrum_csv((dir / "Delta_Lx_0.1_phonons.csv").string());
    ASSERT_EQ(csv.header, (std::vector<std::string>{"omega_meV", "S0", "SP", "S0_dB", "SP_dB"}));
    ASSERT_EQ(csv.columns[0].size(), r.spectrum.omega_meV.size());
    for (std::size_t i = 0; i < r.spectrum.omega_meV.size(); ++i) {
        EXPECT_NEAR(csv.columns[0][i], r.spectrum.omega_meV[i], 1e-12 * std::abs(r.spectrum.omega_meV[i]));
        EXPECT_NEAR(csv.columns[1][i], r.spectrum.S0[i], 1e-12 * std::abs(r.spectrum.S0[i]) + 1e-300);
        EXPECT_NEAR(csv.columns[2][i], r.spectrum.SP[i], 1e-12 * std::abs(r.spectrum.SP[i]) + 1e-300);
    }
}

TEST(Sweep, OutputIsDeterministic) {
    const auto a = scratch("det_a"), b = scratch("det_b");
    const auto ma = run_sweep(small_config(a), serial());
    SweepOptions par;
    par.threads = 3;
    const auto mb = run_sweep(small_config(b), par);
    for (std::size_t i = 0; i < ma.entries.size(); ++i) {
        EXPECT_EQ(ma.entries[i].hash, mb.entries[i].hash);
        EXPECT_EQ(slurp(a / ma.entries[i].path), slurp(b / mb.entries[i].path)) << ma.entries[i].path;
    }
}

TEST(Sweep, ResumeSkipsCompletedPoints) {
    const auto dir = scratch("resume");
    const auto cfg = small_config(dir);
    run_sweep(cfg, serial());
    auto m = run_sweep(cfg, serial());
    for (const auto& e : m.entries) EXPECT_TRUE(e.skipped) << e.path;

    fs::remove(dir / "Delta_Lx_0.1_phonons.csv");
    m = run_sweep(cfg, serial());
    int recomputed = 0;
    for (const auto& e : m.entries)
        if (!e.skipped) {
            ++recomputed;
            EXPECT_EQ(e.path, "Delta_Lx_0.1_phonons.csv");
        }
    EXPECT_EQ(recomputed, 1);
    EXPECT_TRUE(fs::exists(dir / "Delta_Lx_0.1_phonons.csv"));

    SweepOptions fresh = serial();
    fresh.resume = false;
    m = run_sweep(cfg, fresh);
    for (const auto& e : m.entries) EXPECT_FALSE(e.skipped);
}

TEST(Sweep, ChangedInputsInvalidateHashes) {
    const auto dir = scratch("hash");
    auto cfg = small_config(dir);
    run_sweep(cfg, serial());
    cfg.system.gamma_d_ueV = 5.0;
    const auto m = run_sweep(cfg, serial());
    for (const auto& e : m.entries) EXPECT_FALSE(e.skipped);

    // renaming the run or moving the output does not
    auto renamed = cfg;
    renamed.name = "other";
    EXPECT_EQ(point_hash(cfg, {0.0, true}), point_hash(renamed, {0.0, true}));
    EXPECT_NE(point_hash(cfg, {0.0, true}), point_hash(cfg, {0.0, false}));
    EXPECT_NE(point_hash(cfg, {0.0, true}), point_hash(cfg, {0.1, true}));
}

TEST(Sweep, FailedPointIsRecordedAndOthersFinish) {
    const auto dir = scratch("failure");
    auto cfg = small_config(dir);
    // a phonon table too short for the correlation to settle
    cfg.phonon_numerics.table_tau_max_ps = 1.0;
    cfg.phonon_numerics.rate_tau_max_ps = 1.0;
    const auto m = run_sweep(cfg, serial());
    ASSERT_EQ(m.entries.size(), 4u);
    EXPECT_TRUE(m.any_numerical_failure());
    for (const auto& e : m.entries) {
        if (e.variant == "phonons") {
            EXPECT_EQ(e.status, "numerical_error");
            EXPECT_FALSE(e.message.empty());
            EXPECT_FALSE(fs::exists(dir / e.path));
        } else {
            EXPECT_EQ(e.status, "ok");
            EXPECT_TRUE(fs::exists(dir / e.path));
        }
    }
    // failed points are retried on resume
    cfg.phonon_numerics = PhononNumerics{};
    const auto again = run_sweep(cfg, serial());
    EXPECT_TRUE(again.all_ok());
}

TEST(Sweep, JsonOutputAndNoDecibels) {
    const auto dir = scratch("json");
    auto cfg = small_config(dir);
    cfg.output.format = "json";
    cfg.output.normalize = true;
    cfg.sweep.values = {0.0};
    cfg.variants = {false};
    const auto m = run_sweep(cfg, serial());
    ASSERT_TRUE(m.all_ok());
    const auto j = json::parse(slurp(dir / m.entries[0].path));
    EXPECT_EQ(j["S0"].size(), 401u);
    EXPECT_EQ(j["peaks"].size(), 3u);
    double mx = 0.0;
    for (const auto& v : j["S0"]) mx = std::max(mx, v.get<double>());
    EXPECT_DOUBLE_EQ(mx, 1.0);

    SpectrumSeries s;
    s.omega_meV = {0.0, 1.0};
    s.S0 = s.SP = {1.0, 2.0};
    EXPECT_EQ(spectrum_csv(s, false, false), "omega_meV,S0,SP\n0,1,1\n1,2,2\n");
}

TEST(Sweep, OmegaAndTemperatureSweeps) {
    const auto dir = scratch("vars");
    auto cfg = small_config(dir);
    cfg.sweep.variable = SweepVariable::T;
    cfg.sweep.values = {4.0, 20.0};
    cfg.variants = {true};
    auto m = run_sweep(cfg, serial());
    ASSERT_TRUE(m.all_ok());
    EXPECT_EQ(m.entries[0].path, "T_4_phonons.csv");

    cfg.sweep.variable = SweepVariable::Omega;
    cfg.sweep.values = {0.2, 0.6};
    m = run_sweep(cfg, serial());
    ASSERT_TRUE(m.all_ok());
    EXPECT_DOUBLE_EQ(m.entries[1].Omega_meV, 0.6);
}

TEST(Rates, ReportAcrossDetuning) {
    const auto cfg = parse_config(presets::get("fig3_lower_edge"));
    const auto rows = rates_report(cfg, {-0.1, 0.0, 0.1});
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_GT(rows[1].photon.M_p.real(), 0.0);
    EXPECT_GT(rows[1].phonon.gamma_u.real(), 0.0);
    const auto csv = rates_csv(rows);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
    EXPECT_EQ(csv.substr(0, 13), "Delta_Lx_meV,");
}

TEST(Rates, MidbandIsNearlySymmetric) {
    auto cfg = parse_config(presets::get("fig3_lower_edge"));
    const auto edge = rates_report(cfg, {0.0}, false);
    cfg.laser.placement = LaserPlacement::BandCenter;
    const auto mid = rates_report(cfg, {0.0}, false);
    EXPECT_GT(std::abs(edge[0].photon.M_p.real()), 1000.0 * std::abs(mid[0].photon.M_p.real()));
}

TEST(Rates, UpperEdgeDetuningDeepensM) {
    const auto cfg = parse_config(presets::get("fig3_upper_edge"));
    const auto rows = rates_report(cfg, {-0.1, 0.0});
    EXPECT_LT(rows[1].photon.M_p.real(), 0.0);
    EXPECT_LT(rows[0].photon.M_p.real(), rows[1].photon.M_p.real());
}
