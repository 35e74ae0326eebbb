// config.hpp — run configuration: JSON parsing, validation, presets

#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qdrf/errors.hpp"
#include "qdrf/ldos_io.hpp"
#include "qdrf/phonon.hpp"
#include "qdrf/photon.hpp"
#include "qdrf/spectra.hpp"
#include "qdrf/system.hpp"

namespace qdrf {

using json = nlohmann::ordered_json;

enum class SweepVariable { Delta_Lx, Omega, T };

inline std::string to_string(SweepVariable v) {
    switch (v) {
        case SweepVariable::Delta_Lx: return "Delta_Lx";
        case SweepVariable::Omega: return "Omega";
        case SweepVariable::T: return "T";
    }
    return "?";
}

enum class LaserPlacement { Absolute, BandCenter, LowerEdge, UpperEdge, PfMaximum };

struct ReservoirSpec {
    std::string type{"flat"};
    // flat
    double gamma_ueV{1.5};
    // lorentzian
    double omega_c_meV{800.0};
    double kappa_ueV{100.0};
    double g_ueV{20.0};
    // coupled_cavity
    double omega0_meV{800.0};
    double half_bandwidth_meV{4.0};
    double Q{52000.0};
    double midband_pf{2.0};
    // tabulated
    std::string file;  // resolved against the config directory

    PhotonReservoir build(double gamma_ref_ueV) const {
        if (type == "flat") return PhotonReservoir(reservoir::Flat{gamma_ueV});
        if (type == "lorentzian") return PhotonReservoir(reservoir::LorentzianCavity{omega_c_meV, kappa_ueV, g_ueV});
        if (type == "coupled_cavity")
            return PhotonReservoir(reservoir::CoupledCavityWaveguide::calibrated(omega0_meV, half_bandwidth_meV, Q,
                                                                                 midband_pf, gamma_ref_ueV));
        if (type == "tabulated") return ingest_ldos(file);
        throw ConfigError("reservoir.type: unknown type '" + type + "'");
    }
};

struct LaserSpec {
    LaserPlacement placement{LaserPlacement::Absolute};
    double omega_L_meV{800.0};
};

struct SpectrumSpec {
    std::optional<double> half_width_meV;  // default 2.5 * max(Omega, 1 meV)
    int points{2001};
    TransformMethod method{TransformMethod::Direct};
    double peak_threshold{1e-3};
};

struct OutputSpec {
    std::string directory{"out"};
    std::string format{"csv"};
    bool normalize{false};
    bool dB{true};
};

struct SweepSpec {
    SweepVariable variable{SweepVariable::Delta_Lx};
    std::vector<double> values{0.0};
};

struct RunConfig {
    std::string name{"run"};
    SystemParams system{};
    double Delta_Lx_meV{0.0};
    bool omega_from_ldos{false};
    LaserSpec laser{};
    PhononBath phonon{};
    PhononNumerics phonon_numerics{};
    ReservoirSpec reservoir{};
    FrequencyWindow window{};
    SpectrumSpec spectrum{};
    double residual_tol{1e-3};
    SweepSpec sweep{};
    std::vector<bool> variants{true};  // phonons on/off per variant
    OutputSpec output{};
};

// JSON object reader that rejects unknown keys and reports dotted paths.
class Fields {
public:
    Fields(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(where("") + ": expected an object");
    }
    ~Fields() = default;

    bool has(const std::string& key) const { return j_.contains(key); }

    double num(const std::string& key, double def) {
        if (!take(key)) return def;
        const auto& v = j_.at(key);
        if (!v.is_number()) throw ConfigError(where(key) + ": expected a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) throw ConfigError(where(key) + ": must be finite");
        return d;
    }
    int integer(const std::string& key, int def) {
        if (!take(key)) return def;
        const auto& v = j_.at(key);
        if (!v.is_number_integer()) throw ConfigError(where(key) + ": expected an integer");
        return v.get<int>();
    }
    bool boolean(const std::string& key, bool def) {
        if (!take(key)) return def;
        const auto& v = j_.at(key);
        if (!v.is_boolean()) throw ConfigError(where(key) + ": expected true or false");
        return v.get<bool>();
    }
    std::string str(const std::string& key, const std::string& def) {
        if (!take(key)) return def;
        const auto& v = j_.at(key);
        if (!v.is_string()) throw ConfigError(where(key) + ": expected a string");
        return v.get<std::string>();
    }
    const json* sub(const std::string& key) {
        if (!take(key)) return nullptr;
        return &j_.at(key);
    }
    std::string where(const std::string& key) const {
        if (key.empty()) return path_.empty() ? "config" : path_;
        return path_.empty() ? key : path_ + "." + key;
    }
    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key())) throw ConfigError(where(it.key()) + ": unknown key");
    }

private:
    bool take(const std::string& key) {
        seen_.insert(key);
        return j_.contains(key) && !j_.at(key).is_null();
    }
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

namespace detail {

inline void require(bool ok, const std::string& field, const std::string& what) {
    if (!ok) throw ConfigError(field + ": " + what);
}

inline LaserPlacement parse_placement(const std::string& s, const std::string& field) {
    if (s == "absolute") return LaserPlacement::Absolute;
    if (s == "band_center") return LaserPlacement::BandCenter;
    if (s == "lower_edge") return LaserPlacement::LowerEdge;
    if (s == "upper_edge") return LaserPlacement::UpperEdge;
    if (s == "pf_maximum") return LaserPlacement::PfMaximum;
    throw ConfigError(field + ": unknown placement '" + s + "'");
}

inline std::string placement_name(LaserPlacement p) {
    switch (p) {
        case LaserPlacement::Absolute: return "absolute";
        case LaserPlacement::BandCenter: return "band_center";
        case LaserPlacement::LowerEdge: return "lower_edge";
        case LaserPlacement::UpperEdge: return "upper_edge";
        case LaserPlacement::PfMaximum: return "pf_maximum";
    }
    return "?";
}

} // namespace detail

/// Parse and validate; relative file paths resolve against base_dir.
inline RunConfig parse_config(const json& j, const std::filesystem::path& base_dir = ".") {
    using detail::require;
    RunConfig c;
    Fields top(j, "");
    c.name = top.str("name", c.name);

    if (const json* s = top.sub("system")) {
        Fields f(*s, "system");
        c.system.Omega_meV = f.num("Omega_meV", c.system.Omega_meV);
        c.Delta_Lx_meV = f.num("Delta_Lx_meV", 0.0);
        c.system.dipole_debye = f.num("dipole_debye", c.system.dipole_debye);
        c.system.gamma_b_ueV = f.num("gamma_b_ueV", c.system.gamma_b_ueV);
        c.system.gamma_d_ueV = f.num("gamma_d_ueV", c.system.gamma_d_ueV);
        c.omega_from_ldos = f.boolean("Omega_from_ldos_peaks", false);
        f.finish();
        require(c.system.Omega_meV >= 0.0, "system.Omega_meV", "must be >= 0");
        require(c.system.dipole_debye > 0.0, "system.dipole_debye", "must be > 0");
        require(c.system.gamma_b_ueV > 0.0, "system.gamma_b_ueV", "must be > 0 (unique steady state)");
        require(c.system.gamma_d_ueV >= 0.0, "system.gamma_d_ueV", "must be >= 0");
    }

    if (const json* s = top.sub("laser")) {
        Fields f(*s, "laser");
        c.laser.placement = detail::parse_placement(f.str("placement", "absolute"), "laser.placement");
        c.laser.omega_L_meV = f.num("omega_L_meV", c.laser.omega_L_meV);
        f.finish();
        require(c.laser.omega_L_meV > 0.0, "laser.omega_L_meV", "must be > 0");
    }

    if (const json* s = top.sub("phonons")) {
        Fields f(*s, "phonons");
        c.phonon.enabled = f.boolean("enabled", true);
        c.phonon.T_K = f.num("T_K", c.phonon.T_K);
        c.phonon.alpha_p_ps2 = f.num("alpha_p_ps2", c.phonon.alpha_p_ps2);
        c.phonon.omega_b_meV = f.num("omega_b_meV", c.phonon.omega_b_meV);
        f.finish();
        require(c.phonon.T_K >= 0.0, "phonons.T_K", "must be >= 0");
        require(c.phonon.alpha_p_ps2 >= 0.0, "phonons.alpha_p_ps2", "must be >= 0");
        require(c.phonon.omega_b_meV > 0.0, "phonons.omega_b_meV", "must be > 0");
    }

    if (const json* s = top.sub("reservoir")) {
        Fields f(*s, "reservoir");
        auto& r = c.reservoir;
        r.type = f.str("type", "flat");
        if (r.type == "flat") {
            r.gamma_ueV = f.num("gamma_ueV", r.gamma_ueV);
            require(r.gamma_ueV >= 0.0, "reservoir.gamma_ueV", "must be >= 0");
        } else if (r.type == "lorentzian") {
            r.omega_c_meV = f.num("omega_c_meV", r.omega_c_meV);
            r.kappa_ueV = f.num("kappa_ueV", r.kappa_ueV);
            r.g_ueV = f.num("g_ueV", r.g_ueV);
            require(r.kappa_ueV > 0.0, "reservoir.kappa_ueV", "must be > 0");
        } else if (r.type == "coupled_cavity") {
            r.omega0_meV = f.num("omega0_meV", r.omega0_meV);
            r.half_bandwidth_meV = f.num("half_bandwidth_meV", r.half_bandwidth_meV);
            r.Q = f.num("Q", r.Q);
            r.midband_pf = f.num("midband_pf", r.midband_pf);
            require(r.omega0_meV > 0.0, "reservoir.omega0_meV", "must be > 0");
            require(r.half_bandwidth_meV > 0.0, "reservoir.half_bandwidth_meV", "must be > 0");
            require(r.Q > 0.0, "reservoir.Q", "must be > 0");
            require(r.midband_pf > 0.0, "reservoir.midband_pf", "must be > 0");
        } else if (r.type == "tabulated") {
            const std::string file = f.str("file", "");
            require(!file.empty(), "reservoir.file", "required for a tabulated reservoir");
            std::filesystem::path p(file);
            r.file = (p.is_absolute() ? p : base_dir / p).lexically_normal().string();
        } else {
            throw ConfigError("reservoir.type: unknown type '" + r.type + "'");
        }
        f.finish();
    }

    if (const json* s = top.sub("spectrum")) {
        Fields f(*s, "spectrum");
        if (f.has("half_width_meV") && !s->at("half_width_meV").is_null())
            c.spectrum.half_width_meV = f.num("half_width_meV", 0.0);
        else
            f.num("half_width_meV", 0.0);
        c.spectrum.points = f.integer("points", c.spectrum.points);
        const std::string m = f.str("method", "direct");
        if (m == "direct") c.spectrum.method = TransformMethod::Direct;
        else if (m == "fft") c.spectrum.method = TransformMethod::Fft;
        else throw ConfigError("spectrum.method: expected 'direct' or 'fft'");
        c.spectrum.peak_threshold = f.num("peak_threshold", c.spectrum.peak_threshold);
        f.finish();
        if (c.spectrum.half_width_meV)
            require(*c.spectrum.half_width_meV > 0.0, "spectrum.half_width_meV", "must be > 0");
        require(c.spectrum.points >= 3, "spectrum.points", "must be >= 3");
        require(c.spectrum.peak_threshold > 0.0 && c.spectrum.peak_threshold < 1.0, "spectrum.peak_threshold",
                "must lie in (0, 1)");
    }

    if (const json* s = top.sub("numerics")) {
        Fields f(*s, "numerics");
        auto& n = c.phonon_numerics;
        n.table_dtau_ps = f.num("phonon_dtau_ps", n.table_dtau_ps);
        n.table_tau_max_ps = f.num("phonon_tau_max_ps", n.table_tau_max_ps);
        n.rate_dtau_ps = f.num("rate_dtau_ps", n.rate_dtau_ps);
        n.rate_tau_max_ps = f.num("rate_tau_max_ps", n.rate_tau_max_ps);
        n.regularization_meV = f.num("regularization_meV", n.regularization_meV);
        c.window.half_width_meV = f.num("window_half_width_meV", c.window.half_width_meV);
        c.window.step_meV = f.num("window_step_meV", c.window.step_meV);
        c.residual_tol = f.num("residual_tol", c.residual_tol);
        f.finish();
        require(n.table_dtau_ps > 0.0, "numerics.phonon_dtau_ps", "must be > 0");
        require(n.table_tau_max_ps > n.table_dtau_ps * 16, "numerics.phonon_tau_max_ps", "too short");
        require(n.rate_dtau_ps > 0.0, "numerics.rate_dtau_ps", "must be > 0");
        require(n.rate_tau_max_ps > n.rate_dtau_ps * 16, "numerics.rate_tau_max_ps", "too short");
        require(n.rate_tau_max_ps <= n.table_tau_max_ps, "numerics.rate_tau_max_ps",
                "must not exceed numerics.phonon_tau_max_ps");
        require(n.regularization_meV > 0.0, "numerics.regularization_meV", "must be > 0");
        require(c.window.half_width_meV > 0.0, "numerics.window_half_width_meV", "must be > 0");
        require(c.window.step_meV > 0.0 && c.window.step_meV < c.window.half_width_meV, "numerics.window_step_meV",
                "must be > 0 and below the window half width");
        require(c.residual_tol > 0.0, "numerics.residual_tol", "must be > 0");
    }

    if (const json* s = top.sub("sweep")) {
        Fields f(*s, "sweep");
        const std::string v = f.str("variable", "Delta_Lx");
        if (v == "Delta_Lx") c.sweep.variable = SweepVariable::Delta_Lx;
        else if (v == "Omega") c.sweep.variable = SweepVariable::Omega;
        else if (v == "T") c.sweep.variable = SweepVariable::T;
        else throw ConfigError("sweep.variable: expected one of Delta_Lx, Omega, T");
        const json* vals = f.sub("values");
        require(vals && vals->is_array() && !vals->empty(), "sweep.values", "must be a non-empty array");
        c.sweep.values.clear();
        for (std::size_t i = 0; i < vals->size(); ++i) {
            const auto& x = (*vals)[i];
            const std::string field = "sweep.values[" + std::to_string(i) + "]";
            require(x.is_number(), field, "expected a number");
            const double d = x.get<double>();
            require(std::isfinite(d), field, "must be finite");
            if (c.sweep.variable == SweepVariable::Omega) require(d >= 0.0, field, "Omega must be >= 0");
            if (c.sweep.variable == SweepVariable::T) require(d >= 0.0, field, "T must be >= 0");
            c.sweep.values.push_back(d);
        }
        f.finish();
    }

    if (const json* s = top.sub("variants")) {
        require(s->is_array() && !s->empty(), "variants", "must be a non-empty array");
        c.variants.clear();
        for (const auto& v : *s) {
            require(v.is_string(), "variants", "entries must be strings");
            const auto name = v.get<std::string>();
            if (name == "phonons") c.variants.push_back(true);
            else if (name == "no_phonons") c.variants.push_back(false);
            else throw ConfigError("variants: unknown variant '" + name + "'");
        }
    } else {
        c.variants = {c.phonon.enabled};
    }

    if (const json* s = top.sub("output")) {
        Fields f(*s, "output");
        c.output.directory = f.str("directory", c.output.directory);
        c.output.format = f.str("format", c.output.format);
        c.output.normalize = f.boolean("normalize", c.output.normalize);
        c.output.dB = f.boolean("dB", c.output.dB);
        f.finish();
        require(!c.output.directory.empty(), "output.directory", "must not be empty");
        require(c.output.format == "csv" || c.output.format == "json", "output.format", "expected 'csv' or 'json'");
    }
    top.finish();

    const bool ccw = c.reservoir.type == "coupled_cavity";
    const auto pl = c.laser.placement;
    if ((pl == LaserPlacement::BandCenter || pl == LaserPlacement::LowerEdge || pl == LaserPlacement::UpperEdge) &&
        !ccw)
        throw ConfigError("laser.placement: '" + detail::placement_name(pl) + "' needs a coupled_cavity reservoir");
    if (pl == LaserPlacement::PfMaximum && c.reservoir.type == "flat")
        throw ConfigError("laser.placement: 'pf_maximum' is undefined for a flat reservoir");
    if (c.omega_from_ldos && c.reservoir.type != "tabulated")
        throw ConfigError("system.Omega_from_ldos_peaks: needs a tabulated reservoir");
    return c;
}

inline json parse_json_text(const std::string& text, const std::string& name) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(name + ": " + e.what());
    }
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    const json j = parse_json_text(ss.str(), path);
    const auto base = std::filesystem::absolute(path).parent_path();
    return parse_config(j, base);
}

/// Canonical JSON form of a parsed config (all defaults explicit).
inline json to_json(const RunConfig& c) {
    json j;
    j["name"] = c.name;
    j["system"] = {{"Omega_meV", c.system.Omega_meV},       {"Delta_Lx_meV", c.Delta_Lx_meV},
                   {"dipole_debye", c.system.dipole_debye}, {"gamma_b_ueV", c.system.gamma_b_ueV},
                   {"gamma_d_ueV", c.system.gamma_d_ueV},   {"Omega_from_ldos_peaks", c.omega_from_ldos}};
    j["laser"] = {{"placement", detail::placement_name(c.laser.placement)}, {"omega_L_meV", c.laser.omega_L_meV}};
    j["phonons"] = {{"enabled", c.phonon.enabled},
                    {"T_K", c.phonon.T_K},
                    {"alpha_p_ps2", c.phonon.alpha_p_ps2},
                    {"omega_b_meV", c.phonon.omega_b_meV}};
    const auto& r = c.reservoir;
    json res{{"type", r.type}};
    if (r.type == "flat") res["gamma_ueV"] = r.gamma_ueV;
    if (r.type == "lorentzian") {
        res["omega_c_meV"] = r.omega_c_meV;
        res["kappa_ueV"] = r.kappa_ueV;
        res["g_ueV"] = r.g_ueV;
    }
    if (r.type == "coupled_cavity") {
        res["omega0_meV"] = r.omega0_meV;
        res["half_bandwidth_meV"] = r.half_bandwidth_meV;
        res["Q"] = r.Q;
        res["midband_pf"] = r.midband_pf;
    }
    if (r.type == "tabulated") res["file"] = r.file;
    j["reservoir"] = res;
    json sp;
    if (c.spectrum.half_width_meV) sp["half_width_meV"] = *c.spectrum.half_width_meV;
    else sp["half_width_meV"] = nullptr;
    sp["points"] = c.spectrum.points;
    sp["method"] = c.spectrum.method == TransformMethod::Direct ? "direct" : "fft";
    sp["peak_threshold"] = c.spectrum.peak_threshold;
    j["spectrum"] = sp;
    const auto& n = c.phonon_numerics;
    j["numerics"] = {{"phonon_dtau_ps", n.table_dtau_ps},
                     {"phonon_tau_max_ps", n.table_tau_max_ps},
                     {"rate_dtau_ps", n.rate_dtau_ps},
                     {"rate_tau_max_ps", n.rate_tau_max_ps},
                     {"regularization_meV", n.regularization_meV},
                     {"window_half_width_meV", c.window.half_width_meV},
                     {"window_step_meV", c.window.step_meV},
                     {"residual_tol", c.residual_tol}};
    j["sweep"] = {{"variable", to_string(c.sweep.variable)}, {"values", c.sweep.values}};
    json vars = json::array();
    for (bool v : c.variants) vars.push_back(v ? "phonons" : "no_phonons");
    j["variants"] = vars;
    j["output"] = {{"directory", c.output.directory},
                   {"format", c.output.format},
                   {"normalize", c.output.normalize},
                   {"dB", c.output.dB}};
    return j;
}

// ---- presets -------------------------------------------------------------

namespace presets {

inline json base(const std::string& name) {
    json j;
    j["name"] = name;
    j["system"] = {{"Omega_meV", 0.4}, {"dipole_debye", 50.0}, {"gamma_b_ueV", 1.5}, {"gamma_d_ueV", 7.8}};
    j["phonons"] = {{"enabled", true}, {"T_K", 4.0}};
    j["reservoir"] = {{"type", "coupled_cavity"},
                      {"omega0_meV", 800.0},
                      {"half_bandwidth_meV", 4.0},
                      {"Q", 52000.0},
                      {"midband_pf", 2.0}};
    j["variants"] = {"phonons", "no_phonons"};
    j["output"] = {{"directory", "out/" + name}};
    return j;
}

inline const std::vector<std::string>& names() {
    static const std::vector<std::string> n{"fig2_band_center", "fig3_lower_edge", "fig3_upper_edge",
                                            "fig5_detuning_sweep", "fig7_w1"};
    return n;
}

inline json get(const std::string& name) {
    json j = base(name);
    if (name == "fig2_band_center") {
        j["system"]["Omega_meV"] = 1.0;
        j["laser"] = {{"placement", "band_center"}};
        j["spectrum"] = {{"half_width_meV", 6.0}, {"points", 24001}};
        j["sweep"] = {{"variable", "Delta_Lx"}, {"values", {0.0}}};
    } else if (name == "fig3_lower_edge") {
        j["laser"] = {{"placement", "lower_edge"}};
        j["spectrum"] = {{"half_width_meV", 1.2}, {"points", 2401}};
        j["sweep"] = {{"variable", "Delta_Lx"}, {"values", {0.0}}};
    } else if (name == "fig3_upper_edge") {
        j["laser"] = {{"placement", "upper_edge"}};
        j["spectrum"] = {{"half_width_meV", 1.2}, {"points", 2401}};
        j["sweep"] = {{"variable", "Delta_Lx"}, {"values", {0.0}}};
    } else if (name == "fig5_detuning_sweep") {
        j["laser"] = {{"placement", "upper_edge"}};
        j["spectrum"] = {{"half_width_meV", 1.6}, {"points", 3201}};
        j["sweep"] = {{"variable", "Delta_Lx"}, {"values", {-0.6, -0.1, 0.0, 0.2, 0.6}}};
    } else if (name == "fig7_w1") {
        j["system"].erase("Omega_meV");
        j["system"]["Omega_from_ldos_peaks"] = true;
        j["laser"] = {{"placement", "pf_maximum"}};
        j["reservoir"] = {{"type", "tabulated"}, {"file", "../data/w1_disordered_sample.ldos"}};
        j["spectrum"] = {{"half_width_meV", 1.5}, {"points", 3001}};
        j["sweep"] = {{"variable", "Delta_Lx"}, {"values", {0.0}}};
    } else {
        throw ConfigError("unknown preset '" + name + "'");
    }
    return j;
}

} // namespace presets

} // namespace qdrf
