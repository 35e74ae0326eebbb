// qdrf — command line front end: sweeps, rate tables, LDOS checks, presets
//
//   qdrf run --config cfg.json [--no-phonons] [--threads N] [--no-resume]
//   qdrf rates --config cfg.json --detuning-range -0.6:0.6:25 [--out rates.csv]
//   qdrf ldos-check file.ldos
//   qdrf presets list
//   qdrf presets emit fig3_upper_edge
//
// exit status: 0 ok, 1 configuration error, 2 numerical failure

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qdrf/qdrf.hpp"

namespace {

std::vector<double> parse_range(const std::string& spec) {
    // a:b:n, inclusive, n >= 1
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (;;) {
        const auto pos = spec.find(':', start);
        parts.push_back(spec.substr(start, pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    if (parts.size() != 3) throw qdrf::ConfigError("--detuning-range: expected a:b:n");
    const double a = qdrf::detail::parse_number(parts[0], "--detuning-range");
    const double b = qdrf::detail::parse_number(parts[1], "--detuning-range");
    const double nd = qdrf::detail::parse_number(parts[2], "--detuning-range");
    const int n = static_cast<int>(nd);
    if (n < 1 || n != nd) throw qdrf::ConfigError("--detuning-range: n must be a positive integer");
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
    return v;
}

int cmd_run(const std::string& path, bool no_phonons, unsigned threads, bool resume, bool verbose) {
    auto cfg = qdrf::load_config(path);
    if (no_phonons) {
        cfg.phonon.enabled = false;
        cfg.variants = {false};
    }
    qdrf::SweepOptions opts;
    opts.threads = threads;
    opts.resume = resume;
    opts.quiet = !verbose;
    const auto m = qdrf::run_sweep(cfg, opts);
    int failed = 0, skipped = 0;
    for (const auto& e : m.entries) {
        if (e.status != "ok") {
            ++failed;
            std::fprintf(stderr, "%s=%g %s: %s: %s\n", e.variable.c_str(), e.value, e.variant.c_str(),
                         e.status.c_str(), e.message.c_str());
        }
        if (e.skipped) ++skipped;
    }
    std::printf("%s: %zu points (%d resumed, %d failed) -> %s\n", cfg.name.c_str(), m.entries.size(), skipped, failed,
                cfg.output.directory.c_str());
    if (m.any_numerical_failure()) return 2;
    return failed ? 1 : 0;
}

int cmd_rates(const std::string& path, const std::string& range, bool no_phonons, const std::string& out) {
    const auto cfg = qdrf::load_config(path);
    const auto rows = qdrf::rates_report(cfg, parse_range(range), !no_phonons);
    const auto text = qdrf::rates_csv(rows);
    if (out.empty()) {
        std::fputs(text.c_str(), stdout);
    } else {
        std::ofstream f(out);
        if (!f) throw qdrf::ConfigError("cannot write '" + out + "'");
        f << text;
    }
    return 0;
}

int cmd_ldos_check(const std::string& path) {
    const auto table = qdrf::read_ldos(path);
    const auto t = table.to_reservoir();
    const qdrf::PhotonReservoir res(t);
    const double w0 = res.pf_maximum(qdrf::EdgeSide::Lower);
    std::printf("%s: %zu rows, omega %.6f .. %.6f meV\n", path.c_str(), t.omega_meV.size(), t.omega_meV.front(),
                t.omega_meV.back());
    std::printf("  PF_scale %g, gamma_ref %g ueV\n", table.pf_scale, table.gamma_ref_ueV);
    std::printf("  PF maximum %.6f meV, PF %.4g\n", w0, qdrf::purcell_factor(w0, res, table.gamma_ref_ueV));
    const auto peaks = qdrf::ldos_peaks(t);
    std::printf("  %zu LDOS maxima:", peaks.size());
    for (double p : peaks) std::printf(" %.6f", p);
    std::printf("\n");
    return 0;
}

int cmd_presets(const std::string& action, const std::string& name) {
    if (action == "list") {
        for (const auto& n : qdrf::presets::names()) std::printf("%s\n", n.c_str());
        return 0;
    }
    if (action == "emit") {
        if (name.empty()) throw qdrf::ConfigError("presets emit: missing preset name");
        std::printf("%s\n", qdrf::presets::get(name).dump(2).c_str());
        return 0;
    }
    throw qdrf::ConfigError("presets: expected 'list' or 'emit <name>'");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Resonance fluorescence of a driven quantum dot in structured photon and phonon baths"};
    app.require_subcommand(1);

    std::string config, range, out, ldos_file, preset_action, preset_name;
    bool no_phonons = false, no_resume = false, verbose = false;
    unsigned threads = 0;

    auto* run = app.add_subcommand("run", "run the sweep described by a config file");
    run->add_option("--config,-c", config, "config file (JSON)")->required();
    run->add_flag("--no-phonons", no_phonons, "disable the phonon bath");
    run->add_option("--threads,-j", threads, "worker threads (default: all cores)");
    run->add_flag("--no-resume", no_resume, "recompute points already in the manifest");
    run->add_flag("--verbose,-v", verbose, "report each point");

    auto* rates = app.add_subcommand("rates", "tabulate scattering rates against detuning");
    rates->add_option("--config,-c", config, "config file (JSON)")->required();
    rates->add_option("--detuning-range", range, "a:b:n in meV")->required();
    rates->add_flag("--no-phonons", no_phonons, "disable the phonon bath");
    rates->add_option("--out,-o", out, "write CSV here instead of stdout");

    auto* check = app.add_subcommand("ldos-check", "validate and summarize a tabulated LDOS file");
    check->add_option("file", ldos_file, "LDOS file")->required();

    auto* pre = app.add_subcommand("presets", "list or print bundled figure configs");
    pre->add_option("action", preset_action, "list | emit")->required();
    pre->add_option("name", preset_name, "preset name for emit");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) return cmd_run(config, no_phonons, threads, !no_resume, verbose);
        if (*rates) return cmd_rates(config, range, no_phonons, out);
        if (*check) return cmd_ldos_check(ldos_file);
        if (*pre) return cmd_presets(preset_action, preset_name);
    } catch (const qdrf::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const qdrf::NumericalError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
