// engine.hpp — one parameter point end to end: dressed states, rates,
// Liouvillian, steady state and spectra

#pragma once

#include <span>
#include <vector>

#include "qdrf/liouvillian.hpp"
#include "qdrf/phonon.hpp"
#include "qdrf/photon.hpp"
#include "qdrf/spectra.hpp"
#include "qdrf/system.hpp"

namespace qdrf {

struct EngineOptions {
    FrequencyWindow window{};
    SpectrumOptions spectrum{};
    double peak_threshold{1e-3};
};

struct PointResult {
    DressedState dressed;
    PhononRates phonon;
    PhotonRates photon;
    Liouvillian liouvillian;
    DensityMatrix rho_ss;
    SpectrumSeries spectrum;
};

/// Rates and generator only, no spectrum.
inline PointResult solve_rates(const SystemParams& sys, const PhononModel& bath, const PhotonReservoir& res,
                               const EngineOptions& opts = {}) {
    sys.validate();
    PointResult r;
    r.dressed = dressed_states(sys, bath.enabled() ? bath.B_avg() : 1.0);
    r.phonon = phonon_rates(r.dressed, sys.Delta_Lx_meV(), bath);
    r.photon = photon_rates(r.dressed, sys.Delta_Lx_meV(), res, bath, opts.window);
    r.liouvillian = build_liouvillian(sys, r.dressed, r.phonon, r.photon);
    return r;
}

inline PointResult solve_point(const SystemParams& sys, const PhononModel& bath, const PhotonReservoir& res,
                               std::span<const double> omega_grid, const EngineOptions& opts = {}) {
    PointResult r = solve_rates(sys, bath, res, opts);
    r.rho_ss = steady_state(r.liouvillian);

    auto& s = r.spectrum;
    s.omega_meV.assign(omega_grid.begin(), omega_grid.end());
    s.omega_L_meV = sys.omega_L_meV;
    s.splitting_meV = r.dressed.eta_meV;
    s.S0 = polarization_spectrum(r.liouvillian, r.rho_ss, bath, sys.omega_L_meV, omega_grid, opts.spectrum);
    s.SP = projected_spectrum(s.S0, res, omega_grid);
    s.peaks = find_peaks(s, s.S0, opts.peak_threshold);
    return r;
}

} // namespace qdrf
