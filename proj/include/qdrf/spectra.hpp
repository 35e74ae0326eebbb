// spectra.hpp — polarization and projected fluorescence spectra, peak analysis

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qdrf/errors.hpp"
#include "qdrf/fourier.hpp"
#include "qdrf/liouvillian.hpp"
#include "qdrf/phonon.hpp"
#include "qdrf/photon.hpp"
#include "qdrf/units.hpp"

namespace qdrf {

enum class TransformMethod { Direct, Fft };

struct SpectrumOptions {
    TransformMethod method{TransformMethod::Direct};
    double residual_tol{1e-3};   // allowed |C_pn(tau_max) - <B>^2| / (1 - <B>^2)
    int fft_log2{18};
};

struct Peak {
    double omega_meV{0.0};
    double height{0.0};
    bool is_sideband{false};
};

struct SpectrumSeries {
    std::vector<double> omega_meV;
    std::vector<double> S0;
    std::vector<double> SP;
    std::vector<Peak> peaks;
    double omega_L_meV{0.0};
    double splitting_meV{0.0};  // expected sideband offset from omega_L
};

/// Uniform grid of n points over omega_L +/- half_width.
inline std::vector<double> make_grid(double center_meV, double half_width_meV, std::size_t n) {
    if (n < 2) throw std::invalid_argument("make_grid: need at least 2 points");
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i)
        g[i] = center_meV - half_width_meV + 2.0 * half_width_meV * static_cast<double>(i) / static_cast<double>(n - 1);
    return g;
}

/// Dressed, incoherent dipole spectrum
///
///   S0(w) = Re int_0^inf [C_pn(t) g(t) - <B>^2 g(inf)] exp(i (w_L - w) t) dt
///
/// with g(t) = <s+(t) s-(0)>_ss. C_pn is split into <B>^2 plus a fast
/// residual: the <B>^2 g(t) part is transformed exactly through the
/// resolvent, the residual part by quadrature on the phonon tau grid.
inline std::vector<double> polarization_spectrum(const Liouvillian& L, const DensityMatrix& rho_ss,
                                                 const PhononModel& bath, double omega_L_meV,
                                                 std::span<const double> omega_grid,
                                                 const SpectrumOptions& opts = {}) {
    for (std::size_t i = 1; i < omega_grid.size(); ++i)
        if (!(omega_grid[i] > omega_grid[i - 1]))
            throw std::invalid_argument("polarization_spectrum: omega grid must be strictly increasing");

    std::vector<double> nu(omega_grid.size());
    for (std::size_t i = 0; i < nu.size(); ++i) nu[i] = units::rad_per_ps(omega_L_meV - omega_grid[i]);

    const double B2 = bath.enabled() ? bath.B_avg() * bath.B_avg() : 1.0;
    const auto zpl = correlation_transform(L, rho_ss, nu);
    std::vector<double> S(nu.size());
    for (std::size_t i = 0; i < nu.size(); ++i) S[i] = B2 * zpl[i].real();
    if (!bath.enabled()) return S;

    const auto& C = bath.correlation_table();
    const double h = bath.dtau_ps();
    const double tail = std::abs(C.back() - B2) / std::max(1.0 - B2, 1e-300);
    if (tail > opts.residual_tol)
        throw NumericalError("polarization_spectrum: phonon correlation not decayed at tau_max (residual " +
                             std::to_string(tail) + ")");

    std::vector<double> tau(C.size());
    for (std::size_t i = 0; i < tau.size(); ++i) tau[i] = static_cast<double>(i) * h;
    const auto g = two_time_correlation(L, rho_ss, tau);
    std::vector<cplx> f(C.size());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = (C[i] - B2) * g[i];

    if (opts.method == TransformMethod::Direct) {
        const auto F = fourier::half_line_direct(f, h, nu);
        for (std::size_t i = 0; i < nu.size(); ++i) S[i] += F[i].real();
    } else {
        std::size_t n_fft = std::size_t{1} << opts.fft_log2;
        while (n_fft < 2 * f.size()) n_fft *= 2;
        const auto F = fourier::half_line_fft(f, h, n_fft);
        for (std::size_t i = 0; i < nu.size(); ++i) S[i] += F.at(nu[i]).real();
    }
    return S;
}

/// S_P = alpha_P * S0 pointwise; optionally normalized to unit maximum.
inline std::vector<double> projected_spectrum(std::span<const double> S0, const PhotonReservoir& res,
                                              std::span<const double> omega_grid, bool normalize = false) {
    if (S0.size() != omega_grid.size())
        throw std::invalid_argument("projected_spectrum: spectrum and grid sizes differ");
    std::vector<double> sp(S0.size());
    for (std::size_t i = 0; i < sp.size(); ++i) sp[i] = res.propagator(omega_grid[i]) * S0[i];
    if (normalize) {
        const double m = *std::max_element(sp.begin(), sp.end());
        if (m > 0.0)
            for (double& v : sp) v /= m;
    }
    return sp;
}

inline std::vector<double> normalized(std::span<const double> s) {
    std::vector<double> out(s.begin(), s.end());
    if (out.empty()) return out;
    const double m = *std::max_element(out.begin(), out.end());
    if (m > 0.0)
        for (double& v : out) v /= m;
    return out;
}

/// 10 log10(S / max S), floored at -300 dB for non-positive values.
inline std::vector<double> to_dB(std::span<const double> s) {
    std::vector<double> out(s.size());
    if (s.empty()) return out;
    const double m = *std::max_element(s.begin(), s.end());
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double r = m > 0.0 ? s[i] / m : 0.0;
        out[i] = 10.0 * std::log10(std::max(r, 1e-30));
    }
    return out;
}

/// Local maxima above threshold * global max, positions refined by a
/// three-point parabola.
inline std::vector<Peak> find_local_maxima(std::span<const double> omega, std::span<const double> v,
                                           double threshold) {
    if (!(threshold > 0.0 && threshold < 1.0))
        throw std::invalid_argument("find_peaks: threshold must lie in (0, 1)");
    if (omega.size() != v.size()) throw std::invalid_argument("find_peaks: size mismatch");
    std::vector<Peak> peaks;
    if (v.size() < 3) return peaks;
    const double vmax = *std::max_element(v.begin(), v.end());
    if (!(vmax > 0.0)) return peaks;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        if (!(v[i] > v[i - 1] && v[i] >= v[i + 1])) continue;
        if (v[i] < threshold * vmax) continue;
        const double a = v[i - 1], b = v[i], c = v[i + 1];
        const double denom = a - 2.0 * b + c;
        double shift = 0.0, height = b;
        if (denom < 0.0) {
            shift = 0.5 * (a - c) / denom;
            height = b - 0.25 * (a - c) * shift;
        }
        const double h = omega[i + 1] - omega[i];
        peaks.push_back({omega[i] + shift * h, height, false});
    }
    return peaks;
}

inline std::vector<Peak> find_peaks(const SpectrumSeries& s, std::span<const double> values, double threshold) {
    auto peaks = find_local_maxima(s.omega_meV, values, threshold);
    for (auto& p : peaks) p.is_sideband = std::abs(p.omega_meV - s.omega_L_meV) > 0.5 * s.splitting_meV;
    return peaks;
}

struct SidebandPair {
    Peak lower;
    Peak upper;
};

/// Tallest peaks within (0.4, 1.6) * splitting below and above omega_L.
inline SidebandPair sidebands(const SpectrumSeries& s, std::span<const Peak> peaks) {
    const Peak* lo = nullptr;
    const Peak* hi = nullptr;
    for (const auto& p : peaks) {
        const double d = p.omega_meV - s.omega_L_meV;
        const double a = std::abs(d);
        if (a < 0.4 * s.splitting_meV || a > 1.6 * s.splitting_meV) continue;
        const Peak*& slot = d < 0.0 ? lo : hi;
        if (!slot || p.height > slot->height) slot = &p;
    }
    if (!lo || !hi) throw NumericalError("sideband_asymmetry: missing Mollow sidebands");
    return {*lo, *hi};
}

/// height(lower sideband) / height(upper sideband)
inline double sideband_asymmetry(const SpectrumSeries& s, std::span<const Peak> peaks) {
    const auto sb = sidebands(s, peaks);
    return sb.lower.height / sb.upper.height;
}

inline double sideband_asymmetry(const SpectrumSeries& s) { return sideband_asymmetry(s, s.peaks); }

} // namespace qdrf
