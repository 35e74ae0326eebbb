// photon.hpp — structured photon reservoirs and the photon scattering rates
//
// A reservoir is described by its spectral function J_ph(w), normalized so
// that 2 pi J_ph(w) is the phonon-free spontaneous-emission rate (ueV) of a
// dot at frequency w, and by the propagator alpha_P(w) to the detector.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

#include "qdrf/errors.hpp"
#include "qdrf/phonon.hpp"
#include "qdrf/system.hpp"
#include "qdrf/units.hpp"

namespace qdrf {

namespace reservoir {

struct Flat {
    double gamma_ueV{1.5};
};

struct LorentzianCavity {
    double omega_c_meV{800.0};
    double kappa_ueV{100.0};
    double g_ueV{20.0};
};

/// Tight-binding coupled-cavity waveguide with band edges omega_l < omega_u.
/// J_ph(w) = scale * w / pi * Im[1 / (sqrt(w - w_u - i k_u) sqrt(w - w_l + i k_l))],
/// all frequencies in meV, scale in ueV (so that J_ph is in ueV).
struct CoupledCavityWaveguide {
    double omega_u_meV{804.0};
    double omega_l_meV{796.0};
    double kappa_u_ueV{7.7};
    double kappa_l_ueV{7.7};
    double scale_ueV{1.0};

    /// 1/(sqrt(w - w~_u) sqrt(w - w~_l*)) as a product of principal roots. This
    /// has Im >= 0 on the whole real axis, i.e. it is minus the branch of
    /// 1/sqrt((w - w~_u)(w - w~_l*)) whose imaginary part is <= 0 in the band.
    std::complex<double> band_function(double omega_meV) const {
        using c = std::complex<double>;
        const c a = c(omega_meV - omega_u_meV, -1e-3 * kappa_u_ueV);
        const c b = c(omega_meV - omega_l_meV, 1e-3 * kappa_l_ueV);
        return 1.0 / (std::sqrt(a) * std::sqrt(b));
    }

    /// Band edges at omega0 -/+ half_bandwidth, damping omega0 / 2Q on both
    /// edges, and the overall scale fixed by the mid-band Purcell factor.
    static CoupledCavityWaveguide calibrated(double omega0_meV, double half_bandwidth_meV, double Q,
                                             double midband_pf, double gamma_ref_ueV) {
        if (!(half_bandwidth_meV > 0.0) || !(Q > 0.0) || !(midband_pf > 0.0) || !(gamma_ref_ueV > 0.0))
            throw std::invalid_argument("CoupledCavityWaveguide::calibrated: parameters must be positive");
        CoupledCavityWaveguide w;
        w.omega_u_meV = omega0_meV + half_bandwidth_meV;
        w.omega_l_meV = omega0_meV - half_bandwidth_meV;
        w.kappa_u_ueV = w.kappa_l_ueV = 1e3 * omega0_meV / (2.0 * Q);
        w.scale_ueV = 1.0;
        const double unit_rate = 2.0 * omega0_meV * w.band_function(omega0_meV).imag();
        w.scale_ueV = midband_pf * gamma_ref_ueV / unit_rate;
        return w;
    }
};

/// Tabulated reservoir; J_ph in ueV, alpha_P already normalized.
struct Tabulated {
    std::vector<double> omega_meV;
    std::vector<double> j_ph_ueV;
    std::vector<double> alpha_P;
};

} // namespace reservoir

enum class EdgeSide { Lower, Upper };

struct FrequencyWindow {
    double half_width_meV{20.0};
    double step_meV{5e-4};
};

class PhotonReservoir {
public:
    using Model = std::variant<reservoir::Flat, reservoir::LorentzianCavity,
                               reservoir::CoupledCavityWaveguide, reservoir::Tabulated>;

    explicit PhotonReservoir(Model model) : model_(std::move(model)) {
        validate();
        if (const auto* w = std::get_if<reservoir::CoupledCavityWaveguide>(&model_)) {
            // propagator normalization from a dense scan across both edges
            const double step = 0.1e-3 * std::min(w->kappa_u_ueV, w->kappa_l_ueV);
            double peak = 0.0;
            for (double x = w->omega_l_meV - 0.5; x <= w->omega_u_meV + 0.5; x += step)
                peak = std::max(peak, raw_ccw_propagator(*w, x));
            alpha_norm_ = peak;
        }
    }

    const Model& model() const { return model_; }
    bool is_flat() const { return std::holds_alternative<reservoir::Flat>(model_); }

    std::string kind() const {
        return std::visit([](const auto& m) -> std::string {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, reservoir::Flat>) return "flat";
            else if constexpr (std::is_same_v<T, reservoir::LorentzianCavity>) return "lorentzian";
            else if constexpr (std::is_same_v<T, reservoir::CoupledCavityWaveguide>) return "coupled_cavity";
            else return "tabulated";
        }, model_);
    }

    /// Spectral function in ueV.
    double j_ph(double omega_meV) const {
        return std::visit([&](const auto& m) -> double { return j_of(m, omega_meV); }, model_);
    }

    double propagator(double omega_meV) const {
        return std::visit([&](const auto& m) -> double { return alpha_of(m, omega_meV); }, model_);
    }

    /// Integration limits for frequency integrals centered on `center`;
    /// tabulated reservoirs are clipped to their grid.
    std::pair<double, double> support(double center_meV, const FrequencyWindow& win) const {
        double lo = center_meV - win.half_width_meV;
        double hi = center_meV + win.half_width_meV;
        if (const auto* t = std::get_if<reservoir::Tabulated>(&model_)) {
            lo = std::max(lo, t->omega_meV.front());
            hi = std::min(hi, t->omega_meV.back());
        }
        return {lo, hi};
    }

    /// Frequency of maximum J_ph near a band edge (coupled-cavity waveguide),
    /// or the global maximum for other reservoirs.
    double pf_maximum(EdgeSide side) const {
        double lo = 0.0, hi = 0.0, step = 0.0;
        if (const auto* w = std::get_if<reservoir::CoupledCavityWaveguide>(&model_)) {
            const double mid = 0.5 * (w->omega_l_meV + w->omega_u_meV);
            lo = side == EdgeSide::Lower ? w->omega_l_meV - 0.1 : mid;
            hi = side == EdgeSide::Lower ? mid : w->omega_u_meV + 0.1;
            step = 0.02e-3 * std::min(w->kappa_u_ueV, w->kappa_l_ueV);
        } else if (const auto* t = std::get_if<reservoir::Tabulated>(&model_)) {
            // piecewise linear: the maximum sits on a node
            const auto it = std::max_element(t->j_ph_ueV.begin(), t->j_ph_ueV.end());
            return t->omega_meV[static_cast<std::size_t>(std::distance(t->j_ph_ueV.begin(), it))];
        } else if (const auto* c = std::get_if<reservoir::LorentzianCavity>(&model_)) {
            return c->omega_c_meV;
        } else {
            throw std::invalid_argument("pf_maximum: flat reservoir has no maximum");
        }
        double best = lo, best_val = -1.0;
        for (double x = lo; x <= hi; x += step) {
            const double v = j_ph(x);
            if (v > best_val) { best_val = v; best = x; }
        }
        return best;
    }

    double band_center() const {
        if (const auto* w = std::get_if<reservoir::CoupledCavityWaveguide>(&model_))
            return 0.5 * (w->omega_l_meV + w->omega_u_meV);
        throw std::invalid_argument("band_center: only defined for a coupled-cavity waveguide");
    }

private:
    void validate() const {
        if (const auto* f = std::get_if<reservoir::Flat>(&model_)) {
            if (!(f->gamma_ueV >= 0.0)) throw std::invalid_argument("Flat reservoir: gamma must be >= 0");
        } else if (const auto* c = std::get_if<reservoir::LorentzianCavity>(&model_)) {
            if (!(c->kappa_ueV > 0.0)) throw std::invalid_argument("Lorentzian cavity: kappa must be > 0");
        } else if (const auto* w = std::get_if<reservoir::CoupledCavityWaveguide>(&model_)) {
            if (!(w->omega_l_meV < w->omega_u_meV))
                throw std::invalid_argument("Coupled-cavity waveguide: omega_l must be < omega_u");
            if (!(w->kappa_u_ueV > 0.0 && w->kappa_l_ueV > 0.0 && w->scale_ueV >= 0.0))
                throw std::invalid_argument("Coupled-cavity waveguide: damping must be > 0, scale >= 0");
        } else if (const auto* t = std::get_if<reservoir::Tabulated>(&model_)) {
            if (t->omega_meV.size() < 2) throw std::invalid_argument("Tabulated reservoir: need >= 2 points");
            if (t->j_ph_ueV.size() != t->omega_meV.size() || t->alpha_P.size() != t->omega_meV.size())
                throw std::invalid_argument("Tabulated reservoir: column length mismatch");
            for (std::size_t i = 1; i < t->omega_meV.size(); ++i)
                if (!(t->omega_meV[i] > t->omega_meV[i - 1]))
                    throw std::invalid_argument("Tabulated reservoir: omega must be strictly increasing");
            for (double j : t->j_ph_ueV)
                if (!(j >= 0.0)) throw std::invalid_argument("Tabulated reservoir: J_ph must be >= 0");
        }
    }

    static double j_of(const reservoir::Flat& f, double) { return f.gamma_ueV / (2.0 * std::numbers::pi); }

    static double j_of(const reservoir::LorentzianCavity& c, double omega) {
        const double d = 1e3 * (omega - c.omega_c_meV);
        const double hk = 0.5 * c.kappa_ueV;
        return c.g_ueV * c.g_ueV * c.kappa_ueV / (2.0 * std::numbers::pi * (d * d + hk * hk));
    }

    static double j_of(const reservoir::CoupledCavityWaveguide& w, double omega) {
        const std::complex<double> h = w.band_function(omega);
        const double j = w.scale_ueV * omega / std::numbers::pi * h.imag();
        if (j < -1e-12 * w.scale_ueV * std::abs(omega) * std::abs(h))
            throw NumericalError("coupled-cavity J_ph: square-root branch violation at omega = " +
                                 std::to_string(omega));
        return std::max(j, 0.0);
    }

    static double interp(const std::vector<double>& x, const std::vector<double>& y, double at) {
        const auto it = std::upper_bound(x.begin(), x.end(), at);
        const auto i = static_cast<std::size_t>(std::distance(x.begin(), it));
        if (i == 0) return y.front();
        if (i >= x.size()) return y.back();
        const double t = (at - x[i - 1]) / (x[i] - x[i - 1]);
        return (1.0 - t) * y[i - 1] + t * y[i];
    }

    static double j_of(const reservoir::Tabulated& t, double omega) {
        if (omega < t.omega_meV.front() || omega > t.omega_meV.back()) return 0.0;
        return interp(t.omega_meV, t.j_ph_ueV, omega);
    }

    static double alpha_of(const reservoir::Flat&, double) { return 1.0; }
    double alpha_of(const reservoir::LorentzianCavity& c, double omega) const {
        const double d = 1e3 * (omega - c.omega_c_meV);
        const double hk = 0.5 * c.kappa_ueV;
        return hk * hk / (d * d + hk * hk);
    }
    static double raw_ccw_propagator(const reservoir::CoupledCavityWaveguide& w, double omega) {
        return 0.25 * omega * omega * std::norm(w.band_function(omega));
    }
    double alpha_of(const reservoir::CoupledCavityWaveguide& w, double omega) const {
        return raw_ccw_propagator(w, omega) / alpha_norm_;
    }
    static double alpha_of(const reservoir::Tabulated& t, double omega) {
        return interp(t.omega_meV, t.alpha_P, omega);
    }

    Model model_;
    double alpha_norm_{1.0};
};

inline double j_ph(double omega_meV, const PhotonReservoir& res) { return res.j_ph(omega_meV); }

inline double purcell_factor(double omega_meV, const PhotonReservoir& res, double gamma_b_ueV) {
    if (!(gamma_b_ueV > 0.0)) throw std::invalid_argument("purcell_factor: gamma_b must be > 0");
    return 2.0 * std::numbers::pi * res.j_ph(omega_meV) / gamma_b_ueV;
}

inline double propagator(double omega_meV, const PhotonReservoir& res) { return res.propagator(omega_meV); }

/// J_ph sampled on a uniform grid over the integration window.
struct SampledReservoir {
    double lo{0.0};
    double hi{0.0};
    double step{0.0};
    std::vector<double> omega;
    std::vector<double> j;

    SampledReservoir(const PhotonReservoir& res, double center_meV, const FrequencyWindow& win) {
        std::tie(lo, hi) = res.support(center_meV, win);
        const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / win.step_meV)) + 1;
        step = (hi - lo) / static_cast<double>(n - 1);
        omega.resize(n);
        j.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            omega[i] = lo + static_cast<double>(i) * step;
            j[i] = res.j_ph(omega[i]);
        }
    }

    double weight(std::size_t i) const { return (i == 0 || i + 1 == omega.size()) ? 0.5 : 1.0; }
};

/// J^k_ph(tau) = int dw J_ph(w) exp(i (w_k - w) tau), ueV/ps, frequency integral
/// over the window around omega_k.
inline cplx relaxation_function(double tau_ps, double omega_k_meV, const PhotonReservoir& res,
                                const FrequencyWindow& win = {}) {
    if (tau_ps < 0.0) throw std::invalid_argument("relaxation_function: tau must be >= 0");
    const SampledReservoir s(res, omega_k_meV, win);
    cplx acc = 0.0;
    for (std::size_t i = 0; i < s.omega.size(); ++i)
        acc += s.weight(i) * s.j[i] * std::polar(1.0, units::rad_per_ps(omega_k_meV - s.omega[i]) * tau_ps);
    return acc * units::rad_per_ps(s.step);
}

/// Phonon-free part: pi J(w_k) + i PV int J(w) / (w_k - w) dw, in ueV.
inline cplx t_k_photon_only(double omega_k_meV, const PhotonReservoir& res, const SampledReservoir& s) {
    if (res.is_flat()) return res.j_ph(omega_k_meV) * std::numbers::pi;
    if (!(omega_k_meV > s.lo && omega_k_meV < s.hi))
        throw std::invalid_argument("t_k: dressed frequency outside the integration window");
    const double jk = res.j_ph(omega_k_meV);
    double pv = 0.0;
    const std::size_t n = s.omega.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double d = omega_k_meV - s.omega[i];
        double q;
        if (std::abs(d) < 1e-9 * s.step) {
            const std::size_t a = i == 0 ? 0 : i - 1;
            const std::size_t b = i + 1 < n ? i + 1 : n - 1;
            q = -(s.j[b] - s.j[a]) / (s.omega[b] - s.omega[a]);
        } else {
            q = (s.j[i] - jk) / d;
        }
        pv += s.weight(i) * q;
    }
    pv = pv * s.step + jk * std::log((omega_k_meV - s.lo) / (s.hi - omega_k_meV));
    return {std::numbers::pi * jk, pv};
}

/// T_k = int_0^inf C_pn(tau) J^k_ph(tau) dtau in ueV, evaluated in the frequency
/// domain as <B>^2 T_k(photon only) + int dw J(w) K_res(w_k - w).
inline cplx t_k(double omega_k_meV, const PhotonReservoir& res, const PhononModel& bath,
                const SampledReservoir& s) {
    if (res.is_flat()) return res.j_ph(omega_k_meV) * std::numbers::pi;
    const cplx t0 = t_k_photon_only(omega_k_meV, res, s);
    if (!bath.enabled()) return t0;
    cplx resid = 0.0;
    for (std::size_t i = 0; i < s.omega.size(); ++i)
        resid += s.weight(i) * s.j[i] * bath.residual_kernel(units::rad_per_ps(omega_k_meV - s.omega[i]));
    resid *= units::rad_per_ps(s.step);
    const double B2 = bath.B_avg() * bath.B_avg();
    return B2 * t0 + resid;
}

inline cplx t_k(double omega_k_meV, const PhotonReservoir& res, const PhononModel& bath,
                const FrequencyWindow& win = {}) {
    if (res.is_flat()) return res.j_ph(omega_k_meV) * std::numbers::pi;
    const SampledReservoir s(res, omega_k_meV, win);
    return t_k(omega_k_meV, res, bath, s);
}

/// Drive-dependent photon scattering rates (ueV).
struct PhotonRates {
    double Gamma_p{0.0};
    cplx N_p{0.0};
    cplx M_p{0.0};
    cplx K_p{0.0};
    cplx T_D{0.0};
    cplx T_U{0.0};
    cplx T_L{0.0};
};

/// Combine the three T_k into Gamma', N', M', K'. Delta_Lx = omega_L - omega_x.
inline PhotonRates combine_photon_rates(const DressedState& ds, double Delta_Lx_meV, cplx TD, cplx TU, cplx TL) {
    PhotonRates r;
    r.T_D = TD;
    r.T_U = TU;
    r.T_L = TL;
    const double eta = ds.eta_meV;
    if (eta == 0.0) {
        r.Gamma_p = 2.0 * TD.real();
        r.N_p = cplx(0.0, TD.imag());
        return r;
    }
    const double om = ds.Omega_R_meV;
    const double c_rabi = om * om / (2.0 * eta * eta);
    const double d = Delta_Lx_meV / eta;
    if (!std::isfinite(c_rabi) || !std::isfinite(d))
        throw NumericalError("photon_rates: degenerate eta, coefficients are not finite");

    const cplx S = c_rabi * TD + 0.5 * (1.0 - c_rabi - d) * TU + 0.5 * (1.0 - c_rabi + d) * TL;
    r.Gamma_p = 2.0 * S.real();
    r.N_p = cplx(0.0, S.imag());
    r.M_p = om / (2.0 * eta) * (d * TD + 0.5 * (1.0 - d) * TU - 0.5 * (1.0 + d) * TL);
    r.K_p = c_rabi * (TD - 0.5 * (TU + TL));
    return r;
}

inline PhotonRates photon_rates(const DressedState& ds, double Delta_Lx_meV, const PhotonReservoir& res,
                                const PhononModel& bath, const FrequencyWindow& win = {}) {
    if (res.is_flat()) {
        const cplx t = res.j_ph(ds.omega_D_meV) * std::numbers::pi;
        return combine_photon_rates(ds, Delta_Lx_meV, t, t, t);
    }
    const SampledReservoir s(res, ds.omega_D_meV, win);
    const cplx TD = t_k(ds.omega_D_meV, res, bath, s);
    const cplx TU = t_k(ds.omega_U_meV, res, bath, s);
    const cplx TL = t_k(ds.omega_Lw_meV, res, bath, s);
    return combine_photon_rates(ds, Delta_Lx_meV, TD, TU, TL);
}

} // namespace qdrf
