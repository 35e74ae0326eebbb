// phonon.hpp — acoustic-phonon bath in the independent-boson picture
//
// Spectral function J_pn(w) = alpha_p w^3 exp(-w^2 / 2 w_b^2) with w in rad/ps,
// IBM phase phi(t), displacement average <B> = exp(-phi(0)/2), correlation
// C_pn(t) = exp(phi(t) - phi(0)) and the four drive-dependent phonon
// scattering rates entering the polaron master equation.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "qdrf/errors.hpp"
#include "qdrf/fourier.hpp"
#include "qdrf/quadrature.hpp"
#include "qdrf/system.hpp"
#include "qdrf/units.hpp"

namespace qdrf {

using cplx = std::complex<double>;

struct PhononBath {
    double alpha_p_ps2{0.06};
    double omega_b_meV{1.0};
    double T_K{4.0};
    bool enabled{true};

    static PhononBath disabled() {
        PhononBath b;
        b.enabled = false;
        return b;
    }

    void validate() const {
        if (!(alpha_p_ps2 >= 0.0)) throw std::invalid_argument("PhononBath: alpha_p must be >= 0");
        if (!(omega_b_meV > 0.0)) throw std::invalid_argument("PhononBath: omega_b must be > 0");
        if (!(T_K >= 0.0)) throw std::invalid_argument("PhononBath: T must be >= 0");
    }
};

/// Quadrature settings. Defaults resolve the phase to ~1e-12 and the rate
/// integrals to ~1e-4 relative for the bath parameters of interest.
struct PhononNumerics {
    double omega_cutoff_factor{8.0};   // integrate w in [0, factor * w_b]
    std::size_t min_panels{16};
    double phase_tol{1e-11};
    double table_dtau_ps{0.01};
    double table_tau_max_ps{40.0};
    double rate_dtau_ps{0.02};
    double rate_tau_max_ps{20.0};
    double regularization_meV{1e-4};   // convergence factor exp(-eps t) on rate integrals
    double series_eta_meV{1e-4};       // below this, sin(eta t)/eta -> t
    double rate_convergence_tol{1e-2}; // step-halving check on rate integrals
    int kernel_fft_log2{19};
};

/// Drive-dependent phonon scattering rates, in ueV.
struct PhononRates {
    cplx gamma_sig_plus{0.0};
    cplx gamma_sig_minus{0.0};
    cplx gamma_cd{0.0};
    cplx gamma_u{0.0};
};

/// J_pn at an energy given in meV; returns 1/ps.
inline double spectral_function(double omega_meV, const PhononBath& bath) {
    if (omega_meV < 0.0) throw std::invalid_argument("spectral_function: omega must be >= 0");
    if (!bath.enabled) return 0.0;
    const double w = units::rad_per_ps(omega_meV);
    const double wb = units::rad_per_ps(bath.omega_b_meV);
    return bath.alpha_p_ps2 * w * w * w * std::exp(-w * w / (2.0 * wb * wb));
}

namespace detail {

// Weights of the phase integrand, J/w^2 * coth(hbar w / 2 kB T) and J/w^2,
// folded into a quadrature rule.
struct PhaseRule {
    std::vector<double> omega;
    std::vector<double> w_re;
    std::vector<double> w_im;
};

inline PhaseRule phase_rule(const PhononBath& bath, double omega_max, std::size_t panels) {
    const quad::Rule r = quad::composite_gauss_legendre(0.0, omega_max, panels);
    const double wb = units::rad_per_ps(bath.omega_b_meV);
    PhaseRule out;
    out.omega = r.nodes;
    out.w_re.resize(r.nodes.size());
    out.w_im.resize(r.nodes.size());
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
        const double w = r.nodes[i];
        const double base = bath.alpha_p_ps2 * w * std::exp(-w * w / (2.0 * wb * wb));
        double thermal = 1.0;
        if (bath.T_K > 0.0) thermal = 1.0 / std::tanh(units::hbar * w / (2.0 * units::kB * bath.T_K));
        out.w_re[i] = r.weights[i] * base * thermal;
        out.w_im[i] = r.weights[i] * base;
    }
    return out;
}

inline cplx evaluate_phase(const PhaseRule& rule, double tau) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < rule.omega.size(); ++i) {
        const double x = rule.omega[i] * tau;
        re += rule.w_re[i] * std::cos(x);
        im -= rule.w_im[i] * std::sin(x);
    }
    return {re, im};
}

inline std::size_t panels_for(double omega_max, double tau, std::size_t min_panels) {
    // at most ~2 rad of oscillation per 10-point panel
    const auto p = static_cast<std::size_t>(std::ceil(omega_max * tau / 2.0));
    return std::max(min_panels, p);
}

} // namespace detail

/// IBM phase phi(tau), computed by adaptive composite Gauss-Legendre.
inline cplx ibm_phase(double tau_ps, const PhononBath& bath, const PhononNumerics& num = {}) {
    if (tau_ps < 0.0) throw std::invalid_argument("ibm_phase: tau must be >= 0");
    if (!bath.enabled || bath.alpha_p_ps2 == 0.0) return 0.0;
    const double omega_max = num.omega_cutoff_factor * units::rad_per_ps(bath.omega_b_meV);
    std::size_t panels = detail::panels_for(omega_max, tau_ps, num.min_panels);
    cplx coarse = detail::evaluate_phase(detail::phase_rule(bath, omega_max, panels), tau_ps);
    for (int iter = 0; iter < 12; ++iter) {
        panels *= 2;
        const cplx fine = detail::evaluate_phase(detail::phase_rule(bath, omega_max, panels), tau_ps);
        if (std::abs(fine - coarse) <= num.phase_tol * std::max(1.0, std::abs(fine))) return fine;
        coarse = fine;
    }
    throw NumericalError("ibm_phase: quadrature did not converge at tau = " + std::to_string(tau_ps) + " ps");
}

inline double displacement_average(const PhononBath& bath, const PhononNumerics& num = {}) {
    return std::exp(-0.5 * ibm_phase(0.0, bath, num).real());
}

inline cplx phonon_correlation(double tau_ps, const PhononBath& bath, const PhononNumerics& num = {}) {
    if (!bath.enabled) return 1.0;
    return std::exp(ibm_phase(tau_ps, bath, num) - ibm_phase(0.0, bath, num));
}

/// Phonon bath with cached phase and correlation tables on a uniform tau grid,
/// plus the transform of the decaying part of C_pn used by the photon rates.
/// Read-only after construction.
class PhononModel {
public:
    explicit PhononModel(PhononBath bath, PhononNumerics num = {}) : bath_(bath), num_(num) {
        bath_.validate();
        if (!bath_.enabled) return;
        build_tables();
    }

    const PhononBath& bath() const { return bath_; }
    const PhononNumerics& numerics() const { return num_; }
    bool enabled() const { return bath_.enabled; }

    double B_avg() const { return B_avg_; }
    double dtau_ps() const { return num_.table_dtau_ps; }

    /// Tables on t_n = n * dtau; empty when the bath is disabled.
    const std::vector<cplx>& phase_table() const { return phase_; }
    const std::vector<cplx>& correlation_table() const { return corr_; }

    cplx ibm_phase(double tau_ps) const { return qdrf::ibm_phase(tau_ps, bath_, num_); }
    cplx correlation(double tau_ps) const {
        if (!enabled()) return 1.0;
        return std::exp(ibm_phase(tau_ps) - phase0_);
    }

    /// K(nu) = int_0^inf (C_pn(t) - <B>^2) exp(i nu t) dt, nu in rad/ps, result in ps.
    cplx residual_kernel(double nu_rad_per_ps) const {
        if (!enabled()) return 0.0;
        return kernel_.at(nu_rad_per_ps);
    }

private:
    void build_tables() {
        const double omega_max = num_.omega_cutoff_factor * units::rad_per_ps(bath_.omega_b_meV);
        const auto n = static_cast<std::size_t>(std::llround(num_.table_tau_max_ps / num_.table_dtau_ps)) + 1;
        const double tau_max = static_cast<double>(n - 1) * num_.table_dtau_ps;
        const std::size_t panels = detail::panels_for(omega_max, tau_max, num_.min_panels);
        const detail::PhaseRule rule = detail::phase_rule(bath_, omega_max, panels);

        phase_.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            phase_[i] = detail::evaluate_phase(rule, static_cast<double>(i) * num_.table_dtau_ps);

        const cplx check = detail::evaluate_phase(detail::phase_rule(bath_, omega_max, 2 * panels), tau_max);
        if (std::abs(check - phase_.back()) > 1e3 * num_.phase_tol)
            throw NumericalError("PhononModel: phase table not converged at tau_max");

        phase0_ = phase_.front();
        B_avg_ = std::exp(-0.5 * phase0_.real());
        corr_.resize(n);
        std::vector<cplx> residual(n);
        const double B2 = B_avg_ * B_avg_;
        for (std::size_t i = 0; i < n; ++i) {
            corr_[i] = std::exp(phase_[i] - phase0_);
            residual[i] = corr_[i] - B2;
        }
        const std::size_t n_fft = std::size_t{1} << num_.kernel_fft_log2;
        kernel_ = fourier::half_line_fft(residual, num_.table_dtau_ps, n_fft);
    }

    PhononBath bath_;
    PhononNumerics num_;
    double B_avg_{1.0};
    cplx phase0_{0.0};
    std::vector<cplx> phase_;
    std::vector<cplx> corr_;
    fourier::FftResult kernel_;
};

namespace detail {

struct RateIntegrals {
    double sym{0.0};     // Re[(cosh phi - 1) f + sinh phi cos(eta t)]
    double asym{0.0};    // Im[e^phi - 1] Delta sin(eta t) / eta
    double cd{0.0};      // Re[sinh phi cos(eta t) - (cosh phi - 1) f]
    cplx u{0.0};         // sinh phi sin(eta t) / eta
};

inline RateIntegrals rate_integrals(const PhononModel& model, double Omega_R, double eta, double Delta,
                                    std::size_t stride, std::size_t count, bool series) {
    const auto& phi = model.phase_table();
    const double h = model.dtau_ps() * static_cast<double>(stride);
    const double eps = units::rad_per_ps(model.numerics().regularization_meV);
    RateIntegrals acc;
    for (std::size_t j = 0; j < count; ++j) {
        const double tau = static_cast<double>(j) * h;
        const cplx p = phi[j * stride];
        const double c = std::cos(eta * tau);
        const double sin_over_eta = series ? tau : std::sin(eta * tau) / eta;
        const double f = (Delta * Delta * c + Omega_R * Omega_R) / (eta * eta);
        const cplx sh = std::sinh(p);
        const cplx chm1 = std::cosh(p) - 1.0;
        const double w = (j == 0 || j + 1 == count ? 0.5 : 1.0) * std::exp(-eps * tau);
        acc.sym += w * (chm1 * f + sh * c).real();
        acc.asym += w * (std::exp(p) - 1.0).imag() * Delta * sin_over_eta;
        acc.cd += w * (sh * c - chm1 * f).real();
        acc.u += w * sh * sin_over_eta;
    }
    acc.sym *= h;
    acc.asym *= h;
    acc.cd *= h;
    acc.u *= h;
    return acc;
}

inline void check_converged(const char* name, double fine, double coarse, double tol) {
    if (std::abs(fine - coarse) > tol * std::abs(fine) + 1e-9)
        throw NumericalError(std::string("phonon_rates: ") + name +
                             " integral not converged (step-halving difference " +
                             std::to_string(std::abs(fine - coarse)) + ")");
}

} // namespace detail

/// The four analytic phonon scattering rates at the dressed-state parameters.
/// Delta_Lx = omega_L - omega_x in meV.
inline PhononRates phonon_rates(const DressedState& ds, double Delta_Lx_meV, const PhononModel& model) {
    PhononRates r;
    if (!model.enabled() || ds.Omega_R_meV == 0.0) return r;

    const auto& num = model.numerics();
    const auto stride = static_cast<std::size_t>(std::llround(num.rate_dtau_ps / model.dtau_ps()));
    const auto count = static_cast<std::size_t>(std::llround(num.rate_tau_max_ps / num.rate_dtau_ps)) + 1;
    if (stride == 0 || (count - 1) * stride >= model.phase_table().size())
        throw std::invalid_argument("phonon_rates: rate grid exceeds the phase table");

    const double Om = units::rad_per_ps(ds.Omega_R_meV);
    const double Delta = units::rad_per_ps(Delta_Lx_meV);
    const double eta = units::rad_per_ps(ds.eta_meV);
    const bool series = ds.eta_meV < num.series_eta_meV;

    const auto I = detail::rate_integrals(model, Om, eta, Delta, stride, count, series);
    if ((count - 1) % 2 == 0) {
        const auto Ic = detail::rate_integrals(model, Om, eta, Delta, 2 * stride, (count - 1) / 2 + 1, series);
        const double tol = num.rate_convergence_tol;
        detail::check_converged("gamma_sigma (symmetric part)", I.sym, Ic.sym, tol);
        detail::check_converged("gamma_sigma (asymmetric part)", I.asym, Ic.asym, tol);
        detail::check_converged("gamma_cd", I.cd, Ic.cd, tol);
        detail::check_converged("gamma_u (real)", I.u.real(), Ic.u.real(), tol);
        detail::check_converged("gamma_u (imag)", I.u.imag(), Ic.u.imag(), tol);
    }

    const double pref = 0.5 * Om * Om;
    r.gamma_sig_plus = units::ueV_from_per_ps(pref * (I.sym - I.asym));
    r.gamma_sig_minus = units::ueV_from_per_ps(pref * (I.sym + I.asym));
    r.gamma_cd = units::ueV_from_per_ps(pref * I.cd);
    r.gamma_u = units::ueV_from_per_ps(1.0) * cplx(0.0, 0.5) * Om * Om * Om * I.u;
    return r;
}

} // namespace qdrf
