// Test-side reference solutions, written without the library's
// superoperator machinery.

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;

inline constexpr double hbar = 0.658212;  // meV ps

/// Resonantly driven two-level atom: H = (W/2)(s+ + s-), population decay g1,
/// pure dephasing L[s+s-] at gd. Rates and W in 1/ps (W in rad/ps).
///
/// With p = i(<s+> - <s->) and w = <s_z>:
///   dp/dt = W w - g2 p,  dw/dt = -W p - g1 (1 + w),  g2 = g1/2 + gd/2
/// and <s+ + s-> decays at g2 on its own.
struct Bloch {
    double W, g1, gd;

    double g2() const { return 0.5 * g1 + 0.5 * gd; }
    double w_ss() const { return -g1 * g2() / (g1 * g2() + W * W); }
    double p_ss() const { return -W * g1 / (g1 * g2() + W * W); }
    double n_ss() const { return 0.5 * (1.0 + w_ss()); }
    cplx sm_ss() const { return cplx(0.0, 0.5 * p_ss()); }  // <s->

    // 2x2 generator of (P, W) correlations
    struct M2 {
        cplx a, b, c, d;
    };
    M2 m() const { return {-g2(), W, -W, -g1}; }

    // e^{M t} z by Cayley-Hamilton
    void expm_apply(double t, cplx z0, cplx z1, cplx& o0, cplx& o1) const {
        const auto M = m();
        const cplx mu = 0.5 * (M.a + M.d);
        const cplx h = 0.5 * (M.a - M.d);
        const cplx s = std::sqrt(h * h + M.b * M.c);
        const cplx e = std::exp(mu * t);
        cplx ch = std::cosh(s * t), sh_s;
        if (std::abs(s * t) < 1e-8) sh_s = t;
        else sh_s = std::sinh(s * t) / s;
        // N = M - mu I
        const cplx n00 = M.a - mu, n01 = M.b, n10 = M.c, n11 = M.d - mu;
        o0 = e * (ch * z0 + sh_s * (n00 * z0 + n01 * z1));
        o1 = e * (ch * z1 + sh_s * (n10 * z0 + n11 * z1));
    }

    // particular (constant) solution of z' = M z + (0, -g1 <s->)
    void particular(cplx& p0, cplx& p1) const {
        const auto M = m();
        const cplx c1 = -g1 * sm_ss();
        const cplx det = M.a * M.d - M.b * M.c;
        // z_p = -M^{-1} (0, c1)
        p0 = -(-M.b * c1) / det;
        p1 = -(M.a * c1) / det;
    }

    /// g(tau) = <s+(tau) s-(0)>
    cplx g(double tau) const {
        const double n = n_ss();
        cplx zp0, zp1;
        particular(zp0, zp1);
        const cplx P0 = cplx(0.0, n), W0 = -sm_ss();
        cplx o0, o1;
        expm_apply(tau, P0 - zp0, W0 - zp1, o0, o1);
        const cplx GP = o0 + zp0;
        return 0.5 * n * std::exp(-g2() * tau) - cplx(0.0, 0.5) * GP;
    }

    cplx g_inf() const {
        cplx zp0, zp1;
        particular(zp0, zp1);
        return -cplx(0.0, 0.5) * zp0;
    }

    /// Re int_0^inf (g - g_inf) e^{i nu tau}, nu in rad/ps
    double spectrum(double nu) const {
        const double n = n_ss();
        cplx zp0, zp1;
        particular(zp0, zp1);
        const cplx q0 = cplx(0.0, n) - zp0, q1 = -sm_ss() - zp1;
        const auto M = m();
        // -(M + i nu)^{-1} q
        const cplx a = M.a + cplx(0.0, nu), b = M.b, c = M.c, d = M.d + cplx(0.0, nu);
        const cplx det = a * d - b * c;
        const cplx x0 = -(d * q0 - b * q1) / det;
        const cplx first = 0.5 * n / (g2() - cplx(0.0, nu));
        return (first - cplx(0.0, 0.5) * x0).real();
    }
};

/// Bloch problem from lab units: drive in meV, rates in ueV.
inline Bloch bloch_from(double Omega_meV, double gamma_ueV, double gamma_d_ueV) {
    return {Omega_meV / hbar, 1e-3 * gamma_ueV / hbar, 1e-3 * gamma_d_ueV / hbar};
}

/// IBM phase by brute-force midpoint rule, independent of the library quadrature.
inline cplx ibm_phase(double tau_ps, double alpha_ps2, double omega_b_meV, double T_K, int n = 200000) {
    const double wb = omega_b_meV / hbar;
    const double wmax = 10.0 * wb;
    const double dw = wmax / n;
    const double kB = 0.086173;
    cplx acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double w = (i + 0.5) * dw;
        const double J = alpha_ps2 * w * w * w * std::exp(-w * w / (2.0 * wb * wb));
        const double coth = T_K > 0.0 ? 1.0 / std::tanh(hbar * w / (2.0 * kB * T_K)) : 1.0;
        acc += J / (w * w) * cplx(coth * std::cos(w * tau_ps), -std::sin(w * tau_ps));
    }
    return acc * dw;
}

} // namespace oracle
