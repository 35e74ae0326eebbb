// system.hpp — driven two-level quantum dot: parameters and dressed states

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qdrf {

/// Quantum-dot and drive parameters, all in the laser frame.
///
/// The exciton-laser detuning is derived from the two absolute frequencies so
/// that it always equals omega_x - omega_L. Any polaron shift is considered
/// to be already absorbed into omega_x.
struct SystemParams {
    double omega_x_meV{800.0};   // exciton (absolute)
    double omega_L_meV{800.0};   // drive laser (absolute)
    double Omega_meV{1.0};       // bare Rabi drive
    double dipole_debye{50.0};
    double gamma_b_ueV{1.5};     // background spontaneous emission
    double gamma_d_ueV{7.8};     // pure dephasing

    double Delta_xL_meV() const { return omega_x_meV - omega_L_meV; }
    double Delta_Lx_meV() const { return omega_L_meV - omega_x_meV; }

    /// Parameters with the laser held fixed and the dot tuned to omega_L - Delta_Lx.
    static SystemParams with_laser(double omega_L_meV, double Delta_Lx_meV, double Omega_meV) {
        SystemParams p;
        p.omega_L_meV = omega_L_meV;
        p.omega_x_meV = omega_L_meV - Delta_Lx_meV;
        p.Omega_meV = Omega_meV;
        return p;
    }

    void validate() const {
        if (!(Omega_meV >= 0.0))
            throw std::invalid_argument("SystemParams: Omega must be >= 0");
        if (!(gamma_b_ueV > 0.0))
            throw std::invalid_argument("SystemParams: gamma_b must be > 0 for a unique steady state");
        if (!(gamma_d_ueV >= 0.0))
            throw std::invalid_argument("SystemParams: gamma_d must be >= 0");
        if (!std::isfinite(omega_x_meV) || !std::isfinite(omega_L_meV))
            throw std::invalid_argument("SystemParams: frequencies must be finite");
    }
};

/// Polaron-dressed drive and the three dressed-state frequencies.
struct DressedState {
    double Omega_R_meV{0.0};
    double eta_meV{0.0};       // sqrt(Omega_R^2 + Delta^2)
    double omega_D_meV{0.0};   // omega_L
    double omega_U_meV{0.0};   // omega_L + Omega_R
    double omega_Lw_meV{0.0};  // omega_L - Omega_R
};

inline DressedState dressed_states(const SystemParams& params, double B_avg) {
    if (!(B_avg > 0.0 && B_avg <= 1.0))
        throw std::invalid_argument("dressed_states: <B> must lie in (0, 1], got " +
                                    std::to_string(B_avg));
    DressedState ds;
    ds.Omega_R_meV = B_avg * params.Omega_meV;
    ds.eta_meV = std::hypot(ds.Omega_R_meV, params.Delta_xL_meV());
    ds.omega_D_meV = params.omega_L_meV;
    ds.omega_U_meV = params.omega_L_meV + ds.Omega_R_meV;
    ds.omega_Lw_meV = params.omega_L_meV - ds.Omega_R_meV;
    return ds;
}

/// H'_S = (Omega_R/2)(s+ + s-) + Delta_xL s+s- in meV, basis {|g>, |e>}.
inline Eigen::Matrix2cd coherent_hamiltonian(const DressedState& ds, const SystemParams& params) {
    const double half = 0.5 * ds.Omega_R_meV;
    Eigen::Matrix2cd H;
    H << 0.0, half,
         half, params.Delta_xL_meV();
    return H;
}

} // namespace qdrf
