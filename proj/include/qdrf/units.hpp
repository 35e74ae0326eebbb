// units.hpp — unit system shared by every module
//
// Energies are carried in meV, rates in ueV, times in ps. An energy E maps to
// an angular frequency E / hbar in rad/ps.

#pragma once

namespace qdrf {

struct PhysicalConstants {
    double hbar{0.658212};   // meV ps
    double kB{0.086173};     // meV / K
};

inline constexpr PhysicalConstants kConstants{};

namespace units {

inline constexpr double hbar = kConstants.hbar;
inline constexpr double kB = kConstants.kB;

/// meV -> rad/ps
constexpr double rad_per_ps(double energy_meV) { return energy_meV / hbar; }
/// rad/ps -> meV
constexpr double meV(double omega_rad_per_ps) { return omega_rad_per_ps * hbar; }
/// ueV (as a rate) -> 1/ps
constexpr double per_ps_from_ueV(double rate_ueV) { return 1e-3 * rate_ueV / hbar; }
/// 1/ps -> ueV
constexpr double ueV_from_per_ps(double rate_per_ps) { return 1e3 * rate_per_ps * hbar; }

} // namespace units
} // namespace qdrf
