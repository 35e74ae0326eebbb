// Resonantly driven dot with a flat photon reservoir, with and without
// phonons. Prints the peak list of the polarization spectrum.

#include <cstdio>

#include "qdrf/qdrf.hpp"

int main() {
    using namespace qdrf;
    const PhotonReservoir flat(reservoir::Flat{15.0});
    const auto sys = SystemParams::with_laser(800.0, 0.0, 1.0);
    const auto grid = make_grid(800.0, 2.5, 2001);

    for (bool phonons : {false, true}) {
        const PhononModel bath(phonons ? PhononBath{} : PhononBath::disabled());
        const auto r = solve_point(sys, bath, flat, grid);
        std::printf("%s  <B> = %.4f  Omega_R = %.4f meV\n", phonons ? "phonons on " : "phonons off",
                    bath.enabled() ? bath.B_avg() : 1.0, r.dressed.Omega_R_meV);
        for (const auto& p : r.spectrum.peaks)
            std::printf("    %+8.4f meV  height %.4g%s\n", p.omega_meV - 800.0, p.height,
                        p.is_sideband ? "  (sideband)" : "");
        std::printf("    lower/upper sideband ratio %.3f\n", sideband_asymmetry(r.spectrum));
    }
}
