// Laser and dot at either mode edge of a coupled-cavity waveguide, drive
// 0.4 meV. The photon bath alone favours the sideband in the low-LDOS region;
// phonons at 4 K favour the lower sideband.

#include <cstdio>

#include "qdrf/qdrf.hpp"

int main() {
    using namespace qdrf;
    const PhotonReservoir wg(reservoir::CoupledCavityWaveguide::calibrated(800.0, 4.0, 52000.0, 2.0, 1.5));
    const PhononModel on(PhononBath{});
    const PhononModel off(PhononBath::disabled());

    for (auto side : {EdgeSide::Lower, EdgeSide::Upper}) {
        const double wL = wg.pf_maximum(side);
        const auto sys = SystemParams::with_laser(wL, 0.0, 0.4);
        const auto grid = make_grid(wL, 1.2, 2401);
        std::printf("%s edge at %.4f meV\n", side == EdgeSide::Lower ? "lower" : "upper", wL);
        for (const PhononModel* b : {&off, &on}) {
            const auto r = solve_point(sys, *b, wg, grid);
            std::printf("  %-11s Re M' = %+.4f ueV  Re Gamma_u = %+.4f ueV  lower/upper = %.3f\n",
                        b->enabled() ? "phonons" : "no phonons", r.photon.M_p.real(), r.phonon.gamma_u.real(),
                        sideband_asymmetry(r.spectrum));
        }
    }
}
