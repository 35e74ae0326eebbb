// liouvillian.hpp — polaron master equation on the vectorized 2x2 space
//
// Column-stacking convention: vec(A rho B) = (B^T kron A) vec(rho), with
// vec(rho) = (rho_gg, rho_eg, rho_ge, rho_ee). Generators are in 1/ps.

#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "qdrf/errors.hpp"
#include "qdrf/phonon.hpp"
#include "qdrf/photon.hpp"
#include "qdrf/system.hpp"
#include "qdrf/units.hpp"

namespace qdrf {

using Op = Eigen::Matrix2cd;
using Superop = Eigen::Matrix4cd;
using VecOp = Eigen::Vector4cd;
using DensityMatrix = Eigen::Matrix2cd;

namespace ops {

inline Op identity() { return Op::Identity(); }
inline Op sigma_minus() {
    Op m = Op::Zero();
    m(0, 1) = 1.0;  // |g><e|
    return m;
}
inline Op sigma_plus() { return sigma_minus().adjoint(); }
inline Op number() { return sigma_plus() * sigma_minus(); }
inline Op sigma_z() { return sigma_plus() * sigma_minus() - sigma_minus() * sigma_plus(); }

inline DensityMatrix ground() {
    DensityMatrix r = DensityMatrix::Zero();
    r(0, 0) = 1.0;
    return r;
}
inline DensityMatrix excited() {
    DensityMatrix r = DensityMatrix::Zero();
    r(1, 1) = 1.0;
    return r;
}

} // namespace ops

namespace super {

inline Superop kron(const Op& a, const Op& b) {
    Superop k;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) k.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return k;
}

/// rho -> A rho B
inline Superop sandwich(const Op& A, const Op& B) { return kron(B.transpose(), A); }
inline Superop left(const Op& A) { return sandwich(A, Op::Identity()); }
inline Superop right(const Op& B) { return sandwich(Op::Identity(), B); }

inline Superop commutator(const Op& H) { return left(H) - right(H); }

/// L[O] rho = O rho O^+ - (O^+O rho + rho O^+O)/2
inline Superop dissipator(const Op& O) {
    const Op OdO = O.adjoint() * O;
    return sandwich(O, O.adjoint()) - 0.5 * left(OdO) - 0.5 * right(OdO);
}

inline VecOp vec(const Op& m) {
    VecOp v;
    v << m(0, 0), m(1, 0), m(0, 1), m(1, 1);
    return v;
}
inline Op unvec(const VecOp& v) {
    Op m;
    m << v(0), v(2), v(1), v(3);
    return m;
}

/// vec(I)^T: its product with a vec(rho) is Tr rho.
inline Eigen::RowVector4cd trace_row() {
    Eigen::RowVector4cd r;
    r << 1.0, 0.0, 0.0, 1.0;
    return r;
}

} // namespace super

struct LiouvillianParts {
    Superop coherent{Superop::Zero()};
    Superop photon{Superop::Zero()};
    Superop phonon{Superop::Zero()};
    Superop background{Superop::Zero()};
    Superop dephasing{Superop::Zero()};
};

class Liouvillian {
public:
    Liouvillian() = default;
    explicit Liouvillian(LiouvillianParts parts)
        : parts_(std::move(parts)),
          generator_(parts_.coherent + parts_.photon + parts_.phonon + parts_.background + parts_.dephasing) {}

    const Superop& generator() const { return generator_; }
    const LiouvillianParts& parts() const { return parts_; }

    Superop propagator(double t_ps) const { return (generator_ * t_ps).exp(); }

private:
    LiouvillianParts parts_;
    Superop generator_{Superop::Zero()};
};

/// Photon part in the Markov limit; rates in ueV.
inline Superop photon_superop(const PhotonRates& ph) {
    using namespace super;
    const Op sm = ops::sigma_minus(), sp = ops::sigma_plus(), sz = ops::sigma_z(), n = ops::number();
    const double Gamma = units::per_ps_from_ueV(ph.Gamma_p);
    const cplx N = units::per_ps_from_ueV(1.0) * ph.N_p;
    const cplx M = units::per_ps_from_ueV(1.0) * ph.M_p;
    const cplx K = units::per_ps_from_ueV(1.0) * ph.K_p;

    Superop s = Gamma * dissipator(sm);
    // M [s+, s_z rho] + h.c.
    s += M * (left(sp * sz) - sandwich(sz, sp));
    s += std::conj(M) * (right(sz * sm) - sandwich(sm, sz));
    s -= N * commutator(n);
    s += K * sandwich(sp, sp) + std::conj(K) * sandwich(sm, sm);
    return s;
}

/// Drive-induced phonon scattering; rates in ueV.
inline Superop phonon_superop(const PhononRates& pn) {
    using namespace super;
    const Op sm = ops::sigma_minus(), sp = ops::sigma_plus(), n = ops::number();
    const double gp = units::per_ps_from_ueV(pn.gamma_sig_plus.real());
    const double gm = units::per_ps_from_ueV(pn.gamma_sig_minus.real());
    const cplx gcd = units::per_ps_from_ueV(1.0) * pn.gamma_cd;
    const cplx gu = units::per_ps_from_ueV(1.0) * pn.gamma_u;

    Superop s = gp * dissipator(sp) + gm * dissipator(sm);
    s -= gcd * sandwich(sp, sp) + std::conj(gcd) * sandwich(sm, sm);
    // Gamma_u (n rho (s+ - s-) + s- rho) + h.c.
    const Superop term = sandwich(n, sp - sm) + left(sm);
    const Superop term_hc = sandwich(sm - sp, n) + right(sp);
    s -= gu * term + std::conj(gu) * term_hc;
    return s;
}

inline Liouvillian build_liouvillian(const SystemParams& params, const DressedState& ds,
                                     const PhononRates& pn, const PhotonRates& ph) {
    params.validate();
    const double tol = 1e-9;
    if (ph.Gamma_p < -tol || pn.gamma_sig_plus.real() < -tol || pn.gamma_sig_minus.real() < -tol)
        throw std::invalid_argument("build_liouvillian: negative decay rates are unphysical");
    if (params.gamma_b_ueV + ph.Gamma_p + pn.gamma_sig_minus.real() < 0.0)
        throw std::invalid_argument("build_liouvillian: net population decay would be negative");

    LiouvillianParts parts;
    const Op H = coherent_hamiltonian(ds, params) / units::hbar;  // rad/ps
    parts.coherent = cplx(0.0, -1.0) * super::commutator(H);
    parts.photon = photon_superop(ph);
    parts.phonon = phonon_superop(pn);
    parts.background = units::per_ps_from_ueV(params.gamma_b_ueV) * super::dissipator(ops::sigma_minus());
    parts.dephasing = units::per_ps_from_ueV(params.gamma_d_ueV) * super::dissipator(ops::number());
    return Liouvillian(std::move(parts));
}

inline double min_eigenvalue(const DensityMatrix& rho) {
    const Op h = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Op> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

/// Steady state from the generator with the trace row replaced by Tr rho = 1.
inline DensityMatrix steady_state(const Liouvillian& L) {
    const Superop& G = L.generator();
    Eigen::FullPivLU<Superop> lu(G);
    lu.setThreshold(1e-10);
    if (lu.rank() < 3)
        throw NumericalError("steady_state: degenerate null space (dimension " + std::to_string(4 - lu.rank()) + ")");

    Superop A = G;
    A.row(0) = super::trace_row();
    VecOp rhs = VecOp::Zero();
    rhs(0) = 1.0;
    const VecOp x = A.fullPivLu().solve(rhs);
    DensityMatrix rho = super::unvec(x);
    rho = 0.5 * (rho + rho.adjoint());
    rho /= rho.trace();
    const double lam = min_eigenvalue(rho);
    if (lam < -1e-8)
        throw NumericalError("steady_state: non-positive steady state (min eigenvalue " + std::to_string(lam) + ")");
    return rho;
}

inline DensityMatrix evolve(const Liouvillian& L, const DensityMatrix& rho0, double t_ps) {
    if (t_ps < 0.0) throw std::invalid_argument("evolve: t must be >= 0");
    if (t_ps == 0.0) return rho0;
    return super::unvec(L.propagator(t_ps) * super::vec(rho0));
}

/// g(tau) = <s+(t+tau) s-(t)> in the steady state via quantum regression:
/// g(tau) = Tr[s+ exp(L tau)(s- rho_ss)]. Uniform grids starting at zero are
/// propagated by repeated application of exp(L dtau); other grids use one
/// exponential per point.
inline std::vector<cplx> two_time_correlation(const Liouvillian& L, const DensityMatrix& rho_ss,
                                              std::span<const double> tau_grid) {
    std::vector<cplx> g(tau_grid.size());
    if (tau_grid.empty()) return g;
    const Op sp = ops::sigma_plus();
    const VecOp x0 = super::vec(ops::sigma_minus() * rho_ss);
    auto observe = [&](const VecOp& v) { return (sp * super::unvec(v)).trace(); };

    bool uniform = tau_grid.size() > 2 && tau_grid[0] == 0.0;
    const double h = uniform ? tau_grid[1] : 0.0;
    for (std::size_t i = 1; uniform && i < tau_grid.size(); ++i)
        if (std::abs(tau_grid[i] - static_cast<double>(i) * h) > 1e-9 * h) uniform = false;

    if (uniform) {
        const Superop step = L.propagator(h);
        VecOp x = x0;
        for (std::size_t i = 0; i < tau_grid.size(); ++i) {
            g[i] = observe(x);
            x = step * x;
        }
    } else {
        for (std::size_t i = 0; i < tau_grid.size(); ++i) {
            if (tau_grid[i] < 0.0) throw std::invalid_argument("two_time_correlation: tau must be >= 0");
            g[i] = observe(L.propagator(tau_grid[i]) * x0);
        }
    }
    return g;
}

/// Re of int_0^inf (g(tau) - g(inf)) exp(i nu tau) dtau for each nu (rad/ps),
/// evaluated exactly through the resolvent of the generator restricted to the
/// trace-free subspace.
inline std::vector<cplx> correlation_transform(const Liouvillian& L, const DensityMatrix& rho_ss,
                                               std::span<const double> nu) {
    const Superop& G = L.generator();
    const VecOp vss = super::vec(rho_ss);
    const Eigen::RowVector4cd tr = super::trace_row();
    // shift the stationary eigenvalue away from zero; G is unchanged on trace-free vectors
    const Superop Gs = G - vss * tr;

    const VecOp y = super::vec(ops::sigma_minus() * rho_ss);
    const VecOp q = y - vss * (tr * y)(0);
    const Op sp = ops::sigma_plus();

    std::vector<cplx> out(nu.size());
    for (std::size_t k = 0; k < nu.size(); ++k) {
        const Superop A = Gs + cplx(0.0, nu[k]) * Superop::Identity();
        const VecOp x = A.partialPivLu().solve(q);
        out[k] = -(sp * super::unvec(x)).trace();
    }
    return out;
}

} // namespace qdrf
