#pragma once

#include "wavesheet/boundary_solve.hpp"
#include "wavesheet/operators.hpp"
#include "wavesheet/state.hpp"

#include <vector>

namespace wavesheet {

/// Dense operator blocks for the dipole evolution. The bottom is static over
/// a run, so its self-interaction block is assembled once; the surface blocks
/// are refreshed each time the surface moves.
struct DipoleOperators {
    DenseOperator a_star_s; ///< adjoint double-layer block on the surface
    DenseOperator c_d;      ///< bottom -> surface coupling
    DenseOperator d_d;      ///< surface -> bottom coupling
    DenseOperator a_star_b; ///< adjoint double-layer block on the bottom
    VecX a_precond;         ///< rank-one far-field pattern for the Schur solve
    Curve bottom;           ///< kept so the coupling blocks can be rebuilt per step
    double atwood = 1.0;
    bool has_bottom = false;
};

/// Assemble all blocks. `bottom` may be empty (infinite depth).
DipoleOperators build_dipole_operators(const Curve& surface, const Curve& bottom, double atwood);

/// Reassemble the surface-dependent blocks (a_star_s, c_d, d_d, a_precond)
/// for a moved surface; the bottom block is reused.
void refresh_surface_blocks(DipoleOperators& ops, const Curve& surface);

/// Tangential derivative of the dipole density: the equivalent sheet strength.
/// Centered-difference based, so a constant offset in mu drops out exactly and
/// the result has exactly zero mean.
std::vector<double> gamma_from_mu(const std::vector<double>& mu, double de);

/// Guard for the modes the dipole evolution supports: no bulk vorticity, and
/// a two-fluid interface only without any background flow.
void check_dipole_mode(const DipoleState& st, const PhysParams& p, const BackgroundField& bg);

/// Principal-value sheet velocity (conjugated) sampled at the staggered
/// midpoints of the surface, from the equivalent sheet strengths of both
/// dipole layers. The own-sheet sum uses the desingularized difference form:
/// the bare sum would amplify the midpoint's O(de^2) offset off the curve
/// into an O(de) tangential error.
std::vector<cplx> sheet_pv_velocity_dual(const DipoleState& st, const Curve& dual);

/// Reusable pieces of a right-hand-side evaluation.
struct DipoleRhsWorkspace {
    Curve dual;
    std::vector<cplx> u_pv_dual;
};

/// Marker velocity (conjugated) of the surface nodes:
/// interpolated pv part + (2*alpha-1)/2 * gamma_tilde_i / z_e_i + alpha * background.
std::vector<cplx> surface_velocity_dipole(const DipoleState& st, const PhysParams& p,
                                          const BackgroundField& bg,
                                          DipoleRhsWorkspace* ws = nullptr);

/// Sum of the single-valued potential traces from both sides at the surface
/// nodes, phi_F + phi_A, from the two dipole layers. The integrand's
/// coincident limit is identically zero, so the own-sheet diagonal is simply
/// omitted.
std::vector<double> compute_Phi_S(const DipoleState& st);

/// Half the two-sided potential trace evaluated at the staggered midpoints
/// (difference form on the own sheet) and interpolated back to the nodes.
/// This is the quantity whose exact time derivative the evolution uses.
std::vector<double> phi_half_dual(const DipoleState& st);

/// Exact discrete time derivative of phi_half_dual under node velocities
/// conj(dt_zbar_S) and density rates dt_mu_S / dt_mu_B.
std::vector<double> dt_phi_half(const DipoleState& st, const std::vector<cplx>& dt_zbar_S,
                                const std::vector<double>& dt_mu_S,
                                const std::vector<double>& dt_mu_B);

struct DtMuResult {
    std::vector<double> dt_mu_S;
    std::vector<double> dt_mu_B;
    SchurSolveReport report;
};

/// Right-hand side of the dipole evolution: solves the coupled system for
/// d(mu_S)/dt given the marker velocities, and back-substitutes d(mu_B)/dt.
/// `dt_zbar_S` must be the conjugated marker velocities that the surface nodes
/// actually follow (same alpha as the evolution).
DtMuResult dt_mu_S(const DipoleState& st, const PhysParams& p, const DipoleOperators& ops,
                   const std::vector<cplx>& dt_zbar_S, const BackgroundField& bg,
                   const DipoleRhsWorkspace* ws = nullptr);

/// Odd-even smoothing pass: periodic (1,2,1)/4 convolution. Annihilates the
/// sawtooth mode exactly and leaves constants exactly unchanged.
std::vector<double> oec_smooth(const std::vector<double>& v);

} // namespace wavesheet
