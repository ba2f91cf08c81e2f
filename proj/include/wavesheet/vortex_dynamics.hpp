#pragma once

#include "wavesheet/operators.hpp"
#include "wavesheet/state.hpp"

#include <Eigen/Dense>

namespace wavesheet {

/// Operator bundle for the circulation-density rate solve. The bottom is a
/// rigid boundary, so its self block is assembled and factorized once per run;
/// the surface-dependent blocks are rebuilt whenever the surface moves.
struct VortexOperators {
    DenseOperator a_s; // surface self block (target-tangent kernel, diag 1/2)
    DenseOperator c_v; // bottom -> surface coupling
    DenseOperator d_v; // surface -> bottom coupling (dual rows, zero last row)
    DenseOperator b_b; // bottom self block (dual rows + circulation row)
    Eigen::PartialPivLU<DenseOperator> b_b_lu;
    Curve bottom; // kept so the coupling blocks can be rebuilt per step
    Curve bottom_dual;
    double atwood = 1.0;
    bool has_bottom = false;
};

VortexOperators build_vortex_operators(const Curve& surface, const Curve& bottom, double atwood);

/// Reassemble only the surface-dependent blocks (a_s, c_v, d_v), keeping the
/// bottom factorization.
void refresh_surface_blocks(VortexOperators& ops, const Curve& surface);

/// Shared per-evaluation scratch: the midpoint curve of the surface and the
/// jump-free conjugated velocity of all sources there.
struct VortexRhsWorkspace {
    Curve dual;
    std::vector<cplx> u_pv_dual;
};

/// Jump-free (principal-value) conjugated velocity at the midpoint nodes of
/// the surface: the own-sheet sum in desingularized difference form (the bare
/// sum picks up an O(de) tangential error from the midpoint's O(de^2) offset
/// off the curve), plain bottom/vortex sums, and the omega0 boundary logs
/// with the own-sheet midpoint quadrature defect removed. Building block of
/// the marker velocity, the one-sided traces u_F/u_A and the
/// tangential-velocity sum.
std::vector<cplx> surface_pv_velocity_dual(const SheetState& st, const PhysParams& p,
                                           const Curve& dual);

/// Conjugated marker velocities d/dt conj(z_S): the pv field evaluated on the
/// dual grid and interpolated back, plus the local tangential term
/// (2 alpha - 1)/2 * gamma_S/z_{S,e} added at the nodes (so the alpha
/// dependence is exactly tangent nodewise). Fills `ws` when provided.
/// Throws when a point vortex sits closer than one parameter step to the
/// surface.
std::vector<cplx> surface_velocity_vortex(const SheetState& st, const PhysParams& p,
                                          VortexRhsWorkspace* ws = nullptr);

/// Conjugated point-vortex velocities; each vortex sees every source except
/// its own singular term. Throws on (numerically) coincident vortices.
std::vector<cplx> vortex_point_velocities(const SheetState& st, const PhysParams& p);

/// Tangential velocity sum Psi_S = (u_F + u_A) . z_{S,e} = 2 Re[z_e u_pv] at
/// the surface nodes (node-collocated desingularized evaluation).
std::vector<double> compute_Psi_S(const SheetState& st, const PhysParams& p);

/// Exact discrete rate of Psi_S/2 on the dual grid (interpolated back to the
/// nodes) given the motion of every source and both density rates. Exposed so
/// the density-rate assembly can be validated against finite differences in
/// time of the dual-grid Psi_S.
std::vector<double> dt_psi_half(const SheetState& st, const PhysParams& p,
                                const std::vector<cplx>& dt_zbar_S,
                                const std::vector<cplx>& dt_zbar_v,
                                const std::vector<double>& dt_gamma_S,
                                const std::vector<double>& dt_gamma_B);

struct DtGammaResult {
    std::vector<double> dt_gamma_S;
    std::vector<double> dt_gamma_B; // empty in deep water
    SchurSolveReport report;
};

/// Solve the coupled rate system for the sheet densities:
///   a_s x + c_v y = G1,   d_v x + b_b y = G2
/// with G1 the Bernoulli/tangential-rate right-hand side (dual-grid assembly,
/// Atwood-weighted kinetic terms, simplified convective terms, gravity and
/// surface tension) and G2 the rate of the bottom impermeability data.
/// `dt_zbar_S` / `dt_zbar_v` are the conjugated velocities already computed
/// this step. `single_fluid_form` selects the independently written
/// atwood-free assembly (requires atwood == 1); it exists as a cross-check.
DtGammaResult dt_gamma_S(const SheetState& st, const PhysParams& p, const VortexOperators& ops,
                         const std::vector<cplx>& dt_zbar_S, const std::vector<cplx>& dt_zbar_v,
                         bool single_fluid_form = false,
                         const VortexRhsWorkspace* ws = nullptr);

/// Node-collocated conjugated velocity with the coincident-node limit of the
/// desingularized integrand filled in one of two equivalent ways; the two
/// variants (and the production dual-grid path) agree to O(de^2) on smooth
/// states.
enum class DiagonalVariant {
    curvature_extension,  // de*(gamma*z_ee - gamma_e*z_e)/(2 pi i z_e^2)
    cot_sum_substitution, // (2 gamma/z_e)*S_i - de*gamma_e/(2 pi i z_e)
};
std::vector<cplx> surface_velocity_vortex_nodal(const SheetState& st, const PhysParams& p,
                                                DiagonalVariant variant);

} // namespace wavesheet
