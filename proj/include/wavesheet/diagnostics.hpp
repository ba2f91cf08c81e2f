#pragma once

#include "wavesheet/state.hpp"

namespace wavesheet {

/// Per-step scalar log record for a time-marching run.
struct DiagnosticsRecord {
    double time = 0.0;
    double mass = 0.0;
    double energy = 0.0;
    double cfl = 0.0;
    double circulation_total = 0.0;
    double compatibility_residual = 0.0; // dipole-layer closure identity
};

/// Mass of the fluid enclosed between the two sheets, via the boundary
/// integrals of y dx (surface minus bottom). An empty bottom contributes
/// nothing (infinite depth).
double mass(const Curve& surface, const Curve& bottom, double rho_F);
double mass(const SheetState& st, const PhysParams& p);
double mass(const DipoleState& st, const PhysParams& p);

/// Stream function evaluated at the nodes of one sheet in the circulation
/// representation: periodic log-kernel sums over both sheets plus point
/// vortices. The own-sheet sum is punctured and the coincident-node
/// (principal-value) limit is filled on the diagonal; the evaluation is
/// two-sided symmetric, which is the continuous on-sheet value (the stream
/// function does not jump across a sheet). Requires omega0 == 0.
std::vector<double> stream_trace_gamma(const SheetState& st, const PhysParams& p,
                                       bool on_surface);

/// Stream function at the nodes of one sheet in the potential-jump
/// representation (tangential-dipole sums over both sheets, same symmetric
/// principal-value evaluation on the own sheet).
std::vector<double> stream_trace_mu(const DipoleState& st, bool on_surface);

/// Conjugated fluid-side velocity at the bottom nodes: the limit taken from
/// the side the fluid occupies (above the bottom sheet). Own-sheet sums are
/// desingularized with the coincident-node limit on the diagonal; requires
/// omega0 == 0 in the circulation form.
std::vector<cplx> bottom_fluid_velocity(const SheetState& st, const PhysParams& p);
std::vector<cplx> bottom_fluid_velocity(const DipoleState& st);

/// Total energy: kinetic part from the boundary sums of Re[u_F z_e] * psi on
/// both sheets (fluid-side traces), potential part from the y^2 dx integrals.
/// Defined for irrotational states: throws if omega0 != 0 or point vortices
/// are present (the boundary-sum identity for the kinetic energy needs a
/// potential flow in the interior).
double energy(const SheetState& st, const PhysParams& p);
double energy(const DipoleState& st, const PhysParams& p);

/// Symmetric Hausdorff distance between two sheets, with the horizontal
/// coordinate compared modulo the period; both curves are first resampled to
/// 2^17 points by periodic piecewise-cubic interpolation in the parameter.
double hausdorff(const Curve& a, const Curve& b);

/// | sum mu_S dRe[z_S] + sum mu_B dRe[z_B] |: the closure identity tying the
/// two potential-jump densities together; stays at the quadrature error for
/// a consistent pair. Deep water: the bottom term is absent.
double mu_compatibility_residual(const DipoleState& st);

} // namespace wavesheet
