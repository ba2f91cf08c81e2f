#pragma once

#include "wavesheet/state.hpp"

namespace wavesheet {

/// Periodic Green function (1/4pi) ln(cosh(2pi x2/L) - cos(2pi x1/L)).
double green(double L, cplx x);

/// ln(cosh(2pi x2/L) - cos(2pi x1/L)) = 4pi * green. Overflow-safe.
double log_kernel(double L, cplx x);

/// Raw cot(pi x / L) and sin^{-2}(pi x / L), overflow-safe for any Im x,
/// computed together from a single exp + sincos (hot-loop primitive).
struct CotSin2 {
    cplx cot;
    cplx inv_sin2;
};
CotSin2 cot_sin2_raw(double L, cplx x);
cplx cot_raw(double L, cplx x);

/// Velocity-scale kernels: (1/(2 L i)) cot(pi x/L) and (pi/(2 L^2 i)) sin^{-2}(pi x/L).
/// sin2_kernel == -d/dx cot_kernel.
cplx cot_kernel(double L, cplx x);
cplx sin2_kernel(double L, cplx x);

/// Raw principal value de*sum_{j != i} cot(pi(z_i - z_j)/L) (f_j z_e_i - f_i z_e_j)/z_e_i.
/// The integrand vanishes identically for f = z_e (null identity).
cplx desingularized_sum(const Curve& c, const std::vector<cplx>& f, int i);
cplx desingularized_sum(const Curve& c, const std::vector<double>& f, int i);

enum class Side { above, below }; // relative to the normal i*z_e/|z_e|

/// One-sided limit of the conjugated sheet velocity (1/(2Li)) pv-integral:
/// above -> pv - (1/2) f_i / z_e_i, below -> pv + (1/2) f_i / z_e_i.
cplx plemelj_limit(const Curve& c, const std::vector<double>& f, int i, Side side);

/// Conjugated velocity at a point off every sheet: gamma_S and gamma_B sheet
/// sums, point vortices, and the omega0 boundary log-integrals.
cplx field_velocity(const SheetState& s, const PhysParams& p, cplx x);

/// Stream function at a point off every sheet (vortex representation):
/// Green-kernel sums over both sheets plus point-vortex terms. omega0 = 0 only.
double field_stream(const SheetState& s, const PhysParams& p, cplx x);

} // namespace wavesheet
