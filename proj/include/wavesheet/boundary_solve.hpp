#pragma once

#include "wavesheet/operators.hpp"
#include "wavesheet/state.hpp"

namespace wavesheet {

/// Stationary background velocity carrying the circulation gamma and the
/// uniform bulk rotation omega0, tangent to the bottom by construction.
enum class BackgroundKind { zero, uniform_gamma_flat, harmonic_H, mirror_flat_bottom };

struct BackgroundField {
    BackgroundKind kind = BackgroundKind::zero;
    double gamma = 0.0;
    double L = 0.0;

    // harmonic_H: bottom-sheet density with total circulation -2*gamma, so the
    // fluid-side circulation above the bottom is exactly gamma.
    Curve bottom;
    std::vector<double> gamma_BH;

    // mirror_flat_bottom: vortices and the omega0 patch mirrored across the
    // flat bottom line y = -h0 (images at conj(z) - 2 i h0).
    Curve surface;
    double h0 = 0.0;
    double omega0 = 0.0;
    std::vector<PointVortex> vortices;
};

BackgroundField make_background_zero();
BackgroundField make_background_uniform_gamma(double gamma, double L);
BackgroundField make_background_harmonic(const Curve& bottom, double gamma);
BackgroundField make_background_mirror(const Curve& surface, double h0, double gamma,
                                       double omega0, std::vector<PointVortex> vortices);

cplx background_velocity(const BackgroundField& bg, cplx x);

/// Fluid area between the two sheets, by the boundary integral of y dx.
double fluid_area(const Curve& surface, const Curve& bottom);

/// Double-layer potential of a single sheet at a field point.
double dipole_potential(const Curve& c, const std::vector<double>& mu, cplx x);

struct InitialGammas {
    std::vector<double> gamma_S, gamma_B;
};

/// Coupled solve for the initial sheet densities: prescribed normal velocity
/// g on the surface, impermeable bottom, and the two circulation constraints
/// (surface carries gamma - omega0*|fluid| - sum of vortex strengths, bottom
/// carries -gamma). Collocated at midpoint dual nodes; the last row of each
/// block is the circulation constraint. Empty bottom = infinite depth.
InitialGammas solve_initial_gammaS(const Curve& surface, const Curve& bottom,
                                   const std::vector<double>& g_normal, double gamma,
                                   double omega0, const std::vector<PointVortex>& vortices);

/// Per-step bottom density: impermeability at dual bottom nodes given the
/// current surface density, vortices and omega0, plus the bottom circulation
/// row -gamma. Uses the prefactorized circulation matrix. Empty bottom: {}.
std::vector<double> solve_gamma_B(const SheetState& st, const PhysParams& p,
                                  const Eigen::PartialPivLU<DenseOperator>& bb_lu,
                                  const Curve& bottom_dual);

/// Per-step bottom dipole density: the double-layer potential must vanish
/// below the bottom, i.e. A*_B mu_B = rhs(mu_S), solved by Neumann series.
std::vector<double> solve_mu_B(const Curve& surface, const Curve& bottom,
                               const std::vector<double>& mu_S, const DenseOperator& a_star_b,
                               NeumannSolveReport* report = nullptr);

struct InitialMus {
    std::vector<double> mu_S0, mu_B0;
    std::vector<double> gammaS_tilde, gammaB_tilde;
};

/// Initial surface dipole density: solve the residual-density system (data g
/// minus the background trace, zero circulations), integrate the surface
/// density to its zero-mean antiderivative, then solve the bottom density.
InitialMus solve_initial_muS(const Curve& surface, const Curve& bottom,
                             const std::vector<double>& g_normal, const BackgroundField& bg);

} // namespace wavesheet
