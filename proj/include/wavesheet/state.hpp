#pragma once

#include "wavesheet/geometry.hpp"

namespace wavesheet {

struct PointVortex {
    cplx z;
    double gamma = 0.0;
};

/// Which sheet-density representation a run evolves.
enum class Formulation { vortex, dipole };

struct PhysParams {
    double g = 1.0;      // gravity
    double rho_F = 1.0;  // lower (fluid) density
    double sigma = 0.0;  // surface tension coefficient
    double atwood = 1.0; // (rho_F - rho_A)/(rho_F + rho_A)
    double alpha = 1.0;  // marker advection weight in [0, 1]
    double gamma = 0.0;  // prescribed bottom circulation
    double omega0 = 0.0; // uniform background vorticity
};

/// Vortex-sheet representation: circulation densities on both boundaries.
/// An empty bottom curve means infinite depth (all bottom terms vanish).
struct SheetState {
    Curve surface;
    Curve bottom;
    std::vector<double> gamma_S;
    std::vector<double> gamma_B;
    std::vector<PointVortex> vortices;

    bool has_bottom() const { return !bottom.empty(); }
};

/// Dipole-layer representation: potential-jump densities on both boundaries.
struct DipoleState {
    Curve surface;
    Curve bottom;
    std::vector<double> mu_S;
    std::vector<double> mu_B;

    bool has_bottom() const { return !bottom.empty(); }
};

} // namespace wavesheet
