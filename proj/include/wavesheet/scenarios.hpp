#pragma once

#include "wavesheet/specfun.hpp"
#include "wavesheet/state.hpp"

namespace wavesheet {

enum class ScenarioKind { linear_wave, stokes2, cnoidal, breaking, custom };

/// Parameters of a built-in initial condition. The surface is sampled
/// uniformly in x (so the curve parameter equals x at t = 0) and the bottom
/// is flat at depth -h0; `deep_water` drops the bottom sheet entirely and
/// takes the infinite-depth limit of the velocity data.
struct ScenarioSpec {
    ScenarioKind kind = ScenarioKind::linear_wave;
    double A = 1e-3;         // amplitude
    double k = 1.0;          // wavenumber (ignored by the solitary wave)
    double L = 2.0 * M_PI;   // horizontal period
    double h0 = 1.0;         // mean depth
    double g = 1.0;          // gravity
    int N_S = 256;           // surface nodes
    int N_B = 256;           // bottom nodes
    Formulation formulation = Formulation::vortex;
    bool deep_water = false;
};

struct ScenarioIC {
    Curve surface;
    std::vector<double> g_normal; // upward normal velocity data at the nodes
};

/// Angular frequency of a small k-wave over depth h0 (infinite depth: pass
/// h0 <= 0 or rely on tanh saturating for large k*h0).
double linear_wave_frequency(double g, double k, double h0);

/// Subtract the discrete weighted mean (weight |z_e| de) so the data carry
/// exactly zero flux through the surface; the analytic means vanish but the
/// discrete sums only do so to quadrature accuracy.
void project_compatibility(const Curve& surface, std::vector<double>& g_normal);

/// eta0 = A cos(kx); u.n = A sin(kx) sqrt(g k tanh k h0).
ScenarioIC linear_wave_ic(const ScenarioSpec& spec);

/// Second-order wave: eta0 gains the cos(2kx) correction
/// k A^2 (3 - tanh^2 kh0)/(4 tanh^3 kh0), and u.n the full-normal projection
/// factor (1 + kA cos(kx)/tanh kh0)/sqrt(1 + k^2 A^2 sin^2 kx).
ScenarioIC stokes2_ic(const ScenarioSpec& spec);

/// Periodic solitary wave eta = eta2 + A cn^2(2K x / L, m) translating at
/// speed c (see make_cnoidal); u.n = -c eta_x / sqrt(1 + eta_x^2).
ScenarioIC cnoidal_ic(const ScenarioSpec& spec);

/// Large-amplitude wave: eta0 = A cos(kx) with the same full-normal velocity
/// projection as stokes2_ic (defaults A = 1/2, k = 1).
ScenarioIC breaking_ic(const ScenarioSpec& spec);

/// Dispatch on spec.kind (custom is rejected: supply your own fields).
ScenarioIC make_ic(const ScenarioSpec& spec);

/// Flat bottom at -h0 with N_B nodes; empty curve when deep_water is set.
Curve make_flat_bottom(const ScenarioSpec& spec);

/// Convenience assemblies: generate the IC, solve the initial densities.
SheetState make_vortex_state(const ScenarioSpec& spec, double gamma = 0.0);
DipoleState make_dipole_state(const ScenarioSpec& spec);

} // namespace wavesheet
