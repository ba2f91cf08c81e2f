#include "wavesheet/scenarios.hpp"

#include "wavesheet/boundary_solve.hpp"

#include <cmath>
#include <stdexcept>

namespace wavesheet {

namespace {

void validate(const ScenarioSpec& spec) {
    if (spec.A < 0.0) throw std::invalid_argument("scenario: amplitude must be >= 0");
    if (spec.L <= 0.0 || spec.g <= 0.0) throw std::invalid_argument("scenario: L, g must be > 0");
    if (spec.N_S < 8) throw std::invalid_argument("scenario: N_S too small");
    if (!spec.deep_water && spec.N_B < 8) throw std::invalid_argument("scenario: N_B too small");
    if (!spec.deep_water && spec.h0 <= 0.0)
        throw std::invalid_argument("scenario: depth must be > 0");
    if (spec.kind != ScenarioKind::cnoidal) {
        const double cycles = spec.k * spec.L / (2.0 * M_PI);
        if (std::abs(cycles - std::round(cycles)) > 1e-9 || cycles < 0.5)
            throw std::invalid_argument("scenario: k*L/(2*pi) must be a positive integer");
    }
}

double depth_factor(const ScenarioSpec& spec) {
    return spec.deep_water ? 1.0 : std::tanh(spec.k * spec.h0);
}

Curve sample_graph(const ScenarioSpec& spec, const std::vector<double>& eta) {
    std::vector<cplx> z(spec.N_S);
    for (int i = 0; i < spec.N_S; ++i)
        z[i] = cplx(i * spec.L / spec.N_S, eta[i]);
    return build_curve(std::move(z), spec.L / spec.N_S, spec.L);
}

/// u.n of a cosine wave of arbitrary amplitude, with the full normal
/// direction retained (reduces to the first-order data as A -> 0).
double full_normal_data(const ScenarioSpec& spec, double x) {
    const double th = depth_factor(spec);
    const double s = std::sin(spec.k * x), c = std::cos(spec.k * x);
    const double kA = spec.k * spec.A;
    return spec.A * s * std::sqrt(spec.g * spec.k * th) / std::sqrt(1.0 + kA * kA * s * s) *
           (1.0 + kA * c / th);
}

} // namespace

double linear_wave_frequency(double g, double k, double h0) {
    const double th = h0 > 0.0 ? std::tanh(k * h0) : 1.0;
    return std::sqrt(g * k * th);
}

void project_compatibility(const Curve& surface, std::vector<double>& g_normal) {
    double flux = 0.0, weight = 0.0;
    for (int i = 0; i < surface.n; ++i) {
        const double w = std::abs(surface.z_e[i]);
        flux += g_normal[i] * w;
        weight += w;
    }
    const double shift = flux / weight;
    for (double& v : g_normal) v -= shift;
}

ScenarioIC linear_wave_ic(const ScenarioSpec& spec) {
    validate(spec);
    const double om = linear_wave_frequency(spec.g, spec.k, spec.deep_water ? -1.0 : spec.h0);
    std::vector<double> eta(spec.N_S), gn(spec.N_S);
    for (int i = 0; i < spec.N_S; ++i) {
        const double x = i * spec.L / spec.N_S;
        eta[i] = spec.A * std::cos(spec.k * x);
        gn[i] = spec.A * om * std::sin(spec.k * x);
    }
    ScenarioIC ic{sample_graph(spec, eta), std::move(gn)};
    project_compatibility(ic.surface, ic.g_normal);
    return ic;
}

ScenarioIC stokes2_ic(const ScenarioSpec& spec) {
    validate(spec);
    const double th = depth_factor(spec);
    const double c2 = spec.k * spec.A * spec.A * (3.0 - th * th) / (4.0 * th * th * th);
    std::vector<double> eta(spec.N_S), gn(spec.N_S);
    for (int i = 0; i < spec.N_S; ++i) {
        const double x = i * spec.L / spec.N_S;
        eta[i] = spec.A * std::cos(spec.k * x) + c2 * std::cos(2.0 * spec.k * x);
        gn[i] = full_normal_data(spec, x);
    }
    ScenarioIC ic{sample_graph(spec, eta), std::move(gn)};
    project_compatibility(ic.surface, ic.g_normal);
    return ic;
}

ScenarioIC cnoidal_ic(const ScenarioSpec& spec) {
    validate(spec);
    if (spec.deep_water)
        throw std::invalid_argument("cnoidal_ic: needs a finite depth");
    const CnoidalWave w = make_cnoidal(spec.L, spec.A, spec.h0, spec.g);
    std::vector<double> eta(spec.N_S), gn(spec.N_S);
    for (int i = 0; i < spec.N_S; ++i) {
        const double x = i * spec.L / spec.N_S;
        eta[i] = w.eta(x);
        const double ex = w.eta_x(x);
        gn[i] = -w.c * ex / std::sqrt(1.0 + ex * ex);
    }
    ScenarioIC ic{sample_graph(spec, eta), std::move(gn)};
    project_compatibility(ic.surface, ic.g_normal);
    return ic;
}

ScenarioIC breaking_ic(const ScenarioSpec& spec) {
    validate(spec);
    std::vector<double> eta(spec.N_S), gn(spec.N_S);
    for (int i = 0; i < spec.N_S; ++i) {
        const double x = i * spec.L / spec.N_S;
        eta[i] = spec.A * std::cos(spec.k * x);
        gn[i] = full_normal_data(spec, x);
    }
    ScenarioIC ic{sample_graph(spec, eta), std::move(gn)};
    project_compatibility(ic.surface, ic.g_normal);
    return ic;
}

ScenarioIC make_ic(const ScenarioSpec& spec) {
    switch (spec.kind) {
        case ScenarioKind::linear_wave: return linear_wave_ic(spec);
        case ScenarioKind::stokes2: return stokes2_ic(spec);
        case ScenarioKind::cnoidal: return cnoidal_ic(spec);
        case ScenarioKind::breaking: return breaking_ic(spec);
        case ScenarioKind::custom: break;
    }
    throw std::invalid_argument("make_ic: custom scenarios have no generator");
}

Curve make_flat_bottom(const ScenarioSpec& spec) {
    if (spec.deep_water) return {};
    std::vector<cplx> z(spec.N_B);
    for (int i = 0; i < spec.N_B; ++i)
        z[i] = cplx(i * spec.L / spec.N_B, -spec.h0);
    return build_curve(std::move(z), spec.L / spec.N_B, spec.L);
}

SheetState make_vortex_state(const ScenarioSpec& spec, double gamma) {
    ScenarioIC ic = make_ic(spec);
    SheetState st;
    st.surface = std::move(ic.surface);
    st.bottom = make_flat_bottom(spec);
    InitialGammas ig = solve_initial_gammaS(st.surface, st.bottom, ic.g_normal, gamma, 0.0, {});
    st.gamma_S = std::move(ig.gamma_S);
    st.gamma_B = std::move(ig.gamma_B);
    return st;
}

DipoleState make_dipole_state(const ScenarioSpec& spec) {
    ScenarioIC ic = make_ic(spec);
    DipoleState st;
    st.surface = std::move(ic.surface);
    st.bottom = make_flat_bottom(spec);
    InitialMus im = solve_initial_muS(st.surface, st.bottom, ic.g_normal, make_background_zero());
    st.mu_S = std::move(im.mu_S0);
    st.mu_B = std::move(im.mu_B0);
    return st;
}

} // namespace wavesheet
