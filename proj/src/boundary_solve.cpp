#include "wavesheet/boundary_solve.hpp"

#include "wavesheet/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace wavesheet {

namespace {

// Normal-trace row entry: Im[target_tangent * cot_kernel(target - source)].
inline double trace_entry(double L, cplx target_tangent, cplx target, cplx source) {
    return (target_tangent * cot_kernel(L, target - source)).imag();
}

void check_compatibility(const Curve& surface, const std::vector<double>& g) {
    if (g.size() != static_cast<size_t>(surface.n))
        throw std::invalid_argument("normal data size does not match the surface");
    double flux = 0.0, scale = 0.0;
    for (int i = 0; i < surface.n; ++i) {
        flux += surface.de * g[i] * std::abs(surface.z_e[i]);
        scale = std::max(scale, std::abs(g[i]));
    }
    if (std::abs(flux) > 1e-10 * (1.0 + scale))
        throw std::invalid_argument("normal data has nonzero net flux through the surface");
}

// Normal trace -Im[tangent * u_hat] of everything that is data (vortices and
// omega0 bulk rotation) rather than unknown; densities in `probe` are zero.
VecX data_trace(const SheetState& probe, const PhysParams& p, const Curve& dual) {
    VecX t(dual.n);
    for (int i = 0; i < dual.n; ++i)
        t[i] = -(dual.z_e[i] * field_velocity(probe, p, dual.z[i])).imag();
    return t;
}

struct CoupledSystem {
    DenseOperator M;
    Curve surf_dual, bot_dual;
};

// Impermeability rows at both dual grids with the last row of each block
// replaced by the circulation constraint of that sheet.
CoupledSystem assemble_coupled(const Curve& surface, const Curve& bottom) {
    const int ns = surface.n;
    const int nb = bottom.empty() ? 0 : bottom.n;
    const double L = surface.x_period;
    CoupledSystem sys;
    sys.surf_dual = dual_curve(surface);
    if (nb > 0) sys.bot_dual = dual_curve(bottom);
    DenseOperator& M = sys.M;
    M.setZero(ns + nb, ns + nb);

    for (int i = 0; i + 1 < ns; ++i) {
        const cplx zt = sys.surf_dual.z[i];
        const cplx zte = sys.surf_dual.z_e[i];
        for (int j = 0; j < ns; ++j) M(i, j) = surface.de * trace_entry(L, zte, zt, surface.z[j]);
        for (int j = 0; j < nb; ++j)
            M(i, ns + j) = bottom.de * trace_entry(L, zte, zt, bottom.z[j]);
    }
    for (int j = 0; j < ns; ++j) M(ns - 1, j) = surface.de;

    for (int i = 0; i + 1 < nb; ++i) {
        const cplx zt = sys.bot_dual.z[i];
        const cplx zte = sys.bot_dual.z_e[i];
        for (int j = 0; j < ns; ++j)
            M(ns + i, j) = surface.de * trace_entry(L, zte, zt, surface.z[j]);
        for (int j = 0; j < nb; ++j)
            M(ns + i, ns + j) = bottom.de * trace_entry(L, zte, zt, bottom.z[j]);
    }
    if (nb > 0)
        for (int j = 0; j < nb; ++j) M(ns + nb - 1, ns + j) = bottom.de;
    return sys;
}

std::vector<double> to_std(const VecX& v) { return {v.data(), v.data() + v.size()}; }

} // namespace

BackgroundField make_background_zero() { return {}; }

BackgroundField make_background_uniform_gamma(double gamma, double L) {
    BackgroundField bg;
    bg.kind = BackgroundKind::uniform_gamma_flat;
    bg.gamma = gamma;
    bg.L = L;
    return bg;
}

BackgroundField make_background_harmonic(const Curve& bottom, double gamma) {
    if (bottom.empty()) throw std::invalid_argument("harmonic background needs a bottom");
    BackgroundField bg;
    bg.kind = BackgroundKind::harmonic_H;
    bg.gamma = gamma;
    bg.L = bottom.x_period;
    bg.bottom = bottom;
    const DenseOperator B = assemble_BB(bottom, dual_curve(bottom));
    VecX rhs = VecX::Zero(bottom.n);
    rhs[bottom.n - 1] = -2.0 * gamma;
    bg.gamma_BH = to_std(Eigen::PartialPivLU<DenseOperator>(B).solve(rhs));
    return bg;
}

BackgroundField make_background_mirror(const Curve& surface, double h0, double gamma,
                                       double omega0, std::vector<PointVortex> vortices) {
    if (surface.empty()) throw std::invalid_argument("mirror background needs a surface");
    BackgroundField bg;
    bg.kind = BackgroundKind::mirror_flat_bottom;
    bg.gamma = gamma;
    bg.L = surface.x_period;
    bg.surface = surface;
    bg.h0 = h0;
    bg.omega0 = omega0;
    bg.vortices = std::move(vortices);
    return bg;
}

cplx background_velocity(const BackgroundField& bg, cplx x) {
    switch (bg.kind) {
    case BackgroundKind::zero:
        return 0.0;
    case BackgroundKind::uniform_gamma_flat:
        return bg.gamma / bg.L;
    case BackgroundKind::harmonic_H: {
        cplx u = 0.0;
        for (int j = 0; j < bg.bottom.n; ++j)
            u += bg.gamma_BH[j] * cot_kernel(bg.L, x - bg.bottom.z[j]);
        return bg.bottom.de * u;
    }
    case BackgroundKind::mirror_flat_bottom: {
        const double L = bg.L;
        cplx u = bg.gamma / L;
        const cplx two_ih0(0.0, 2.0 * bg.h0);
        for (const PointVortex& v : bg.vortices)
            u += v.gamma * (cot_kernel(L, x - v.z) - cot_kernel(L, x - std::conj(v.z) + two_ih0));
        if (bg.omega0 != 0.0) {
            const Curve& s = bg.surface;
            const double c4 = bg.omega0 / (4.0 * M_PI);
            cplx logs = 0.0;
            for (int j = 0; j < s.n; ++j) {
                logs += log_kernel(L, x - s.z[j]) * std::conj(s.z_e[j]);
                logs += log_kernel(L, x - std::conj(s.z[j]) + two_ih0) * s.z_e[j];
                // flat bottom at -h0, mirrored onto itself: doubled weight
                logs -= 2.0 * log_kernel(L, x - cplx(j * s.de, -bg.h0));
            }
            u += c4 * s.de * logs;
        }
        return u;
    }
    }
    throw std::logic_error("background_velocity: unknown kind");
}

double fluid_area(const Curve& surface, const Curve& bottom) {
    double a = 0.0;
    for (int i = 0; i < surface.n; ++i)
        a += surface.de * surface.z[i].imag() * surface.z_e[i].real();
    for (int j = 0; j < bottom.n; ++j)
        a -= bottom.de * bottom.z[j].imag() * bottom.z_e[j].real();
    return a;
}

double dipole_potential(const Curve& c, const std::vector<double>& mu, cplx x) {
    double phi = 0.0;
    for (int j = 0; j < c.n; ++j)
        phi += mu[j] * (cot_kernel(c.x_period, x - c.z[j]) * c.z_e[j]).real();
    return c.de * phi;
}

InitialGammas solve_initial_gammaS(const Curve& surface, const Curve& bottom,
                                   const std::vector<double>& g_normal, double gamma,
                                   double omega0, const std::vector<PointVortex>& vortices) {
    if (surface.empty()) throw std::invalid_argument("solve_initial_gammaS: empty surface");
    if (bottom.empty() && omega0 != 0.0)
        throw std::invalid_argument("bulk rotation needs a bottom (finite fluid area)");
    check_compatibility(surface, g_normal);

    const int ns = surface.n;
    const int nb = bottom.empty() ? 0 : bottom.n;
    CoupledSystem sys = assemble_coupled(surface, bottom);

    SheetState data;
    data.surface = surface;
    data.bottom = bottom;
    data.gamma_S.assign(ns, 0.0);
    data.gamma_B.assign(nb, 0.0);
    data.vortices = vortices;
    PhysParams p;
    p.omega0 = omega0;

    VecX rhs(ns + nb);
    const std::vector<double> g_dual = interp_to_dual(g_normal);
    const VecX trace_s = data_trace(data, p, sys.surf_dual);
    for (int i = 0; i + 1 < ns; ++i)
        rhs[i] = -g_dual[i] * std::abs(sys.surf_dual.z_e[i]) + trace_s[i];
    double vortex_total = 0.0;
    for (const PointVortex& v : vortices) vortex_total += v.gamma;
    const double area = nb > 0 ? fluid_area(surface, bottom) : 0.0;
    rhs[ns - 1] = gamma - omega0 * area - vortex_total;
    if (nb > 0) {
        const VecX trace_b = data_trace(data, p, sys.bot_dual);
        for (int i = 0; i + 1 < nb; ++i) rhs[ns + i] = trace_b[i];
        rhs[ns + nb - 1] = -gamma;
    }

    const VecX sol = Eigen::PartialPivLU<DenseOperator>(sys.M).solve(rhs);
    InitialGammas out;
    out.gamma_S = to_std(sol.head(ns));
    out.gamma_B = to_std(sol.tail(nb));
    return out;
}

std::vector<double> solve_gamma_B(const SheetState& st, const PhysParams& p,
                                  const Eigen::PartialPivLU<DenseOperator>& bb_lu,
                                  const Curve& bottom_dual) {
    if (!st.has_bottom()) return {};
    const int nb = st.bottom.n;

    SheetState data = st;
    data.gamma_B.assign(nb, 0.0); // the bottom density is the unknown

    VecX rhs(nb);
    const VecX trace = data_trace(data, p, bottom_dual);
    for (int i = 0; i + 1 < nb; ++i) rhs[i] = trace[i];
    rhs[nb - 1] = -p.gamma;
    return to_std(bb_lu.solve(rhs));
}

std::vector<double> solve_mu_B(const Curve& surface, const Curve& bottom,
                               const std::vector<double>& mu_S, const DenseOperator& a_star_b,
                               NeumannSolveReport* report) {
    if (bottom.empty()) return {};
    const double L = surface.x_period;
    VecX rhs = VecX::Zero(bottom.n);
    for (int i = 0; i < bottom.n; ++i) {
        double acc = 0.0;
        for (int j = 0; j < surface.n; ++j)
            acc += mu_S[j] * (cot_kernel(L, bottom.z[i] - surface.z[j]) * surface.z_e[j]).real();
        rhs[i] = -surface.de * acc;
    }
    auto [mu, rep] = neumann_solve(a_star_b, rhs, 0.0);
    if (report) *report = rep;
    if (!rep.converged) throw std::runtime_error("solve_mu_B: Neumann series did not converge");
    return to_std(mu);
}

InitialMus solve_initial_muS(const Curve& surface, const Curve& bottom,
                             const std::vector<double>& g_normal, const BackgroundField& bg) {
    if (surface.empty()) throw std::invalid_argument("solve_initial_muS: empty surface");
    check_compatibility(surface, g_normal);

    const int ns = surface.n;
    const int nb = bottom.empty() ? 0 : bottom.n;
    CoupledSystem sys = assemble_coupled(surface, bottom);

    VecX rhs = VecX::Zero(ns + nb);
    const std::vector<double> g_dual = interp_to_dual(g_normal);
    for (int i = 0; i + 1 < ns; ++i) {
        const cplx zte = sys.surf_dual.z_e[i];
        rhs[i] = -g_dual[i] * std::abs(zte) -
                 (zte * background_velocity(bg, sys.surf_dual.z[i])).imag();
    }
    // bottom rows stay zero: the background is tangent to the bottom, and both
    // residual circulations vanish.

    const VecX sol = Eigen::PartialPivLU<DenseOperator>(sys.M).solve(rhs);
    InitialMus out;
    out.gammaS_tilde = to_std(sol.head(ns));
    out.gammaB_tilde = to_std(sol.tail(nb));

    // Zero-mean antiderivative of the residual surface density.
    out.mu_S0.assign(ns, 0.0);
    for (int i = 1; i < ns; ++i)
        out.mu_S0[i] = out.mu_S0[i - 1] +
                       0.5 * surface.de * (out.gammaS_tilde[i - 1] + out.gammaS_tilde[i]);
    double mean = 0.0;
    for (double m : out.mu_S0) mean += m;
    mean /= ns;
    for (double& m : out.mu_S0) m -= mean;

    if (nb > 0) out.mu_B0 = solve_mu_B(surface, bottom, out.mu_S0, assemble_AstarB(bottom));
    return out;
}

} // namespace wavesheet
