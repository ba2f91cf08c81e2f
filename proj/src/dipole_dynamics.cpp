#include "wavesheet/dipole_dynamics.hpp"

#include "wavesheet/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace wavesheet {

namespace {

VecX to_vec(const std::vector<double>& v) {
    return Eigen::Map<const VecX>(v.data(), static_cast<Eigen::Index>(v.size()));
}
std::vector<double> to_std(const VecX& v) { return {v.data(), v.data() + v.size()}; }

VecX precond_pattern(const Curve& surface, double atwood) {
    VecX a(surface.n);
    for (int i = 0; i < surface.n; ++i)
        a[i] = atwood * surface.de / surface.x_period * surface.z_e[i].real();
    return a;
}

struct DipoleKinematics {
    Curve dual;              // midpoint surface
    std::vector<cplx> v, ve; // velocity dz/dt and its e-derivative, nodes
    std::vector<cplx> vt;    // velocity interpolated to the dual grid
    std::vector<double> mu_dual;
};

DipoleKinematics make_kinematics(const DipoleState& st, const std::vector<cplx>& dt_zbar_S,
                                 const Curve* dual_in) {
    DipoleKinematics k;
    k.dual = dual_in ? *dual_in : dual_curve(st.surface);
    k.v.resize(st.surface.n);
    for (int i = 0; i < st.surface.n; ++i) k.v[i] = std::conj(dt_zbar_S[i]);
    k.ve = periodic_d1(k.v, st.surface.de);
    k.vt = interp_to_dual(k.v);
    k.mu_dual = interp_to_dual(st.mu_S);
    return k;
}

// Half the two-sided potential trace at the dual nodes (difference form on
// the own sheet: the coincident limit of the difference integrand is zero,
// and the off-curve midpoint offset is suppressed by the vanishing numerator).
std::vector<double> phi_half_on_dual(const DipoleState& st, const Curve& dual,
                                     const std::vector<double>& mu_dual) {
    const Curve& s = st.surface;
    const double L = s.x_period;
    std::vector<double> phi(dual.n, 0.0);
    for (int i = 0; i < dual.n; ++i) {
        const cplx x = dual.z[i];
        double acc = 0.0;
        for (int j = 0; j < s.n; ++j)
            acc += s.de * (st.mu_S[j] - mu_dual[i]) *
                   (cot_kernel(L, x - s.z[j]) * s.z_e[j]).real();
        if (st.has_bottom())
            for (int j = 0; j < st.bottom.n; ++j)
                acc += st.bottom.de * st.mu_B[j] *
                       (cot_kernel(L, x - st.bottom.z[j]) * st.bottom.z_e[j]).real();
        phi[i] = acc;
    }
    return phi;
}

// Terms of the phi_half rate that do not involve the density rates: the
// kernel arguments and source tangents move with the given velocities.
std::vector<double> dt_phi_half_geometric(const DipoleState& st, const DipoleKinematics& k) {
    const Curve& s = st.surface;
    const double L = s.x_period;
    const cplx kc(0.0, -0.5 / L);
    const cplx ks(0.0, -0.5 * M_PI / (L * L));

    std::vector<double> out(k.dual.n, 0.0);
    for (int i = 0; i < k.dual.n; ++i) {
        const cplx x = k.dual.z[i];
        const cplx vti = k.vt[i];
        double acc = 0.0;
        for (int j = 0; j < s.n; ++j) {
            const CotSin2 cs = cot_sin2_raw(L, x - s.z[j]);
            const cplx cot = kc * cs.cot;
            const cplx sin2 = ks * cs.inv_sin2;
            acc += s.de * (st.mu_S[j] - k.mu_dual[i]) *
                   ((cot * k.ve[j]).real() - (sin2 * (vti - k.v[j]) * s.z_e[j]).real());
        }
        if (st.has_bottom())
            for (int j = 0; j < st.bottom.n; ++j) {
                const cplx sin2 = ks * cot_sin2_raw(L, x - st.bottom.z[j]).inv_sin2;
                acc -= st.bottom.de * st.mu_B[j] * (sin2 * vti * st.bottom.z_e[j]).real();
            }
        out[i] = acc;
    }
    return out;
}

// Rate of the bottom gauge condition's data: the surface sources move, so the
// below-bottom trace of the surface layer changes at this rate.
VecX assemble_G2(const DipoleState& st, const DipoleKinematics& k, const Curve& bottom) {
    const Curve& s = st.surface;
    const double L = s.x_period;
    const cplx kc(0.0, -0.5 / L);
    const cplx ks(0.0, -0.5 * M_PI / (L * L));
    VecX g2 = VecX::Zero(bottom.n);
    for (int i = 0; i < bottom.n; ++i) {
        const cplx x = bottom.z[i];
        double acc = 0.0;
        for (int j = 0; j < s.n; ++j) {
            const CotSin2 cs = cot_sin2_raw(L, x - s.z[j]);
            const cplx cot = kc * cs.cot;
            const cplx sin2 = ks * cs.inv_sin2;
            acc -= s.de * st.mu_S[j] *
                   ((cot * k.ve[j]).real() + (sin2 * k.v[j] * s.z_e[j]).real());
        }
        g2[i] = acc;
    }
    return g2;
}

} // namespace

DipoleOperators build_dipole_operators(const Curve& surface, const Curve& bottom, double atwood) {
    DipoleOperators ops;
    ops.atwood = atwood;
    ops.has_bottom = !bottom.empty();
    ops.a_star_s = assemble_AstarS(surface, atwood);
    ops.a_precond = precond_pattern(surface, atwood);
    if (ops.has_bottom) {
        ops.bottom = bottom;
        ops.a_star_b = assemble_AstarB(bottom);
        ops.c_d = assemble_CD(surface, bottom, atwood);
        ops.d_d = assemble_DD(surface, bottom);
    }
    return ops;
}

void refresh_surface_blocks(DipoleOperators& ops, const Curve& surface) {
    ops.a_star_s = assemble_AstarS(surface, ops.atwood);
    ops.a_precond = precond_pattern(surface, ops.atwood);
    if (ops.has_bottom) {
        ops.c_d = assemble_CD(surface, ops.bottom, ops.atwood);
        ops.d_d = assemble_DD(surface, ops.bottom);
    }
}

std::vector<double> gamma_from_mu(const std::vector<double>& mu, double de) {
    return periodic_d1(mu, de);
}

void check_dipole_mode(const DipoleState& st, const PhysParams& p, const BackgroundField& bg) {
    if (st.surface.empty()) throw std::invalid_argument("dipole state: empty surface");
    if (static_cast<int>(st.mu_S.size()) != st.surface.n)
        throw std::invalid_argument("dipole state: mu_S size does not match the surface");
    if (st.has_bottom() && static_cast<int>(st.mu_B.size()) != st.bottom.n)
        throw std::invalid_argument("dipole state: mu_B size does not match the bottom");
    if (p.omega0 != 0.0)
        throw std::invalid_argument("dipole evolution does not support bulk vorticity");
    if (p.atwood != 1.0 && (bg.kind != BackgroundKind::zero || p.gamma != 0.0))
        throw std::invalid_argument(
            "dipole evolution with a second fluid requires zero circulation and no background");
}

std::vector<cplx> sheet_pv_velocity_dual(const DipoleState& st, const Curve& dual) {
    const Curve& s = st.surface;
    const double L = s.x_period;
    const cplx kc(0.0, -0.5 / L);
    const std::vector<double> gamma_s = gamma_from_mu(st.mu_S, s.de);
    const std::vector<double> gamma_dual = interp_to_dual(gamma_s);
    std::vector<double> gamma_b;
    if (st.has_bottom()) gamma_b = gamma_from_mu(st.mu_B, st.bottom.de);

    std::vector<cplx> u(dual.n, 0.0);
    for (int i = 0; i < dual.n; ++i) {
        const cplx x = dual.z[i];
        cplx cot_acc = 0.0, cot_tan = 0.0;
        for (int j = 0; j < s.n; ++j) {
            const cplx ck = cot_raw(L, x - s.z[j]);
            cot_acc += gamma_s[j] * ck;
            cot_tan += ck * s.z_e[j];
        }
        // Difference (desingularized) form: the midpoint target sits O(de^2)
        // off the curve, which the bare cot lattice amplifies to an O(de)
        // tangential error; the vanishing numerator suppresses it to O(de^3).
        cplx acc = s.de * kc * (cot_acc - gamma_dual[i] / dual.z_e[i] * cot_tan);
        if (st.has_bottom()) {
            cplx bcot = 0.0;
            for (int j = 0; j < st.bottom.n; ++j)
                bcot += gamma_b[j] * cot_raw(L, x - st.bottom.z[j]);
            acc += st.bottom.de * kc * bcot;
        }
        u[i] = acc;
    }
    return u;
}

std::vector<cplx> surface_velocity_dipole(const DipoleState& st, const PhysParams& p,
                                          const BackgroundField& bg, DipoleRhsWorkspace* ws) {
    check_dipole_mode(st, p, bg);
    Curve dual = dual_curve(st.surface);
    std::vector<cplx> u_pv = sheet_pv_velocity_dual(st, dual);
    std::vector<cplx> u = interp_to_primal(u_pv);
    const std::vector<double> gamma_s = gamma_from_mu(st.mu_S, st.surface.de);
    const double half_jump = 0.5 * (2.0 * p.alpha - 1.0);
    for (int i = 0; i < st.surface.n; ++i) {
        u[i] += half_jump * gamma_s[i] / st.surface.z_e[i];
        if (bg.kind != BackgroundKind::zero)
            u[i] += p.alpha * background_velocity(bg, st.surface.z[i]);
    }
    if (ws) {
        ws->dual = std::move(dual);
        ws->u_pv_dual = std::move(u_pv);
    }
    return u;
}

std::vector<double> compute_Phi_S(const DipoleState& st) {
    const Curve& s = st.surface;
    const double L = s.x_period;
    std::vector<double> phi(s.n, 0.0);
    for (int i = 0; i < s.n; ++i) {
        double acc = 0.0;
        // The coincident limit of the difference integrand vanishes, so the
        // punctured sum needs no diagonal compensation.
        for (int j = 0; j < s.n; ++j) {
            if (j == i) continue;
            acc += s.de * (st.mu_S[j] - st.mu_S[i]) *
                   (cot_kernel(L, s.z[i] - s.z[j]) * s.z_e[j]).real();
        }
        if (st.has_bottom())
            for (int j = 0; j < st.bottom.n; ++j)
                acc += st.bottom.de * st.mu_B[j] *
                       (cot_kernel(L, s.z[i] - st.bottom.z[j]) * st.bottom.z_e[j]).real();
        phi[i] = 2.0 * acc;
    }
    return phi;
}

std::vector<double> phi_half_dual(const DipoleState& st) {
    const Curve dual = dual_curve(st.surface);
    const std::vector<double> mu_dual = interp_to_dual(st.mu_S);
    return interp_to_primal(phi_half_on_dual(st, dual, mu_dual));
}

std::vector<double> dt_phi_half(const DipoleState& st, const std::vector<cplx>& dt_zbar_S,
                                const std::vector<double>& dt_mu_S,
                                const std::vector<double>& dt_mu_B) {
    const Curve& s = st.surface;
    const double L = s.x_period;
    DipoleKinematics k = make_kinematics(st, dt_zbar_S, nullptr);
    std::vector<double> rate = dt_phi_half_geometric(st, k);
    const std::vector<double> dmu_dual = interp_to_dual(dt_mu_S);
    for (int i = 0; i < k.dual.n; ++i) {
        const cplx x = k.dual.z[i];
        double acc = 0.0;
        for (int j = 0; j < s.n; ++j)
            acc += s.de * (dt_mu_S[j] - dmu_dual[i]) *
                   (cot_kernel(L, x - s.z[j]) * s.z_e[j]).real();
        if (st.has_bottom())
            for (int j = 0; j < st.bottom.n; ++j)
                acc += st.bottom.de * dt_mu_B[j] *
                       (cot_kernel(L, x - st.bottom.z[j]) * st.bottom.z_e[j]).real();
        rate[i] += acc;
    }
    return interp_to_primal(rate);
}

DtMuResult dt_mu_S(const DipoleState& st, const PhysParams& p, const DipoleOperators& ops,
                   const std::vector<cplx>& dt_zbar_S, const BackgroundField& bg,
                   const DipoleRhsWorkspace* ws) {
    check_dipole_mode(st, p, bg);
    if (ops.has_bottom != st.has_bottom())
        throw std::invalid_argument("dt_mu_S: operator bundle does not match the state");
    const Curve& s = st.surface;
    const double A = p.atwood;

    DipoleKinematics k = make_kinematics(st, dt_zbar_S, ws ? &ws->dual : nullptr);
    const std::vector<cplx> u_pv = ws ? ws->u_pv_dual : sheet_pv_velocity_dual(st, k.dual);
    const int nd = k.dual.n;

    const std::vector<double> gamma_dual =
        interp_to_dual(gamma_from_mu(st.mu_S, s.de));
    const std::vector<double> kappa = curvature(k.dual);
    const std::vector<double> geom = dt_phi_half_geometric(st, k);

    std::vector<double> g1_dual(nd);
    for (int i = 0; i < nd; ++i) {
        const cplx jump = 0.5 * gamma_dual[i] / k.dual.z_e[i];
        const cplx grad_f = u_pv[i] + jump;
        const cplx grad_a = u_pv[i] - jump;
        const cplx u_bg =
            bg.kind != BackgroundKind::zero ? background_velocity(bg, k.dual.z[i]) : cplx(0.0);
        double val = -A * geom[i];
        val += (k.vt[i] * (0.5 * (1.0 + A) * grad_f + 0.5 * (A - 1.0) * grad_a)).real();
        val -= 0.25 * ((1.0 + A) * std::norm(grad_f + u_bg) + (A - 1.0) * std::norm(grad_a));
        val -= 0.5 * (1.0 + A) * (p.sigma / p.rho_F) * kappa[i];
        val -= p.g * A * k.dual.z[i].imag();
        g1_dual[i] = val;
    }
    const VecX g1 = to_vec(interp_to_primal(g1_dual));

    DtMuResult out;
    if (!ops.has_bottom) {
        Eigen::PartialPivLU<DenseOperator> lu(ops.a_star_s);
        out.dt_mu_S = to_std(lu.solve(g1));
        out.report.converged = true;
        return out;
    }

    const VecX g2 = assemble_G2(st, k, ops.bottom);
    auto [xb, rep_b] = neumann_solve(ops.a_star_b, g2, 0.0);
    if (!rep_b.converged) throw std::runtime_error("dt_mu_S: bottom data solve did not converge");
    const VecX rhs = g1 - ops.c_d * xb;
    const VecX x =
        solve_calA_D(ops.a_star_s, ops.c_d, ops.a_star_b, ops.d_d, ops.a_precond, rhs, &out.report);
    if (!out.report.converged) throw std::runtime_error("dt_mu_S: rate solve did not converge");
    auto [y, rep_y] = neumann_solve(ops.a_star_b, VecX(g2 - ops.d_d * x), 0.0);
    if (!rep_y.converged) throw std::runtime_error("dt_mu_S: bottom rate solve did not converge");
    out.dt_mu_S = to_std(x);
    out.dt_mu_B = to_std(y);
    return out;
}

std::vector<double> oec_smooth(const std::vector<double>& v) {
    const int n = static_cast<int>(v.size());
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i)
        out[i] = 0.25 * (v[(i + n - 1) % n] + 2.0 * v[i] + v[(i + 1) % n]);
    return out;
}

} // namespace wavesheet
