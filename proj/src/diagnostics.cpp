#include "wavesheet/diagnostics.hpp"

#include "wavesheet/dipole_dynamics.hpp"
#include "wavesheet/kernels.hpp"
#include "wavesheet/vortex_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace wavesheet {

namespace {

double y_dx_integral(const Curve& c) {
    double acc = 0.0;
    for (int i = 0; i < c.n; ++i) acc += c.z[i].imag() * c.z_e[i].real();
    return acc * c.de;
}

double y2_dx_integral(const Curve& c) {
    double acc = 0.0;
    for (int i = 0; i < c.n; ++i) acc += c.z[i].imag() * c.z[i].imag() * c.z_e[i].real();
    return acc * c.de;
}

/// Punctured periodic log-kernel sum of one sheet at its own node i, with the
/// exact coincident-node limit restored on the diagonal. The reference kernel
/// 2 ln|2 sin(pi d/L_e)| has a vanishing period integral and its punctured
/// lattice sum is 2 de ln n, which fixes the diagonal entry
/// ln 2 + 2 ln(|z_e| de / (2L)); the result is exact for a uniform density on
/// a flat uniform sheet.
double own_sheet_log_sum(const Curve& c, const std::vector<double>& f, int i, double L) {
    double acc = 0.0;
    for (int j = 0; j < c.n; ++j)
        if (j != i) acc += f[j] * log_kernel(L, c.z[i] - c.z[j]);
    acc += f[i] * (M_LN2 + 2.0 * std::log(std::abs(c.z_e[i]) * c.de / (2.0 * L)));
    return acc * c.de;
}

double other_sheet_log_sum(const Curve& c, const std::vector<double>& f, cplx x, double L) {
    double acc = 0.0;
    for (int j = 0; j < c.n; ++j) acc += f[j] * log_kernel(L, x - c.z[j]);
    return acc * c.de;
}

/// Tangential-dipole stream sum of one sheet at its own node i: the 1/d
/// singularity cancels pairwise in the punctured sum, and the coincident-node
/// limit of the remaining smooth part — the kernel's curvature term plus the
/// product of the singularity with the density variation — fills the diagonal.
double own_sheet_dipole_stream(const Curve& c, const std::vector<double>& mu,
                               const std::vector<double>& mu_e, int i, double L) {
    double acc = 0.0;
    for (int j = 0; j < c.n; ++j)
        if (j != i) acc += mu[j] * (cot_kernel(L, c.z[i] - c.z[j]) * c.z_e[j]).imag();
    acc += mu_e[i] / (2.0 * M_PI) + mu[i] * (c.z_ee[i] / (4.0 * M_PI * c.z_e[i])).real();
    return acc * c.de;
}

double other_sheet_dipole_stream(const Curve& c, const std::vector<double>& mu, cplx x, double L) {
    double acc = 0.0;
    for (int j = 0; j < c.n; ++j) acc += mu[j] * (cot_kernel(L, x - c.z[j]) * c.z_e[j]).imag();
    return acc * c.de;
}

/// Principal-value conjugated velocity of a sheet at its own node i:
/// desingularized difference form plus the coincident-node sample of the
/// smooth integrand (curvature extension).
cplx own_sheet_pv_velocity(const Curve& c, const std::vector<double>& f,
                           const std::vector<double>& f_e, int i, double L) {
    const cplx kc(0.0, -0.5 / L);
    const cplx two_pi_i(0.0, 2.0 * M_PI);
    cplx acc = kc * desingularized_sum(c, f, i);
    acc += c.de * (f[i] * c.z_ee[i] - f_e[i] * c.z_e[i]) / (two_pi_i * c.z_e[i] * c.z_e[i]);
    return acc;
}

std::vector<cplx> bottom_fluid_velocity_impl(const Curve& surface, const Curve& bottom,
                                             const std::vector<double>& gS,
                                             const std::vector<double>& gB,
                                             const std::vector<PointVortex>& vortices) {
    if (bottom.empty()) return {};
    const double L = surface.x_period;
    const std::vector<double> gB_e = periodic_d1(gB, bottom.de);
    std::vector<cplx> u(bottom.n, 0.0);
    for (int i = 0; i < bottom.n; ++i) {
        const cplx x = bottom.z[i];
        cplx acc = own_sheet_pv_velocity(bottom, gB, gB_e, i, L);
        cplx cot_acc = 0.0;
        for (int j = 0; j < surface.n; ++j) cot_acc += gS[j] * cot_raw(L, x - surface.z[j]);
        acc += surface.de * cplx(0.0, -0.5 / L) * cot_acc;
        for (const PointVortex& v : vortices) acc += v.gamma * cot_kernel(L, x - v.z);
        // Fluid side: the fluid sits above the bottom sheet, and the limit
        // from above subtracts half the local jump.
        u[i] = acc - 0.5 * gB[i] / bottom.z_e[i];
    }
    return u;
}

double kinetic_boundary_sum(const Curve& c, const std::vector<cplx>& u_F,
                            const std::vector<double>& psi) {
    double acc = 0.0;
    for (int i = 0; i < c.n; ++i) acc += (u_F[i] * c.z_e[i]).real() * psi[i];
    return acc * c.de;
}

} // namespace

double mass(const Curve& surface, const Curve& bottom, double rho_F) {
    double m = y_dx_integral(surface);
    if (!bottom.empty()) m -= y_dx_integral(bottom);
    return rho_F * m;
}

double mass(const SheetState& st, const PhysParams& p) {
    return mass(st.surface, st.bottom, p.rho_F);
}

double mass(const DipoleState& st, const PhysParams& p) {
    return mass(st.surface, st.bottom, p.rho_F);
}

std::vector<double> stream_trace_gamma(const SheetState& st, const PhysParams& p,
                                       bool on_surface) {
    if (p.omega0 != 0.0)
        throw std::invalid_argument("stream_trace_gamma: bulk vorticity not supported");
    const Curve& target = on_surface ? st.surface : st.bottom;
    const Curve& other = on_surface ? st.bottom : st.surface;
    const std::vector<double>& f_t = on_surface ? st.gamma_S : st.gamma_B;
    const std::vector<double>& f_o = on_surface ? st.gamma_B : st.gamma_S;
    if (target.empty()) return {};
    const double L = st.surface.x_period;
    const double quarter_pi_inv = 1.0 / (4.0 * M_PI);
    std::vector<double> psi(target.n, 0.0);
    for (int i = 0; i < target.n; ++i) {
        double acc = own_sheet_log_sum(target, f_t, i, L);
        if (!other.empty()) acc += other_sheet_log_sum(other, f_o, target.z[i], L);
        psi[i] = quarter_pi_inv * acc;
        for (const PointVortex& v : st.vortices) psi[i] += v.gamma * green(L, target.z[i] - v.z);
    }
    return psi;
}

std::vector<double> stream_trace_mu(const DipoleState& st, bool on_surface) {
    const Curve& target = on_surface ? st.surface : st.bottom;
    const Curve& other = on_surface ? st.bottom : st.surface;
    const std::vector<double>& mu_t = on_surface ? st.mu_S : st.mu_B;
    const std::vector<double>& mu_o = on_surface ? st.mu_B : st.mu_S;
    if (target.empty()) return {};
    const double L = st.surface.x_period;
    const std::vector<double> mu_t_e = periodic_d1(mu_t, target.de);
    std::vector<double> psi(target.n, 0.0);
    for (int i = 0; i < target.n; ++i) {
        double acc = own_sheet_dipole_stream(target, mu_t, mu_t_e, i, L);
        if (!other.empty()) acc += other_sheet_dipole_stream(other, mu_o, target.z[i], L);
        psi[i] = -acc;
    }
    return psi;
}

std::vector<cplx> bottom_fluid_velocity(const SheetState& st, const PhysParams& p) {
    if (p.omega0 != 0.0)
        throw std::invalid_argument("bottom_fluid_velocity: bulk vorticity not supported");
    return bottom_fluid_velocity_impl(st.surface, st.bottom, st.gamma_S, st.gamma_B, st.vortices);
}

std::vector<cplx> bottom_fluid_velocity(const DipoleState& st) {
    if (st.bottom.empty()) return {};
    return bottom_fluid_velocity_impl(st.surface, st.bottom,
                                      gamma_from_mu(st.mu_S, st.surface.de),
                                      gamma_from_mu(st.mu_B, st.bottom.de), {});
}

double energy(const SheetState& st, const PhysParams& p) {
    if (p.omega0 != 0.0 || !st.vortices.empty())
        throw std::invalid_argument("energy: defined for irrotational states only");
    const Curve& s = st.surface;

    std::vector<cplx> u_F = interp_to_primal(surface_pv_velocity_dual(st, p, dual_curve(s)));
    for (int i = 0; i < s.n; ++i) u_F[i] += 0.5 * st.gamma_S[i] / s.z_e[i];
    const std::vector<double> psi_S = stream_trace_gamma(st, p, true);

    double e = -0.5 * p.rho_F * kinetic_boundary_sum(s, u_F, psi_S);
    e += 0.5 * p.rho_F * p.g * y2_dx_integral(s);
    if (st.has_bottom()) {
        const std::vector<cplx> u_FB = bottom_fluid_velocity(st, p);
        const std::vector<double> psi_B = stream_trace_gamma(st, p, false);
        e += 0.5 * p.rho_F * kinetic_boundary_sum(st.bottom, u_FB, psi_B);
        e -= 0.5 * p.rho_F * p.g * y2_dx_integral(st.bottom);
    }
    return e;
}

double energy(const DipoleState& st, const PhysParams& p) {
    const Curve& s = st.surface;
    const std::vector<double> gS = gamma_from_mu(st.mu_S, s.de);

    SheetState tilde; // circulation view of the same flow for the pv sums
    tilde.surface = s;
    tilde.bottom = st.bottom;
    tilde.gamma_S = gS;
    if (st.has_bottom()) tilde.gamma_B = gamma_from_mu(st.mu_B, st.bottom.de);

    PhysParams pv_params = p;
    pv_params.omega0 = 0.0;
    std::vector<cplx> u_F =
        interp_to_primal(surface_pv_velocity_dual(tilde, pv_params, dual_curve(s)));
    for (int i = 0; i < s.n; ++i) u_F[i] += 0.5 * gS[i] / s.z_e[i];
    const std::vector<double> psi_S = stream_trace_mu(st, true);

    double e = -0.5 * p.rho_F * kinetic_boundary_sum(s, u_F, psi_S);
    e += 0.5 * p.rho_F * p.g * y2_dx_integral(s);
    if (st.has_bottom()) {
        const std::vector<cplx> u_FB = bottom_fluid_velocity(st);
        const std::vector<double> psi_B = stream_trace_mu(st, false);
        e += 0.5 * p.rho_F * kinetic_boundary_sum(st.bottom, u_FB, psi_B);
        e -= 0.5 * p.rho_F * p.g * y2_dx_integral(st.bottom);
    }
    return e;
}

namespace {

constexpr int kResamplePoints = 1 << 17;

/// Periodic piecewise-cubic (4-point Lagrange) resampling of the curve to m
/// uniformly spaced parameter values. The per-period horizontal drift is
/// removed before interpolating and restored exactly afterwards.
std::vector<cplx> resample_periodic_cubic(const Curve& c, int m) {
    const int n = c.n;
    std::vector<cplx> w(n);
    for (int i = 0; i < n; ++i)
        w[i] = c.z[i] - cplx(c.x_period * (static_cast<double>(i) / n), 0.0);
    std::vector<cplx> out(m);
    for (int k = 0; k < m; ++k) {
        const double s = static_cast<double>(k) * n / m;
        int j = static_cast<int>(std::floor(s));
        const double t = s - j;
        const cplx wm = w[(j - 1 + n) % n];
        const cplx w0 = w[j % n];
        const cplx w1 = w[(j + 1) % n];
        const cplx w2 = w[(j + 2) % n];
        const double lm = -t * (t - 1.0) * (t - 2.0) / 6.0;
        const double l0 = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
        const double l1 = -(t + 1.0) * t * (t - 2.0) / 2.0;
        const double l2 = (t + 1.0) * t * (t - 1.0) / 6.0;
        out[k] = lm * wm + l0 * w0 + l1 * w1 + l2 * w2 +
                 cplx(c.x_period * (s / n), 0.0);
    }
    return out;
}

/// Uniform cell grid over one horizontal period (wrapped in x, clamped in y)
/// with compressed per-cell point lists, for nearest-point queries.
struct PeriodicPointGrid {
    double L = 0.0, cell = 0.0, ymin = 0.0;
    int nx = 0, ny = 0;
    std::vector<int> start;   // nx*ny + 1 offsets
    std::vector<int> order;   // point indices grouped by cell
    const std::vector<cplx>* pts = nullptr;

    PeriodicPointGrid(const std::vector<cplx>& points, double period) : pts(&points) {
        L = period;
        nx = 2048;
        cell = L / nx;
        double lo = std::numeric_limits<double>::max();
        double hi = std::numeric_limits<double>::lowest();
        for (const cplx& z : points) {
            lo = std::min(lo, z.imag());
            hi = std::max(hi, z.imag());
        }
        ymin = lo;
        ny = std::max(1, static_cast<int>(std::floor((hi - lo) / cell)) + 1);
        std::vector<int> cell_of(points.size());
        std::vector<int> count(static_cast<size_t>(nx) * ny + 1, 0);
        for (size_t k = 0; k < points.size(); ++k) {
            const int cx = col_of(points[k].real());
            const int cy = std::clamp(static_cast<int>(std::floor((points[k].imag() - ymin) / cell)),
                                      0, ny - 1);
            cell_of[k] = cy * nx + cx;
            ++count[cell_of[k] + 1];
        }
        for (size_t c = 1; c < count.size(); ++c) count[c] += count[c - 1];
        start = count;
        order.resize(points.size());
        std::vector<int> cursor(start.begin(), start.end() - 1);
        for (size_t k = 0; k < points.size(); ++k) order[cursor[cell_of[k]]++] = static_cast<int>(k);
    }

    int col_of(double x) const {
        double xw = x - L * std::floor(x / L);
        int cx = static_cast<int>(std::floor(xw / cell));
        return std::clamp(cx, 0, nx - 1);
    }

    double min_dist2(cplx q) const {
        const int cx = col_of(q.real());
        const int cy = std::clamp(static_cast<int>(std::floor((q.imag() - ymin) / cell)), 0, ny - 1);
        double best2 = std::numeric_limits<double>::max();
        const int r_max = nx / 2 + ny + 2;
        for (int r = 0; r <= r_max; ++r) {
            if (r >= 2) {
                const double reach = (r - 1) * cell;
                if (reach * reach > best2) break;
            }
            scan_ring(cx, cy, r, q, best2);
        }
        return best2;
    }

  private:
    void scan_cell(int cx, int cy, cplx q, double& best2) const {
        if (cy < 0 || cy >= ny) return;
        cx = ((cx % nx) + nx) % nx;
        const int c = cy * nx + cx;
        for (int k = start[c]; k < start[c + 1]; ++k) {
            const cplx b = (*pts)[order[k]];
            double dx = std::abs(q.real() - b.real());
            dx -= L * std::floor(dx / L);
            if (dx > 0.5 * L) dx = L - dx;
            const double dy = q.imag() - b.imag();
            best2 = std::min(best2, dx * dx + dy * dy);
        }
    }

    void scan_ring(int cx, int cy, int r, cplx q, double& best2) const {
        if (r == 0) {
            scan_cell(cx, cy, q, best2);
            return;
        }
        const int span = std::min(2 * r + 1, nx);
        for (int d = 0; d < span; ++d) {
            scan_cell(cx - r + d, cy - r, q, best2);
            scan_cell(cx - r + d, cy + r, q, best2);
        }
        for (int d = -r + 1; d <= r - 1; ++d) {
            scan_cell(cx - r, cy + d, q, best2);
            scan_cell(cx + r, cy + d, q, best2);
        }
    }
};

double directed_hausdorff2(const std::vector<cplx>& from, const PeriodicPointGrid& to) {
    double worst = 0.0;
    for (const cplx& a : from) worst = std::max(worst, to.min_dist2(a));
    return worst;
}

} // namespace

double hausdorff(const Curve& a, const Curve& b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("hausdorff: empty curve");
    if (a.x_period != b.x_period) throw std::invalid_argument("hausdorff: period mismatch");
    const std::vector<cplx> pa = resample_periodic_cubic(a, kResamplePoints);
    const std::vector<cplx> pb = resample_periodic_cubic(b, kResamplePoints);
    const PeriodicPointGrid ga(pa, a.x_period);
    const PeriodicPointGrid gb(pb, b.x_period);
    return std::sqrt(std::max(directed_hausdorff2(pa, gb), directed_hausdorff2(pb, ga)));
}

double mu_compatibility_residual(const DipoleState& st) {
    double acc = 0.0;
    for (int i = 0; i < st.surface.n; ++i) acc += st.mu_S[i] * st.surface.z_e[i].real();
    acc *= st.surface.de;
    if (st.has_bottom()) {
        double accb = 0.0;
        for (int i = 0; i < st.bottom.n; ++i) accb += st.mu_B[i] * st.bottom.z_e[i].real();
        acc += st.bottom.de * accb;
    }
    return std::abs(acc);
}

} // namespace wavesheet
