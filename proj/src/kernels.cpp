#include "wavesheet/kernels.hpp"

#include <cmath>

namespace wavesheet {

namespace {
constexpr double pi = 3.141592653589793238462643383279502884;

inline void sincos2(double t, double& s, double& c) {
#if defined(__GLIBC__)
    ::sincos(t, &s, &c);
#else
    s = std::sin(t);
    c = std::cos(t);
#endif
}
} // namespace

double log_kernel(double L, cplx x) {
    const double a = 2.0 * pi * x.real() / L;
    const double b = 2.0 * pi * x.imag() / L;
    const double ab = std::fabs(b);
    const double E = std::exp(-ab);
    // cosh b - cos a = e^{|b|}/2 * (1 + e^{-2|b|} - 2 cos(a) e^{-|b|})
    return ab - std::log(2.0) + std::log1p(E * E - 2.0 * std::cos(a) * E);
}

double green(double L, cplx x) { return log_kernel(L, x) / (4.0 * pi); }

CotSin2 cot_sin2_raw(double L, cplx x) {
    const double u = pi * x.real() / L;
    const double v = pi * x.imag() / L;
    const double sgn = (v >= 0.0) ? 1.0 : -1.0;
    const double E = std::exp(-2.0 * std::fabs(v));
    double s, c;
    sincos2(2.0 * u, s, c);

    const double den = (1.0 + E * E) - 2.0 * c * E;
    CotSin2 r;
    r.cot = cplx(2.0 * s * E, -sgn * (1.0 - E * E)) / den;

    const double omE = 1.0 - E;
    const double P = 2.0 * E * (1.0 - c) + omE * omE;
    const double nre = 8.0 * E * E * (1.0 - c) - 4.0 * E * c * omE * omE;
    const double nim = -4.0 * E * s * sgn * (1.0 - E * E);
    r.inv_sin2 = cplx(nre, nim) / (P * P);
    return r;
}

cplx cot_raw(double L, cplx x) {
    const double u = pi * x.real() / L;
    const double v = pi * x.imag() / L;
    const double sgn = (v >= 0.0) ? 1.0 : -1.0;
    const double E = std::exp(-2.0 * std::fabs(v));
    double s, c;
    sincos2(2.0 * u, s, c);
    const double den = (1.0 + E * E) - 2.0 * c * E;
    return cplx(2.0 * s * E, -sgn * (1.0 - E * E)) / den;
}

cplx cot_kernel(double L, cplx x) {
    // 1/(2Li) = -i/(2L)
    return cplx(0.0, -0.5 / L) * cot_raw(L, x);
}

cplx sin2_kernel(double L, cplx x) {
    return cplx(0.0, -0.5 * pi / (L * L)) * cot_sin2_raw(L, x).inv_sin2;
}

cplx desingularized_sum(const Curve& c, const std::vector<cplx>& f, int i) {
    if (static_cast<int>(f.size()) != c.n) throw std::invalid_argument("f size mismatch");
    const cplx zi = c.z[i], zei = c.z_e[i], fi = f[i];
    cplx acc = 0.0;
    for (int j = 0; j < c.n; ++j) {
        if (j == i) continue;
        acc += cot_raw(c.x_period, zi - c.z[j]) * (f[j] * zei - fi * c.z_e[j]);
    }
    return acc * (c.de / zei);
}

cplx desingularized_sum(const Curve& c, const std::vector<double>& f, int i) {
    std::vector<cplx> fc(f.begin(), f.end());
    return desingularized_sum(c, fc, i);
}

cplx plemelj_limit(const Curve& c, const std::vector<double>& f, int i, Side side) {
    const double L = c.x_period;
    const cplx pv = cplx(0.0, -0.5 / L) * desingularized_sum(c, f, i);
    const cplx jump = 0.5 * f[i] / c.z_e[i];
    return side == Side::above ? pv - jump : pv + jump;
}

cplx field_velocity(const SheetState& s, const PhysParams& p, cplx x) {
    const double L = s.surface.x_period;
    cplx u = 0.0;
    for (int j = 0; j < s.surface.n; ++j)
        u += s.gamma_S[j] * cot_raw(L, x - s.surface.z[j]);
    u *= cplx(0.0, -0.5 / L) * s.surface.de;

    if (s.has_bottom()) {
        cplx ub = 0.0;
        for (int j = 0; j < s.bottom.n; ++j)
            ub += s.gamma_B[j] * cot_raw(L, x - s.bottom.z[j]);
        u += ub * cplx(0.0, -0.5 / L) * s.bottom.de;
    }
    for (const auto& v : s.vortices) u += v.gamma * cot_kernel(L, x - v.z);

    if (p.omega0 != 0.0) {
        cplx ls = 0.0;
        for (int j = 0; j < s.surface.n; ++j)
            ls += log_kernel(L, x - s.surface.z[j]) * std::conj(s.surface.z_e[j]);
        u += p.omega0 / (4.0 * pi) * s.surface.de * ls;
        if (s.has_bottom()) {
            cplx lb = 0.0;
            for (int j = 0; j < s.bottom.n; ++j)
                lb += log_kernel(L, x - s.bottom.z[j]) * std::conj(s.bottom.z_e[j]);
            u -= p.omega0 / (4.0 * pi) * s.bottom.de * lb;
        }
    }
    return u;
}

double field_stream(const SheetState& s, const PhysParams& p, cplx x) {
    if (p.omega0 != 0.0) throw std::invalid_argument("stream evaluation requires omega0 = 0");
    const double L = s.surface.x_period;
    double psi = 0.0;
    for (int j = 0; j < s.surface.n; ++j)
        psi += s.gamma_S[j] * green(L, x - s.surface.z[j]);
    psi *= s.surface.de;
    if (s.has_bottom()) {
        double pb = 0.0;
        for (int j = 0; j < s.bottom.n; ++j)
            pb += s.gamma_B[j] * green(L, x - s.bottom.z[j]);
        psi += pb * s.bottom.de;
    }
    for (const auto& v : s.vortices) psi += v.gamma * green(L, x - v.z);
    return psi;
}

} // namespace wavesheet
