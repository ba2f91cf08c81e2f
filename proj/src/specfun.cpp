#include "wavesheet/specfun.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace wavesheet {

namespace {
constexpr double pi = 3.141592653589793238462643383279502884;

void check_s(double s) {
    if (!(s > 0.0) || !(s <= 1.0))
        throw std::domain_error("elliptic parameter must satisfy 0 <= m < 1");
}

struct AgmTail {
    double agm;        // common limit of the mean iteration
    double c_sq_sum;   // sum over n of 2^(n-1) * c_n^2, with c_0^2 = m
};

AgmTail agm_chain(double s) {
    double a = 1.0, b = std::sqrt(s);
    double sum = 0.5 * (1.0 - s); // 2^(-1) * c_0^2, c_0^2 = m = 1 - s
    double pow2 = 1.0;            // 2^(n-1) for the incoming c_n, starting at n = 1
    for (int it = 0; it < 64; ++it) {
        double c = 0.5 * (a - b); // c_{it+1}
        sum += pow2 * c * c;
        pow2 *= 2.0;
        double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
        if (std::fabs(a - b) <= 4e-16 * a) break; // a, b stall one ulp apart
    }
    return {a, sum};
}
} // namespace

double elliptic_K_comp(double s) {
    check_s(s);
    return pi / (2.0 * agm_chain(s).agm);
}

double elliptic_E_comp(double s) {
    if (s == 0.0) return 1.0; // m -> 1 limit
    check_s(s);
    AgmTail t = agm_chain(s);
    double K = pi / (2.0 * t.agm);
    return K * (1.0 - t.c_sq_sum);
}

double elliptic_K(double m) {
    if (!(m >= 0.0) || !(m < 1.0)) throw std::domain_error("elliptic_K requires 0 <= m < 1");
    return elliptic_K_comp(1.0 - m);
}

double elliptic_E(double m) {
    if (!(m >= 0.0) || m > 1.0) throw std::domain_error("elliptic_E requires 0 <= m <= 1");
    if (m == 1.0) return 1.0;
    return elliptic_E_comp(1.0 - m);
}

JacobiSC jacobi_sc_comp(double u, double s) {
    check_s(s);
    const double m = 1.0 - s;
    if (m < 1e-14) {
        // cn -> cos, sn -> sin, dn -> 1
        return {std::sin(u), std::cos(u), std::sqrt(1.0 - m * std::sin(u) * std::sin(u))};
    }
    // descending Landen chain
    std::vector<double> as, cs;
    double a = 1.0, b = std::sqrt(s);
    as.push_back(a);
    cs.push_back(std::sqrt(m));
    int N = 0;
    for (int it = 1; it < 64; ++it) {
        double c = 0.5 * (a - b);
        double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
        as.push_back(a);
        cs.push_back(c);
        N = it;
        if (c <= 4e-16 * a) break; // a, b stall one ulp apart
    }
    double phi = std::ldexp(1.0, N) * a * u;
    for (int n = N; n >= 1; --n) {
        double ratio = cs[n] / as[n] * std::sin(phi);
        ratio = std::min(1.0, std::max(-1.0, ratio));
        phi = 0.5 * (phi + std::asin(ratio));
    }
    JacobiSC r;
    r.sn = std::sin(phi);
    r.cn = std::cos(phi);
    r.dn = std::sqrt(s + m * r.cn * r.cn); // 1 - m*sn^2, cancellation-free near m = 1
    return r;
}

double jacobi_cn_comp(double u, double s) { return jacobi_sc_comp(u, s).cn; }

double jacobi_cn(double u, double m) {
    if (!(m >= 0.0) || !(m < 1.0)) throw std::domain_error("jacobi_cn requires 0 <= m < 1");
    return jacobi_cn_comp(u, 1.0 - m);
}

namespace {
// Dispersion residual using c^2 directly (no square root), which stays
// continuous even where the triple product would make c imaginary.
double dispersion_residual(double s, double L, double A, double h0, double g) {
    const double m = 1.0 - s;
    AgmTail t = agm_chain(s);
    double K = pi / (2.0 * t.agm);
    double EoverK = 1.0 - t.c_sq_sum;
    double e1 = -(A / m) * EoverK;
    double e2 = (A / m) * (s - EoverK);
    double e3 = (A / m) * (1.0 - EoverK);
    double c2 = g * h0 * (1.0 + e1 / h0) * (1.0 + e2 / h0) * (1.0 + e3 / h0);
    return (16.0 / 3.0) * m * K * K * (h0 * h0 / g) * c2 - A * L * L;
}
} // namespace

EllipticParam solve_cnoidal_m(double L_period, double A, double h0, double g) {
    if (!(A > 0.0) || !(L_period > 0.0) || !(h0 > 0.0) || !(g > 0.0))
        throw std::domain_error("solve_cnoidal_m requires positive L, A, h0, g");
    double lo = std::log(1e-280); // s near 0: residual -> +infinity
    double hi = std::log(1.0 - 1e-12);
    double flo = dispersion_residual(std::exp(lo), L_period, A, h0, g);
    double fhi = dispersion_residual(std::exp(hi), L_period, A, h0, g);
    if (!(flo > 0.0) != !(fhi > 0.0)) {
        // bisection on t = log(s): resolves s to full relative precision
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (lo + hi);
            double fmid = dispersion_residual(std::exp(mid), L_period, A, h0, g);
            if ((fmid > 0.0) == (flo > 0.0)) {
                lo = mid;
                flo = fmid;
            } else {
                hi = mid;
                fhi = fmid;
            }
            if (hi - lo < 1e-15) break;
        }
        double s = std::exp(0.5 * (lo + hi));
        double resid = dispersion_residual(s, L_period, A, h0, g);
        if (std::fabs(resid) > 1e-12 * A * L_period * L_period) {
            std::ostringstream msg;
            msg << "solve_cnoidal_m: residual " << resid << " did not reach tolerance";
            throw std::runtime_error(msg.str());
        }
        return {1.0 - s, s};
    }
    std::ostringstream msg;
    msg << "solve_cnoidal_m: no sign change on bracket; residuals " << flo << " and " << fhi;
    throw std::runtime_error(msg.str());
}

double CnoidalWave::eta(double x) const {
    double xr = x - L * std::round(x / L); // cn^2(2K x/L) has x-period L
    double cn = jacobi_cn_comp(2.0 * K * xr / L, p.one_minus_m);
    return eta2 + A * cn * cn;
}

double CnoidalWave::eta_x(double x) const {
    double xr = x - L * std::round(x / L); // sn*cn picks up two sign flips per period
    JacobiSC j = jacobi_sc_comp(2.0 * K * xr / L, p.one_minus_m);
    return -2.0 * A * j.cn * j.sn * j.dn * (2.0 * K / L);
}

CnoidalWave make_cnoidal(double L_period, double A, double h0, double g) {
    CnoidalWave w;
    w.p = solve_cnoidal_m(L_period, A, h0, g);
    w.L = L_period;
    w.A = A;
    w.h0 = h0;
    w.g = g;
    w.K = elliptic_K_comp(w.p.one_minus_m);
    w.E = elliptic_E_comp(w.p.one_minus_m);
    double EoverK = w.E / w.K;
    double m = w.p.m, s = w.p.one_minus_m;
    w.eta1 = -(A / m) * EoverK;
    w.eta2 = (A / m) * (s - EoverK);
    w.eta3 = (A / m) * (1.0 - EoverK);
    w.c = std::sqrt(g * h0 * (1.0 + w.eta1 / h0) * (1.0 + w.eta2 / h0) * (1.0 + w.eta3 / h0));
    return w;
}

} // namespace wavesheet
