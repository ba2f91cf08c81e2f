#include "wavesheet/geometry.hpp"

#include <cmath>

namespace wavesheet {

namespace {
void check_size(std::size_t n) {
    if (n < 8) throw std::invalid_argument("curve needs at least 8 nodes");
}
} // namespace

std::vector<cplx> periodic_d1(const std::vector<cplx>& v, double de, cplx shift) {
    const int n = static_cast<int>(v.size());
    std::vector<cplx> d(n);
    for (int i = 0; i < n; ++i) {
        cplx right = (i + 1 < n) ? v[i + 1] : v[0] + shift;
        cplx left = (i > 0) ? v[i - 1] : v[n - 1] - shift;
        d[i] = (right - left) / (2.0 * de);
    }
    return d;
}

std::vector<cplx> periodic_d2(const std::vector<cplx>& v, double de, cplx shift) {
    const int n = static_cast<int>(v.size());
    std::vector<cplx> d(n);
    for (int i = 0; i < n; ++i) {
        cplx right = (i + 1 < n) ? v[i + 1] : v[0] + shift;
        cplx left = (i > 0) ? v[i - 1] : v[n - 1] - shift;
        d[i] = (right - 2.0 * v[i] + left) / (de * de);
    }
    return d;
}

std::vector<double> periodic_d1(const std::vector<double>& v, double de) {
    const int n = static_cast<int>(v.size());
    std::vector<double> d(n);
    for (int i = 0; i < n; ++i) {
        double right = v[(i + 1) % n];
        double left = v[(i + n - 1) % n];
        d[i] = (right - left) / (2.0 * de);
    }
    return d;
}

Curve build_curve(std::vector<cplx> points, double de, double x_period) {
    check_size(points.size());
    if (!(de > 0.0)) throw std::invalid_argument("parameter step must be positive");
    Curve c;
    c.n = static_cast<int>(points.size());
    c.de = de;
    c.x_period = x_period;
    c.z = std::move(points);
    c.z_e = periodic_d1(c.z, de, x_period);
    c.z_ee = periodic_d2(c.z, de, x_period);
    return c;
}

Curve dual_curve(const Curve& c) {
    check_size(c.z.size());
    std::vector<cplx> mid(c.n);
    for (int i = 0; i < c.n; ++i) {
        cplx right = (i + 1 < c.n) ? c.z[i + 1] : c.z[0] + c.x_period;
        mid[i] = 0.5 * (c.z[i] + right);
    }
    return build_curve(std::move(mid), c.de, c.x_period);
}

std::vector<cplx> interp_to_primal(const std::vector<cplx>& dual_values) {
    const int n = static_cast<int>(dual_values.size());
    std::vector<cplx> p(n);
    for (int i = 0; i < n; ++i) p[i] = 0.5 * (dual_values[(i + n - 1) % n] + dual_values[i]);
    return p;
}

std::vector<double> interp_to_primal(const std::vector<double>& dual_values) {
    const int n = static_cast<int>(dual_values.size());
    std::vector<double> p(n);
    for (int i = 0; i < n; ++i) p[i] = 0.5 * (dual_values[(i + n - 1) % n] + dual_values[i]);
    return p;
}

std::vector<cplx> interp_to_dual(const std::vector<cplx>& primal_values, cplx shift) {
    const int n = static_cast<int>(primal_values.size());
    std::vector<cplx> d(n);
    for (int i = 0; i < n; ++i) {
        cplx right = (i + 1 < n) ? primal_values[i + 1] : primal_values[0] + shift;
        d[i] = 0.5 * (primal_values[i] + right);
    }
    return d;
}

std::vector<double> interp_to_dual(const std::vector<double>& primal_values) {
    const int n = static_cast<int>(primal_values.size());
    std::vector<double> d(n);
    for (int i = 0; i < n; ++i) d[i] = 0.5 * (primal_values[i] + primal_values[(i + 1) % n]);
    return d;
}

UnitFrame frame_at(const Curve& c, int i) {
    cplx ze = c.z_e.at(i);
    double m = std::abs(ze);
    if (!(m > 0.0)) throw std::domain_error("degenerate tangent");
    UnitFrame f;
    f.tangent = ze / m;
    f.normal = cplx(0.0, 1.0) * f.tangent;
    return f;
}

std::vector<double> curvature(const Curve& c) {
    std::vector<double> k(c.n);
    for (int i = 0; i < c.n; ++i) {
        double m = std::abs(c.z_e[i]);
        k[i] = std::imag(std::conj(c.z_e[i]) * c.z_ee[i]) / (m * m * m);
    }
    return k;
}

} // namespace wavesheet
