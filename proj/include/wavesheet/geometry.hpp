#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

namespace wavesheet {

using cplx = std::complex<double>;

/// A closed (periodic-in-parameter) discrete curve z(e_i), e_i = i*de.
/// Sheets in a horizontally periodic strip satisfy z(e + n*de) = z(e) + x_period;
/// genuinely closed curves (test geometries) use x_period = 0.
/// Immutable after construction: derivatives are baked in by build_curve.
struct Curve {
    int n = 0;
    double de = 0.0;        // parameter step
    double x_period = 0.0;  // horizontal shift per parameter period (L, or 0)
    std::vector<cplx> z;    // nodes
    std::vector<cplx> z_e;  // first parameter derivative (2nd-order central)
    std::vector<cplx> z_ee; // second parameter derivative

    double param_length() const { return n * de; }
    bool empty() const { return n == 0; }
};

struct UnitFrame {
    cplx tangent; // z_e/|z_e|
    cplx normal;  // i * tangent
};

/// Central differences of a periodic node array; `shift` is the amount the
/// underlying function grows by per period (x_period for curve points, 0 for
/// densities and velocities).
std::vector<cplx> periodic_d1(const std::vector<cplx>& v, double de, cplx shift = 0.0);
std::vector<cplx> periodic_d2(const std::vector<cplx>& v, double de, cplx shift = 0.0);
std::vector<double> periodic_d1(const std::vector<double>& v, double de);

Curve build_curve(std::vector<cplx> points, double de, double x_period);

/// Midpoint curve: nodes (z_i + z_{i+1})/2 at parameters e_i + de/2,
/// derivatives rebuilt from the midpoints.
Curve dual_curve(const Curve& c);

/// Second-order interpolation of dual-grid values back to the primal nodes:
/// primal(i) = (dual(i-1) + dual(i))/2.
std::vector<cplx> interp_to_primal(const std::vector<cplx>& dual_values);
std::vector<double> interp_to_primal(const std::vector<double>& dual_values);

/// Midpoint interpolation of primal values onto the dual grid:
/// dual(i) = (primal(i) + primal(i+1))/2 (periodic, optional per-period shift).
std::vector<cplx> interp_to_dual(const std::vector<cplx>& primal_values, cplx shift = 0.0);
std::vector<double> interp_to_dual(const std::vector<double>& primal_values);

UnitFrame frame_at(const Curve& c, int i);

/// Signed curvature Im(conj(z_e) z_ee)/|z_e|^3 at every node.
std::vector<double> curvature(const Curve& c);

} // namespace wavesheet
