#pragma once

#include <stdexcept>

namespace wavesheet {

/// Elliptic nonlinearity parameter. `one_minus_m` is carried explicitly because
/// solitary-wave fits drive m within ~1e-13 of 1, where the double representation
/// of m alone cannot resolve the complementary parameter.
struct EllipticParam {
    double m = 0.0;
    double one_minus_m = 1.0;
};

/// Complete elliptic integrals via the arithmetic-geometric mean.
/// The *_comp forms take s = 1 - m directly and stay accurate as m -> 1.
double elliptic_K(double m);
double elliptic_E(double m);
double elliptic_K_comp(double s);
double elliptic_E_comp(double s);

struct JacobiSC {
    double sn = 0.0;
    double cn = 1.0;
    double dn = 1.0;
};

/// Jacobi elliptic functions by the descending Landen (AGM) recursion.
JacobiSC jacobi_sc_comp(double u, double s);
double jacobi_cn(double u, double m);
double jacobi_cn_comp(double u, double s);

/// Parameters of the periodic solitary-wave profile
/// eta(x) = eta2 + A*cn^2(2K x / L, m) translating at speed c.
struct CnoidalWave {
    EllipticParam p;
    double K = 0.0, E = 0.0;
    double eta1 = 0.0, eta2 = 0.0, eta3 = 0.0;
    double c = 0.0;
    double L = 0.0, A = 0.0, h0 = 0.0, g = 0.0;

    double eta(double x) const;
    double eta_x(double x) const;
};

/// Solve A L^2 = (16/3) m K(m)^2 (h0^2/g) c(m)^2 for m by bisection in log(1-m).
/// Throws std::runtime_error (reporting both endpoint residuals) if the bracket
/// carries no sign change.
EllipticParam solve_cnoidal_m(double L_period, double A, double h0, double g);

/// Convenience: solve for m and assemble the full wave description.
CnoidalWave make_cnoidal(double L_period, double A, double h0, double g);

} // namespace wavesheet
