#include "wavesheet/operators.hpp"

#include "wavesheet/kernels.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>

namespace wavesheet {

namespace {

// Re/Im of cot_kernel(target - source) * weight, the building block of every
// dense layer-potential matrix below.
inline double re_entry(double L, cplx dz, cplx w) {
    return (cplx(0.0, -0.5 / L) * cot_raw(L, dz) * w).real();
}
inline double im_entry(double L, cplx dz, cplx w) {
    return (cplx(0.0, -0.5 / L) * cot_raw(L, dz) * w).imag();
}

void require_curve(const Curve& c, const char* who) {
    if (c.empty()) throw std::invalid_argument(std::string(who) + ": empty curve");
}

// Largest-singular-value estimate by 20 rounds of power iteration on R^T R,
// deterministic start.
double spectral_norm_estimate(const DenseOperator& R, int steps = 20) {
    const Eigen::Index n = R.rows();
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    VecX v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = unif(rng);
    v.normalize();
    double sigma = 0.0;
    for (int s = 0; s < steps; ++s) {
        VecX w = R * v;
        sigma = w.norm();
        v = R.transpose() * w;
        const double nv = v.norm();
        if (nv == 0.0) return 0.0;
        v /= nv;
    }
    return sigma;
}

struct FixedPointEngine {
    int max_iterations = 300;
    double rel_tol = 1e-12;

    // Solves A x = b given the matvec of A and the action of the
    // preconditioner inverse; the iteration is x <- x + 2 P^{-1} (b - A x).
    VecX run(const std::function<VecX(const VecX&)>& matvec,
             const std::function<VecX(const VecX&)>& precond_inv, const VecX& b,
             SchurSolveReport* report, bool* stalled) const {
        *stalled = false;
        const double bnorm = b.lpNorm<Eigen::Infinity>();
        if (bnorm == 0.0) {
            if (report) {
                report->iterations = 0;
                report->converged = true;
            }
            return VecX::Zero(b.size());
        }
        const double tol = rel_tol * bnorm;
        VecX x = 2.0 * precond_inv(b);
        double prev_delta = std::numeric_limits<double>::infinity();
        int grew = 0;
        for (int it = 1; it <= max_iterations; ++it) {
            VecX corr = 2.0 * precond_inv(b - matvec(x));
            x += corr;
            const double delta = corr.lpNorm<Eigen::Infinity>();
            const double rho = delta / prev_delta;
            // The observed contraction ratio bounds the remaining error by
            // delta*rho/(1-rho); it needs two successive corrections to be
            // meaningful, so never certify convergence off the first step.
            const bool certified =
                delta == 0.0 ||
                (it >= 2 && std::isfinite(rho) && rho < 1.0 && delta * rho / (1.0 - rho) < tol);
            if (certified) {
                if (report) {
                    report->iterations = it;
                    report->converged = true;
                }
                return x;
            }
            if (std::isfinite(rho) && rho >= 1.0 && it > 2) {
                if (++grew >= 3) break; // diverging: hand off to the dense fallback
            } else {
                grew = 0;
            }
            prev_delta = delta;
        }
        *stalled = true;
        return x;
    }
};

} // namespace

DenseOperator assemble_AstarB(const Curve& bottom) {
    require_curve(bottom, "assemble_AstarB");
    const int n = bottom.n;
    const double L = bottom.x_period;
    const double de = bottom.de;
    DenseOperator A(n, n);
    for (int i = 0; i < n; ++i) {
        const cplx zi = bottom.z[i];
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            A(i, j) = de * re_entry(L, zi - bottom.z[j], bottom.z_e[j]);
        }
        // Continuous extension of the kernel at coincident points:
        // Re[z_ee / (4*pi*i*z_e)], weighted by the node spacing.
        const cplx diag_kernel = bottom.z_ee[i] / (cplx(0.0, 4.0 * M_PI) * bottom.z_e[i]);
        A(i, i) = 0.5 - de * diag_kernel.real();
    }
    return A;
}

DenseOperator assemble_AstarS(const Curve& surface, double atwood) {
    require_curve(surface, "assemble_AstarS");
    const int n = surface.n;
    const double L = surface.x_period;
    const double de = surface.de;
    DenseOperator A(n, n);
    for (int i = 0; i < n; ++i) {
        const cplx zi = surface.z[i];
        double row_sum = 0.0;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const double v = atwood * de * re_entry(L, zi - surface.z[j], surface.z_e[j]);
            A(i, j) = v;
            row_sum += v;
        }
        // Second-derivative-free diagonal: the punctured row sum approximates
        // the same continuous extension, so the row of the shifted matrix
        // A - I/2 sums to zero by construction.
        A(i, i) = 0.5 - row_sum;
    }
    return A;
}

DenseOperator assemble_AS(const Curve& surface, double atwood) {
    require_curve(surface, "assemble_AS");
    const int n = surface.n;
    const double L = surface.x_period;
    const double de = surface.de;
    DenseOperator A(n, n);
    for (int i = 0; i < n; ++i) {
        const cplx zi = surface.z[i];
        const cplx zei = surface.z_e[i];
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            A(i, j) = atwood * de * re_entry(L, zi - surface.z[j], zei);
        }
        A(i, i) = 0.5; // the target-tangent kernel is odd around the diagonal
    }
    return A;
}

DenseOperator assemble_BB(const Curve& bottom, const Curve& bottom_dual) {
    require_curve(bottom, "assemble_BB");
    require_curve(bottom_dual, "assemble_BB(dual)");
    if (bottom_dual.n != bottom.n)
        throw std::invalid_argument("assemble_BB: dual curve size mismatch");
    const int n = bottom.n;
    const double L = bottom.x_period;
    const double de = bottom.de;
    DenseOperator B(n, n);
    for (int i = 0; i < n - 1; ++i) {
        const cplx zti = bottom_dual.z[i];
        const cplx ztei = bottom_dual.z_e[i];
        for (int j = 0; j < n; ++j) B(i, j) = de * im_entry(L, zti - bottom.z[j], ztei);
    }
    // Circulation row: trapezoid rule for the total bottom circulation.
    for (int j = 0; j < n; ++j) B(n - 1, j) = de;
    return B;
}

DenseOperator assemble_CD(const Curve& surface, const Curve& bottom, double atwood) {
    require_curve(surface, "assemble_CD");
    require_curve(bottom, "assemble_CD(bottom)");
    const double L = surface.x_period;
    DenseOperator C(surface.n, bottom.n);
    for (int i = 0; i < surface.n; ++i) {
        const cplx zi = surface.z[i];
        for (int j = 0; j < bottom.n; ++j)
            C(i, j) = atwood * bottom.de * re_entry(L, zi - bottom.z[j], bottom.z_e[j]);
    }
    return C;
}

DenseOperator assemble_DD(const Curve& surface, const Curve& bottom) {
    require_curve(surface, "assemble_DD(surface)");
    require_curve(bottom, "assemble_DD");
    const double L = surface.x_period;
    DenseOperator D(bottom.n, surface.n);
    for (int i = 0; i < bottom.n; ++i) {
        const cplx zi = bottom.z[i];
        for (int j = 0; j < surface.n; ++j)
            D(i, j) = surface.de * re_entry(L, zi - surface.z[j], surface.z_e[j]);
    }
    return D;
}

DenseOperator assemble_CV(const Curve& surface, const Curve& bottom, double atwood) {
    require_curve(surface, "assemble_CV");
    require_curve(bottom, "assemble_CV(bottom)");
    const double L = surface.x_period;
    DenseOperator C(surface.n, bottom.n);
    for (int i = 0; i < surface.n; ++i) {
        const cplx zi = surface.z[i];
        const cplx zei = surface.z_e[i];
        for (int j = 0; j < bottom.n; ++j)
            C(i, j) = atwood * bottom.de * re_entry(L, zi - bottom.z[j], zei);
    }
    return C;
}

DenseOperator assemble_DV(const Curve& surface, const Curve& bottom, const Curve& bottom_dual) {
    require_curve(surface, "assemble_DV(surface)");
    require_curve(bottom, "assemble_DV");
    require_curve(bottom_dual, "assemble_DV(dual)");
    if (bottom_dual.n != bottom.n)
        throw std::invalid_argument("assemble_DV: dual curve size mismatch");
    const double L = surface.x_period;
    DenseOperator D = DenseOperator::Zero(bottom.n, surface.n);
    for (int i = 0; i < bottom.n - 1; ++i) {
        const cplx zti = bottom_dual.z[i];
        const cplx ztei = bottom_dual.z_e[i];
        for (int j = 0; j < surface.n; ++j)
            D(i, j) = surface.de * im_entry(L, zti - surface.z[j], ztei);
    }
    return D; // last row stays zero: the circulation row carries no surface term
}

std::pair<VecX, NeumannSolveReport> neumann_solve(const DenseOperator& a_star, const VecX& rhs,
                                                  double tol) {
    if (a_star.rows() != a_star.cols() || a_star.rows() != rhs.size())
        throw std::invalid_argument("neumann_solve: shape mismatch");
    NeumannSolveReport rep;
    const double rhs_norm = rhs.lpNorm<Eigen::Infinity>();
    if (tol <= 0.0) tol = 1e-10 * rhs_norm;
    const Eigen::Index n = a_star.rows();
    DenseOperator R = -2.0 * a_star;
    R.diagonal().array() += 1.0;
    rep.norm_R = spectral_norm_estimate(R);
    if (rhs_norm == 0.0) {
        rep.converged = true;
        return {VecX::Zero(n), rep};
    }
    const double denom = std::max(1.0 - rep.norm_R, 1e-16);
    VecX x = 2.0 * rhs;
    for (int it = 1; it <= 500; ++it) {
        VecX xn = R * x + 2.0 * rhs;
        const double delta = (xn - x).lpNorm<Eigen::Infinity>();
        x.swap(xn);
        rep.iterations = it;
        rep.residual_bound = delta / denom;
        if (rep.norm_R < 1.0 && rep.residual_bound < tol) {
            rep.converged = true;
            break;
        }
    }
    return {x, rep};
}

DenseOperator rank_one_inverse(const VecX& a) {
    const double denom = 1.0 + a.sum();
    if (std::abs(denom) <= 1e-8)
        throw std::runtime_error("rank_one_inverse: 1 + sum(a) is numerically singular");
    DenseOperator inv = DenseOperator::Identity(a.size(), a.size());
    inv.noalias() -= VecX::Ones(a.size()) * (a.transpose() / denom);
    return inv;
}

VecX solve_calA_D(const DenseOperator& a_star_s, const DenseOperator& c_d,
                  const DenseOperator& a_star_b, const DenseOperator& d_d, const VecX& a_precond,
                  const VecX& rhs, SchurSolveReport* report) {
    const Eigen::Index ns = a_star_s.rows();
    const Eigen::Index nb = a_star_b.rows();
    if (rhs.size() != ns || c_d.rows() != ns || c_d.cols() != nb || d_d.rows() != nb ||
        d_d.cols() != ns || a_precond.size() != ns)
        throw std::invalid_argument("solve_calA_D: shape mismatch");

    DenseOperator R_B = -2.0 * a_star_b;
    R_B.diagonal().array() += 1.0;
    const double norm_RB = spectral_norm_estimate(R_B);
    std::optional<Eigen::PartialPivLU<DenseOperator>> bottom_lu;
    if (norm_RB >= 0.995) bottom_lu.emplace(a_star_b);

    auto bottom_solve = [&](const VecX& y) -> VecX {
        if (bottom_lu) return bottom_lu->solve(y);
        const double ynorm = y.lpNorm<Eigen::Infinity>();
        if (ynorm == 0.0) return VecX::Zero(nb);
        VecX x = 2.0 * y;
        const double tol = 1e-13 * ynorm;
        const double denom = 1.0 - norm_RB;
        for (int it = 0; it < 500; ++it) {
            VecX xn = R_B * x + 2.0 * y;
            const double delta = (xn - x).lpNorm<Eigen::Infinity>();
            x.swap(xn);
            if (delta / denom < tol) break;
        }
        return x;
    };
    auto matvec = [&](const VecX& x) -> VecX {
        return a_star_s * x - c_d * bottom_solve(d_d * x);
    };
    const double asum = 1.0 + a_precond.sum();
    if (std::abs(asum) <= 1e-8)
        throw std::runtime_error("solve_calA_D: singular rank-one preconditioner");
    auto precond_inv = [&](const VecX& v) -> VecX {
        return v - VecX::Constant(ns, a_precond.dot(v) / asum);
    };

    FixedPointEngine engine;
    SchurSolveReport rep;
    bool stalled = false;
    VecX x = engine.run(matvec, precond_inv, rhs, &rep, &stalled);
    if (stalled) {
        if (!bottom_lu) bottom_lu.emplace(a_star_b);
        DenseOperator schur = a_star_s - c_d * bottom_lu->solve(d_d);
        x = Eigen::PartialPivLU<DenseOperator>(schur).solve(rhs);
        rep.converged = true;
        rep.lu_fallback = true;
    }
    if (report) *report = rep;
    return x;
}

VecX solve_calA_V(const DenseOperator& a_s, const DenseOperator& c_v,
                  const Eigen::PartialPivLU<DenseOperator>& b_b_lu, const DenseOperator& d_v,
                  const VecX& rhs, SchurSolveReport* report) {
    const Eigen::Index ns = a_s.rows();
    const Eigen::Index nb = d_v.rows();
    if (rhs.size() != ns || c_v.rows() != ns || c_v.cols() != nb || d_v.cols() != ns)
        throw std::invalid_argument("solve_calA_V: shape mismatch");

    auto matvec = [&](const VecX& x) -> VecX { return a_s * x - c_v * b_b_lu.solve(d_v * x); };
    auto precond_inv = [](const VecX& v) -> VecX { return v; };

    FixedPointEngine engine;
    SchurSolveReport rep;
    bool stalled = false;
    VecX x = engine.run(matvec, precond_inv, rhs, &rep, &stalled);
    if (stalled) {
        DenseOperator schur = a_s - c_v * b_b_lu.solve(d_v);
        x = Eigen::PartialPivLU<DenseOperator>(schur).solve(rhs);
        rep.converged = true;
        rep.lu_fallback = true;
    }
    if (report) *report = rep;
    return x;
}

} // namespace wavesheet
