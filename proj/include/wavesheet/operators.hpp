#pragma once

#include "wavesheet/geometry.hpp"

#include <Eigen/Dense>

namespace wavesheet {

using DenseOperator = Eigen::MatrixXd;
using VecX = Eigen::VectorXd;

struct NeumannSolveReport {
    int iterations = 0;
    double residual_bound = 0.0;
    double norm_R = 0.0; // power-iteration estimate of ||I - 2 A*||
    bool converged = false;
};

struct SchurSolveReport {
    int iterations = 0;
    bool converged = false;
    bool lu_fallback = false;
};

/// Double-layer Neumann matrix on the bottom curve:
/// off-diagonal de*Re[cot_kernel(z_i - z_j) * z_e(j)],
/// diagonal 1/2 - de*Re[z_ee/(4*pi*i*z_e)] (continuous extension of the kernel).
DenseOperator assemble_AstarB(const Curve& bottom);

/// Same operator on the (moving) surface, scaled by the Atwood number, with the
/// second-derivative-free diagonal 1/2 - sum of the off-diagonal row entries.
DenseOperator assemble_AstarS(const Curve& surface, double atwood);

/// Adjoint-flavored surface matrix: off-diagonal carries the *target* tangent
/// z_e(i); diagonal exactly 1/2.
DenseOperator assemble_AS(const Curve& surface, double atwood);

/// Bottom circulation-density matrix: rows 0..n-2 evaluate the normal trace at
/// the midpoint dual nodes, the last row integrates the density (circulation).
DenseOperator assemble_BB(const Curve& bottom, const Curve& bottom_dual);

/// Cross-coupling blocks between surface and bottom.
DenseOperator assemble_CD(const Curve& surface, const Curve& bottom, double atwood);
DenseOperator assemble_DD(const Curve& surface, const Curve& bottom);
DenseOperator assemble_CV(const Curve& surface, const Curve& bottom, double atwood);
DenseOperator assemble_DV(const Curve& surface, const Curve& bottom, const Curve& bottom_dual);

/// Solve A* x = rhs by the fixed point x <- (I - 2A*)x + 2 rhs, with the
/// a-posteriori error bound ||x_{n+1}-x_n||/(1-||R||).
std::pair<VecX, NeumannSolveReport> neumann_solve(const DenseOperator& a_star, const VecX& rhs,
                                                  double tol);

/// Exact inverse of I + ones*a^T (every row gets the same pattern a_j):
/// (I + 1 a^T)^{-1} = I - 1 a^T / (1 + sum a).
DenseOperator rank_one_inverse(const VecX& a);

/// Solve (AstarS - CD * AstarB^{-1} * DD) x = rhs.
/// Preconditioned fixed point x <- x + 2*Atilde_inv*(rhs - A x) where
/// Atilde = I + ones*a^T; falls back to a dense LU build of the Schur
/// complement if the iteration stalls.
VecX solve_calA_D(const DenseOperator& a_star_s, const DenseOperator& c_d,
                  const DenseOperator& a_star_b, const DenseOperator& d_d, const VecX& a_precond,
                  const VecX& rhs, SchurSolveReport* report = nullptr);

/// Solve (AS - CV * BB^{-1} * DV) x = rhs with BB prefactorized; the rank-one
/// far-field correction vanishes identically here (the circulation row of BB
/// makes ones^T BB^{-1} hit only the zero last row of DV), so the fixed point
/// is x <- x + 2*(rhs - A x).
VecX solve_calA_V(const DenseOperator& a_s, const DenseOperator& c_v,
                  const Eigen::PartialPivLU<DenseOperator>& b_b_lu, const DenseOperator& d_v,
                  const VecX& rhs, SchurSolveReport* report = nullptr);

} // namespace wavesheet
