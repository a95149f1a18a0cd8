#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ppdipm/params.hpp"
#include "ppdipm/primal_dual_point.hpp"
#include "ppdipm/problem.hpp"

namespace ppdipm {

// Penalty-barrier convex QP
//   q(x) = 1/2 x'Qx + c_lin'x + (1/2w)||Ax - b||^2 - tau sum log(1 +- x)
// assembled at an expansion point x_ref so that grad q(x_ref) = grad phi(x_ref).
struct SubQp {
  MatrixXd Q;       // H-tilde + rho S
  VectorXd c_lin;   // grad f(x_k) - H-tilde x_k
  MatrixXd A;       // grad c(x_k)' (m x n)
  VectorXd b;       // -c(x_k) + A x_k
  double omega = 0.0;
  double tau = 0.0;
  // Expansion point and c(x_ref). The penalty residual is evaluated as
  // A (x - x_ref) + c_ref, algebraically equal to A x - b but exact at x_ref;
  // computing A x - b directly loses the gradient-matching identity to
  // rounding of order eps*|A x_ref|/omega.
  VectorXd x_ref;
  VectorXd c_ref;

  int n() const { return static_cast<int>(c_lin.size()); }
  int m() const { return static_cast<int>(b.size()); }
};

SubQp assemble_subqp(const NlpProblem& p, const PenaltyParams& pr,
                     const VectorXd& x_k, const MatrixXd& h_tilde);

// A x - b, evaluated through the expansion point.
VectorXd penalty_residual(const SubQp& sub, const VectorXd& x);

double eval_q(const SubQp& sub, const VectorXd& x);
VectorXd eval_grad_q(const SubQp& sub, const VectorXd& x);

// psi_nu(x) = (1/nu)(quadratic part of q) - barrier; value, gradient, Hessian.
struct PsiEval {
  double value;
  VectorXd grad;
  MatrixXd hess;
};
PsiEval eval_psi_nu(const SubQp& sub, double nu, const VectorXd& x);

// Centering phase: from nu=1, x=0, grow nu by 10 until
// ||grad psi_nu(0)||_2 < 0.25, then 10 undamped Newton steps.
// Returns (x, nu); throws std::runtime_error if a step leaves the box.
std::pair<VectorXd, double> initial_centering(const SubQp& sub);

// Stacked residual F_nu(z) of size n+m+n+n.
VectorXd eval_F(const SubQp& sub, double nu, const PrimalDualPoint& z);

// Solves DF_nu(z) dz = rhs by Schur reduction to the SPD system
// Sigma dx = r1 + (1/w) A' r2 + r3/(1+x) - r4/(1-x),
// Sigma = Q + (1/w) A'A + diag(mu_l/(1+x)) + diag(mu_r/(1-x)).
VectorXd solve_kkt(const SubQp& sub, const PrimalDualPoint& z,
                   const VectorXd& rhs);

struct InnerSolveStats {
  double centering_nu = 0.0;
  int pd_iterations = 0;
  double final_residual = 0.0;
  struct IterRecord {
    double nu;
    double alpha;
    double residual;
  };
  std::vector<IterRecord> trace;
};

struct InnerSolveResult {
  bool ok = false;
  std::string error;
  VectorXd x_hat;
  PrimalDualPoint z;
  InnerSolveStats stats;
};

// Initial centering, then Mehrotra predictor-corrector on F_nu.
InnerSolveResult solve_subqp(const SubQp& sub, double inner_tol,
                             int iteration_cap = 200);

// Inner tolerance used by the outer driver.
double inner_tolerance(const PenaltyParams& pr, const SubQp& sub);

}  // namespace ppdipm
