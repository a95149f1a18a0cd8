#pragma once

#include <Eigen/Core>
#include <functional>
#include <string>
#include <vector>

namespace ppdipm {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Equality-constrained NLP on the fixed box [-1,1]^n:
//   min f(x)  s.t.  c(x) = 0,  -1 <= x <= 1.
// eval_jac_c returns grad-c with constraint gradients as columns (n x m).
struct NlpProblem {
  std::string name;
  int n = 0;
  int m = 0;
  std::function<double(const VectorXd&)> eval_f;
  std::function<VectorXd(const VectorXd&)> eval_c;
  std::function<VectorXd(const VectorXd&)> eval_grad_f;
  std::function<MatrixXd(const VectorXd&)> eval_jac_c;
  // Hessian of the Lagrangian w.r.t. x at (x, lambda).
  std::function<MatrixXd(const VectorXd&, const VectorXd&)> eval_hess_lag;
  // Optional user hook supplying an H-tilde candidate; empty = compute one.
  std::function<MatrixXd(const VectorXd&, const VectorXd&)> eval_hess_psd;
};

struct DerivativeReport {
  double grad_f_rel_err = 0.0;
  double jac_c_rel_err = 0.0;
  double hess_lag_rel_err = 0.0;
  double max_rel_err() const;
};

// Central finite differences with step eps^(1/3) against the analytic
// derivatives; lambda for the Hessian check is drawn from the given seed.
DerivativeReport check_derivatives(const NlpProblem& p, const VectorXd& x,
                                   unsigned seed = 0);

const NlpProblem& registry_get(const std::string& name);
std::vector<std::string> registry_names();

}  // namespace ppdipm
