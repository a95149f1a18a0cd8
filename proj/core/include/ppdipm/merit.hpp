#pragma once

#include <optional>

#include "ppdipm/params.hpp"
#include "ppdipm/primal_dual_point.hpp"
#include "ppdipm/problem.hpp"

namespace ppdipm {

inline bool in_box(const VectorXd& x) {
  return x.size() == 0 || x.lpNorm<Eigen::Infinity>() < 1.0;
}

// phi(x) = f + (rho/2) x'Sx + (1/2w)||c||^2 - tau sum log(1+x)+log(1-x).
// Throws std::domain_error outside the open box.
double eval_phi(const NlpProblem& p, const PenaltyParams& pr, const VectorXd& x);

// Same, but returns nullopt outside the domain (line-search comparisons
// treat that as "reject").
std::optional<double> try_eval_phi(const NlpProblem& p, const PenaltyParams& pr,
                                   const VectorXd& x);

VectorXd eval_lambda(const NlpProblem& p, const PenaltyParams& pr,
                     const VectorXd& x);

VectorXd eval_grad_phi(const NlpProblem& p, const PenaltyParams& pr,
                       const VectorXd& x);

MatrixXd eval_hess_phi(const NlpProblem& p, const PenaltyParams& pr,
                       const VectorXd& x);

// Inf-norm of the stacked KKT residual (2a)-(2d) at z; reporting only.
double kkt_residual(const NlpProblem& p, const PenaltyParams& pr,
                    const PrimalDualPoint& z);

}  // namespace ppdipm
