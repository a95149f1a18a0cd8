#pragma once

#include <functional>
#include <optional>

#include "ppdipm/merit.hpp"
#include "ppdipm/params.hpp"
#include "ppdipm/problem.hpp"

namespace ppdipm {

enum class StepCriterion { armijo, relaxed };

struct LineSearchResult {
  bool ok = false;
  double alpha_total = 0.0;
  VectorXd x_new;
};

// phi(x + alpha v) <= phi(x) + gamma alpha grad_phi(x)'v, with a stage-one
// floating-point slack handled by the caller; out-of-domain counts as false.
bool armijo_criterion(const NlpProblem& p, const PenaltyParams& pr,
                      const VectorXd& x, double alpha, const VectorXd& v,
                      double phi_at_x, const VectorXd& grad_phi_at_x,
                      double gamma, double slack = 0.0);

// Condition 1: phi(x_a) < phi(x); or Condition 2: f(x_a) < f(x) and
// ||c(x_a)||_inf <= 10 max{||c(x)||_inf, 0.01}.
bool relaxed_criterion(const NlpProblem& p, const PenaltyParams& pr,
                       const VectorXd& x, double alpha, const VectorXd& v,
                       double slack = 0.0);

// Doubling/backtracking line search. The slope for Armijo is
// re-evaluated at each updated base point. A representation-noise slack of
// 16 eps (1+|phi|) is applied in the first stage only, so that the search
// does not fail when the achievable decrease is below rounding noise of phi;
// extension stages must strictly satisfy their criterion.
LineSearchResult line_search(const NlpProblem& p, const PenaltyParams& pr,
                             const VectorXd& x, const VectorXd& v,
                             StepCriterion criterion,
                             const LineSearchParams& ls);

struct WatchdogState {
  int ell = 5;
  VectorXd checkpoint_x;
  double checkpoint_phi = 0.0;
  int relaxed_steps_since_progress = 0;

  void reset(const VectorXd& x, double phi);
};

// Attempt x-tilde = x - hess_phi(x)^{-1} grad_phi(x); accept iff finite,
// interior and phi decreases (up to representation noise).
struct PolishResult {
  bool accepted = false;
  VectorXd x;
};
PolishResult newton_polish(const NlpProblem& p, const PenaltyParams& pr,
                           const VectorXd& x_k);

}  // namespace ppdipm
