#include "ppdipm/globalization.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

namespace ppdipm {

namespace {
constexpr double kEps = std::numeric_limits<double>::epsilon();

double noise_slack(double phi) { return 16.0 * kEps * (1.0 + std::abs(phi)); }
}  // namespace

void WatchdogState::reset(const VectorXd& x, double phi) {
  checkpoint_x = x;
  checkpoint_phi = phi;
  relaxed_steps_since_progress = 0;
}

bool armijo_criterion(const NlpProblem& p, const PenaltyParams& pr,
                      const VectorXd& x, double alpha, const VectorXd& v,
                      double phi_at_x, const VectorXd& grad_phi_at_x,
                      double gamma, double slack) {
  auto phi_t = try_eval_phi(p, pr, x + alpha * v);
  if (!phi_t) return false;
  return *phi_t <= phi_at_x + gamma * alpha * grad_phi_at_x.dot(v) + slack;
}

bool relaxed_criterion(const NlpProblem& p, const PenaltyParams& pr,
                       const VectorXd& x, double alpha, const VectorXd& v,
                       double slack) {
  VectorXd xt = x + alpha * v;
  if (!in_box(xt)) return false;
  auto phi_t = try_eval_phi(p, pr, xt);
  if (!phi_t) return false;
  double phi_x = eval_phi(p, pr, x);
  if (*phi_t < phi_x + slack) return true;  // Condition 1
  if (p.eval_f(xt) < p.eval_f(x)) {        // Condition 2
    if (p.m == 0) return true;
    double cx = p.eval_c(x).lpNorm<Eigen::Infinity>();
    double ct = p.eval_c(xt).lpNorm<Eigen::Infinity>();
    return ct <= 10.0 * std::max(cx, 0.01);
  }
  return false;
}

LineSearchResult line_search(const NlpProblem& p, const PenaltyParams& pr,
                             const VectorXd& x, const VectorXd& v,
                             StepCriterion criterion,
                             const LineSearchParams& ls) {
  LineSearchResult out;
  double alpha_max = 1.0;
  double alpha = 0.0;
  VectorXd xc = x;
  double phi_c = eval_phi(p, pr, x);
  VectorXd g_c = eval_grad_phi(p, pr, x);
  // Non-descent at entry signals an upstream problem (M-tilde is PSD by
  // construction, so v must be a descent direction).
  if (g_c.dot(v) >= 0.0) return out;

  for (int stage = 1; stage <= ls.max_doublings; ++stage) {
    double slack = stage == 1 ? noise_slack(phi_c) : 0.0;
    double ac = alpha_max;
    bool accepted = false;
    for (int nb = 0; nb <= ls.max_backtracks; ++nb) {
      bool ok = criterion == StepCriterion::armijo
                    ? armijo_criterion(p, pr, xc, ac, v, phi_c, g_c, ls.gamma,
                                       slack)
                    : relaxed_criterion(p, pr, xc, ac, v, slack);
      if (ok && in_box(xc + ac * v)) {
        accepted = true;
        break;
      }
      ac *= ls.beta;
    }
    if (!accepted) {
      if (alpha == 0.0) return out;  // failure, no step found
      break;
    }
    xc += ac * v;
    alpha += ac;
    phi_c = eval_phi(p, pr, xc);
    g_c = eval_grad_phi(p, pr, xc);
    if (alpha < alpha_max) break;
    alpha_max *= 2.0;
  }
  out.ok = true;
  out.alpha_total = alpha;
  out.x_new = xc;
  return out;
}

PolishResult newton_polish(const NlpProblem& p, const PenaltyParams& pr,
                           const VectorXd& x_k) {
  PolishResult out;
  out.x = x_k;
  MatrixXd H = eval_hess_phi(p, pr, x_k);
  VectorXd g = eval_grad_phi(p, pr, x_k);
  Eigen::FullPivLU<MatrixXd> lu(H);
  if (!lu.isInvertible()) return out;
  VectorXd xt = x_k - lu.solve(g);
  if (!xt.allFinite() || !in_box(xt)) return out;
  double phi_x = eval_phi(p, pr, x_k);
  auto phi_t = try_eval_phi(p, pr, xt);
  if (!phi_t || !(*phi_t < phi_x + noise_slack(phi_x))) return out;
  out.accepted = true;
  out.x = xt;
  return out;
}

}  // namespace ppdipm
