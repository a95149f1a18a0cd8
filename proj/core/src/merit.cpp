#include "ppdipm/merit.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace ppdipm {

namespace {

double barrier_sum(const VectorXd& x) {
  double s = 0.0;
  for (int i = 0; i < x.size(); ++i)
    s += std::log1p(x[i]) + std::log1p(-x[i]);
  return s;
}

VectorXd apply_S(const PenaltyParams& pr, const VectorXd& x) {
  if (pr.S.size() == 0) return x;
  return pr.S * x;
}

}  // namespace

void PenaltyParams::validate(int n) const {
  if (!(rho > 0.0 && omega > 0.0 && tau > 0.0 && tol > 0.0))
    throw std::invalid_argument("rho, omega, tau, tol must be positive");
  if (S.size() != 0) {
    if (S.rows() != n || S.cols() != n)
      throw std::invalid_argument("S has wrong dimensions");
    if ((S - S.transpose()).cwiseAbs().maxCoeff() >
        1e-12 * (1.0 + S.cwiseAbs().maxCoeff()))
      throw std::invalid_argument("S must be symmetric");
    Eigen::LLT<MatrixXd> llt(S);
    if (llt.info() != Eigen::Success)
      throw std::invalid_argument("S must be positive definite");
  }
}

double eval_phi(const NlpProblem& p, const PenaltyParams& pr,
                const VectorXd& x) {
  if (!in_box(x)) throw std::domain_error("eval_phi: x outside the open box");
  VectorXd cx = p.eval_c(x);
  return p.eval_f(x) + 0.5 * pr.rho * x.dot(apply_S(pr, x)) +
         0.5 / pr.omega * cx.squaredNorm() - pr.tau * barrier_sum(x);
}

std::optional<double> try_eval_phi(const NlpProblem& p, const PenaltyParams& pr,
                                   const VectorXd& x) {
  if (!in_box(x)) return std::nullopt;
  double v = eval_phi(p, pr, x);
  if (!std::isfinite(v)) return std::nullopt;
  return v;
}

VectorXd eval_lambda(const NlpProblem& p, const PenaltyParams& pr,
                     const VectorXd& x) {
  return -p.eval_c(x) / pr.omega;
}

VectorXd eval_grad_phi(const NlpProblem& p, const PenaltyParams& pr,
                       const VectorXd& x) {
  if (!in_box(x))
    throw std::domain_error("eval_grad_phi: x outside the open box");
  VectorXd lam = eval_lambda(p, pr, x);
  VectorXd g = pr.rho * apply_S(pr, x) + p.eval_grad_f(x) - p.eval_jac_c(x) * lam;
  for (int i = 0; i < x.size(); ++i)
    g[i] += -pr.tau / (1.0 + x[i]) + pr.tau / (1.0 - x[i]);
  return g;
}

MatrixXd eval_hess_phi(const NlpProblem& p, const PenaltyParams& pr,
                       const VectorXd& x) {
  if (!in_box(x))
    throw std::domain_error("eval_hess_phi: x outside the open box");
  VectorXd lam = eval_lambda(p, pr, x);
  MatrixXd J = p.eval_jac_c(x);
  MatrixXd H = p.eval_hess_lag(x, lam);
  MatrixXd S = pr.S.size() == 0 ? MatrixXd::Identity(p.n, p.n) : pr.S;
  MatrixXd out = pr.rho * S + H + (1.0 / pr.omega) * (J * J.transpose());
  for (int i = 0; i < x.size(); ++i) {
    double l = 1.0 + x[i], r = 1.0 - x[i];
    out(i, i) += pr.tau * (1.0 / (l * l) + 1.0 / (r * r));
  }
  return out;
}

double kkt_residual(const NlpProblem& p, const PenaltyParams& pr,
                    const PrimalDualPoint& z) {
  const VectorXd& x = z.x;
  VectorXd r1 = p.eval_grad_f(x) + pr.rho * apply_S(pr, x) -
                p.eval_jac_c(x) * z.lambda - z.mu_l + z.mu_r;
  VectorXd r2 = p.eval_c(x) + pr.omega * z.lambda;
  VectorXd r3 = z.mu_l.cwiseProduct(VectorXd::Ones(x.size()) + x).array() - pr.tau;
  VectorXd r4 = z.mu_r.cwiseProduct(VectorXd::Ones(x.size()) - x).array() - pr.tau;
  double res = r1.lpNorm<Eigen::Infinity>();
  if (r2.size() > 0) res = std::max(res, r2.lpNorm<Eigen::Infinity>());
  res = std::max(res, r3.lpNorm<Eigen::Infinity>());
  res = std::max(res, r4.lpNorm<Eigen::Infinity>());
  return res;
}

}  // namespace ppdipm
