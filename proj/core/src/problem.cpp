#include "ppdipm/problem.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>

namespace ppdipm {

double DerivativeReport::max_rel_err() const {
  return std::max({grad_f_rel_err, jac_c_rel_err, hess_lag_rel_err});
}

namespace {

double rel_err(const MatrixXd& got, const MatrixXd& want) {
  if (want.size() == 0) return 0.0;
  double scale = 1.0 + want.cwiseAbs().maxCoeff();
  return (got - want).cwiseAbs().maxCoeff() / scale;
}

NlpProblem make_linear_rate_example() {
  NlpProblem p;
  p.name = "linear_rate_example";
  p.n = 1;
  p.m = 0;
  p.eval_f = [](const VectorXd& x) { return -0.5 * x[0] * x[0]; };
  p.eval_c = [](const VectorXd&) { return VectorXd(0); };
  p.eval_grad_f = [](const VectorXd& x) {
    VectorXd g(1);
    g[0] = -x[0];
    return g;
  };
  p.eval_jac_c = [](const VectorXd&) { return MatrixXd(1, 0); };
  p.eval_hess_lag = [](const VectorXd&, const VectorXd&) {
    MatrixXd h(1, 1);
    h(0, 0) = -1.0;
    return h;
  };
  return p;
}

NlpProblem make_box_lp() {
  NlpProblem p;
  p.name = "box_lp";
  p.n = 1;
  p.m = 0;
  p.eval_f = [](const VectorXd& x) { return x[0]; };
  p.eval_c = [](const VectorXd&) { return VectorXd(0); };
  p.eval_grad_f = [](const VectorXd&) { return VectorXd::Ones(1); };
  p.eval_jac_c = [](const VectorXd&) { return MatrixXd(1, 0); };
  p.eval_hess_lag = [](const VectorXd&, const VectorXd&) {
    return MatrixXd::Zero(1, 1);
  };
  return p;
}

NlpProblem make_circle_equality() {
  const double r = 0.5;
  NlpProblem p;
  p.name = "circle_equality";
  p.n = 2;
  p.m = 1;
  p.eval_f = [](const VectorXd& x) { return x[0] * x[1]; };
  p.eval_c = [r](const VectorXd& x) {
    VectorXd c(1);
    c[0] = x[0] * x[0] + x[1] * x[1] - r * r;
    return c;
  };
  p.eval_grad_f = [](const VectorXd& x) {
    VectorXd g(2);
    g[0] = x[1];
    g[1] = x[0];
    return g;
  };
  p.eval_jac_c = [](const VectorXd& x) {
    MatrixXd j(2, 1);
    j(0, 0) = 2.0 * x[0];
    j(1, 0) = 2.0 * x[1];
    return j;
  };
  p.eval_hess_lag = [](const VectorXd&, const VectorXd& lam) {
    MatrixXd h(2, 2);
    h << 0.0, 1.0, 1.0, 0.0;
    h -= lam[0] * 2.0 * MatrixXd::Identity(2, 2);
    return h;
  };
  return p;
}

NlpProblem make_convex_qp(int k, unsigned seed) {
  const int n = k;
  const int m = std::max(1, k - 1);
  std::mt19937 rng(seed + 1000u * static_cast<unsigned>(k));
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  MatrixXd B(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) B(i, j) = gauss(rng);
  VectorXd xt(n);
  for (int i = 0; i < n; ++i) xt[i] = 0.3 * (2.0 * unif(rng) - 1.0);
  MatrixXd W(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) W(i, j) = gauss(rng);
  MatrixXd V = Eigen::HouseholderQR<MatrixXd>(W).householderQ();
  VectorXd eigs(n);
  for (int i = 0; i < n; ++i) eigs[i] = 1.0 + 2.0 * unif(rng);
  MatrixXd G = V * eigs.asDiagonal() * V.transpose();
  G = 0.5 * (G + G.transpose()).eval();
  VectorXd g = -G * xt;
  VectorXd d = B * xt;

  NlpProblem p;
  p.name = "convex_qp_" + std::to_string(k);
  p.n = n;
  p.m = m;
  p.eval_f = [G, g](const VectorXd& x) {
    return 0.5 * x.dot(G * x) + g.dot(x);
  };
  p.eval_c = [B, d](const VectorXd& x) { return (B * x - d).eval(); };
  p.eval_grad_f = [G, g](const VectorXd& x) { return (G * x + g).eval(); };
  p.eval_jac_c = [B](const VectorXd&) { return MatrixXd(B.transpose()); };
  p.eval_hess_lag = [G](const VectorXd&, const VectorXd&) { return G; };
  return p;
}

NlpProblem make_overdetermined() {
  const double a = 0.2, b = -0.1;
  NlpProblem p;
  p.name = "overdetermined";
  p.n = 2;
  p.m = 3;
  p.eval_f = [](const VectorXd& x) {
    return 0.5 * ((x[0] - 0.5) * (x[0] - 0.5) + (x[1] + 0.4) * (x[1] + 0.4));
  };
  p.eval_c = [a, b](const VectorXd& x) {
    VectorXd c(3);
    c << x[0] - a, x[0] - a, x[1] - b;
    return c;
  };
  p.eval_grad_f = [](const VectorXd& x) {
    VectorXd g(2);
    g << x[0] - 0.5, x[1] + 0.4;
    return g;
  };
  p.eval_jac_c = [](const VectorXd&) {
    MatrixXd j(2, 3);
    j << 1.0, 1.0, 0.0, 0.0, 0.0, 1.0;
    return j;
  };
  p.eval_hess_lag = [](const VectorXd&, const VectorXd&) {
    return MatrixXd::Identity(2, 2).eval();
  };
  return p;
}

NlpProblem make_dependent_jac() {
  NlpProblem p;
  p.name = "dependent_jac";
  p.n = 3;
  p.m = 2;
  p.eval_f = [](const VectorXd& x) { return 0.5 * x.squaredNorm() + 0.1 * x[0]; };
  p.eval_c = [](const VectorXd& x) {
    VectorXd c(2);
    c << x[0] + x[1], 2.0 * (x[0] + x[1]);
    return c;
  };
  p.eval_grad_f = [](const VectorXd& x) {
    VectorXd g = x;
    g[0] += 0.1;
    return g;
  };
  p.eval_jac_c = [](const VectorXd&) {
    MatrixXd j(3, 2);
    j << 1.0, 2.0, 1.0, 2.0, 0.0, 0.0;
    return j;
  };
  p.eval_hess_lag = [](const VectorXd&, const VectorXd&) {
    return MatrixXd::Identity(3, 3).eval();
  };
  return p;
}

const std::map<std::string, NlpProblem>& registry() {
  static const std::map<std::string, NlpProblem> reg = [] {
    std::map<std::string, NlpProblem> r;
    for (NlpProblem p :
         {make_linear_rate_example(), make_box_lp(), make_circle_equality(),
          make_convex_qp(2, 42), make_convex_qp(3, 42), make_convex_qp(5, 42),
          make_overdetermined(), make_dependent_jac()}) {
      r.emplace(p.name, std::move(p));
    }
    return r;
  }();
  return reg;
}

}  // namespace

const NlpProblem& registry_get(const std::string& name) {
  const auto& reg = registry();
  auto it = reg.find(name);
  if (it == reg.end()) {
    std::string msg = "unknown problem '" + name + "'; available:";
    for (const auto& kv : reg) msg += " " + kv.first;
    throw std::out_of_range(msg);
  }
  return it->second;
}

std::vector<std::string> registry_names() {
  std::vector<std::string> names;
  for (const auto& kv : registry()) names.push_back(kv.first);
  return names;
}

DerivativeReport check_derivatives(const NlpProblem& p, const VectorXd& x,
                                   unsigned seed) {
  const double h = std::cbrt(std::numeric_limits<double>::epsilon());
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  VectorXd lam(p.m);
  for (int i = 0; i < p.m; ++i) lam[i] = gauss(rng);

  DerivativeReport rep;
  VectorXd fd_grad(p.n);
  MatrixXd fd_jac(p.n, p.m);
  MatrixXd fd_hess(p.n, p.n);
  for (int i = 0; i < p.n; ++i) {
    VectorXd xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    fd_grad[i] = (p.eval_f(xp) - p.eval_f(xm)) / (2.0 * h);
    fd_jac.row(i) = ((p.eval_c(xp) - p.eval_c(xm)) / (2.0 * h)).transpose();
    VectorXd gl_p = p.eval_grad_f(xp) - p.eval_jac_c(xp) * lam;
    VectorXd gl_m = p.eval_grad_f(xm) - p.eval_jac_c(xm) * lam;
    fd_hess.col(i) = (gl_p - gl_m) / (2.0 * h);
  }
  rep.grad_f_rel_err = rel_err(fd_grad, p.eval_grad_f(x));
  rep.jac_c_rel_err = rel_err(fd_jac, p.eval_jac_c(x));
  MatrixXd hl = p.eval_hess_lag(x, lam);
  rep.hess_lag_rel_err = rel_err(0.5 * (fd_hess + fd_hess.transpose()), hl);
  return rep;
}

}  // namespace ppdipm
