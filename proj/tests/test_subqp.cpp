#include <algorithm>
#include <random>

#include "doctest.h"
#include "ppdipm/merit.hpp"
#include "ppdipm/problem.hpp"
#include "ppdipm/psd_projection.hpp"
#include "ppdipm/subqp.hpp"

#include <Eigen/Dense>

using namespace ppdipm;

namespace {

VectorXd random_interior(int n, std::mt19937& rng, double radius = 0.9) {
  std::uniform_real_distribution<double> unif(-radius, radius);
  VectorXd x(n);
  for (int i = 0; i < n; ++i) x[i] = unif(rng);
  return x;
}

SubQp random_subqp(int n, int m, std::mt19937& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  MatrixXd B(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) B(i, j) = gauss(rng);
  SubQp s;
  s.Q = B * B.transpose() + 0.1 * MatrixXd::Identity(n, n);
  s.c_lin = VectorXd(n);
  for (int i = 0; i < n; ++i) s.c_lin[i] = gauss(rng);
  s.A = MatrixXd(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) s.A(i, j) = gauss(rng);
  s.b = VectorXd(m);
  for (int i = 0; i < m; ++i) s.b[i] = 0.1 * gauss(rng);
  s.omega = 1e-7;
  s.tau = 1e-7;
  s.x_ref = VectorXd::Zero(n);
  s.c_ref = -s.b;
  return s;
}

// Derivative of q written out independently of eval_grad_q.
double q_prime_1d(const SubQp& s, double x) {
  double g = s.Q(0, 0) * x + s.c_lin[0];
  for (int i = 0; i < s.m(); ++i) {
    double ri = s.A(i, 0) * x - s.b[i];
    g += s.A(i, 0) * ri / s.omega;
  }
  g += -s.tau / (1.0 + x) + s.tau / (1.0 - x);
  return g;
}

// Bisection on the independent derivative; q is strictly convex so the
// derivative has a single sign change in (-1, 1).
double bisect_minimizer_1d(const SubQp& s) {
  double lo = -1.0 + 1e-14, hi = 1.0 - 1e-14;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (q_prime_1d(s, mid) > 0.0)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

// Nested-bisection oracle for n = 2. The inner bisection minimizes over x1
// for fixed x0; by the envelope theorem the derivative of the reduced
// function is just dq/dx0 at (x0, x1*(x0)), so an outer bisection on it
// recovers the joint minimizer. Unlike coordinate descent this is immune to
// the 1/omega-conditioned penalty valley.
VectorXd nested_bisection_minimizer_2d(const SubQp& s) {
  auto partial = [&](const VectorXd& x, int k) {
    double g = s.Q.row(k).dot(x) + s.c_lin[k];
    for (int i = 0; i < s.m(); ++i) {
      double ri = s.A.row(i).dot(x) - s.b[i];
      g += s.A(i, k) * ri / s.omega;
    }
    g += -s.tau / (1.0 + x[k]) + s.tau / (1.0 - x[k]);
    return g;
  };
  auto inner_min = [&](double x0) {
    double lo = -1.0 + 1e-14, hi = 1.0 - 1e-14;
    for (int i = 0; i < 200; ++i) {
      double mid = 0.5 * (lo + hi);
      VectorXd xt(2);
      xt << x0, mid;
      if (partial(xt, 1) > 0.0)
        hi = mid;
      else
        lo = mid;
    }
    return 0.5 * (lo + hi);
  };
  double lo = -1.0 + 1e-14, hi = 1.0 - 1e-14;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    VectorXd xt(2);
    xt << mid, inner_min(mid);
    if (partial(xt, 0) > 0.0)
      hi = mid;
    else
      lo = mid;
  }
  VectorXd x(2);
  x << 0.5 * (lo + hi), inner_min(0.5 * (lo + hi));
  return x;
}

}  // namespace

TEST_CASE("assemble: q reproduces phi exactly for quadratic data") {
  const NlpProblem& p = registry_get("convex_qp_3");
  PenaltyParams pr;
  std::mt19937 rng(21);
  VectorXd xk = 0.3 * random_interior(3, rng);
  MatrixXd G = p.eval_hess_lag(xk, VectorXd::Zero(p.m));
  SubQp sub = assemble_subqp(p, pr, xk, G);
  for (int t = 0; t < 5; ++t) {
    VectorXd x = 0.5 * random_interior(3, rng);
    VectorXd gq = eval_grad_q(sub, x);
    VectorXd gphi = eval_grad_phi(p, pr, x);
    CHECK((gq - gphi).lpNorm<Eigen::Infinity>() <=
          1e-8 * (1.0 + gphi.lpNorm<Eigen::Infinity>()));
  }
}

TEST_CASE("assemble: gradient-matching identity at x_k for all problems") {
  PenaltyParams pr;
  std::mt19937 rng(23);
  for (const std::string& name : registry_names()) {
    const NlpProblem& p = registry_get(name);
    for (int t = 0; t < 5; ++t) {
      VectorXd xk = random_interior(p.n, rng);
      PsdHessian ph = project_psd(p.eval_hess_lag(xk, eval_lambda(p, pr, xk)),
                                  p.eval_jac_c(xk), pr.omega);
      SubQp sub = assemble_subqp(p, pr, xk, ph.h_tilde);
      VectorXd gq = eval_grad_q(sub, xk);
      VectorXd gphi = eval_grad_phi(p, pr, xk);
      INFO(name);
      CHECK((gq - gphi).lpNorm<Eigen::Infinity>() <=
            1e-10 * (1.0 + gphi.lpNorm<Eigen::Infinity>()));
    }
  }
}

TEST_CASE("assemble: m = 0 has empty A and b") {
  const NlpProblem& p = registry_get("box_lp");
  PenaltyParams pr;
  SubQp sub = assemble_subqp(p, pr, VectorXd::Zero(1), MatrixXd::Zero(1, 1));
  CHECK(sub.A.rows() == 0);
  CHECK(sub.b.size() == 0);
}

TEST_CASE("eval_psi_nu at the origin and FD consistency") {
  std::mt19937 rng(31);
  SubQp s = random_subqp(2, 1, rng);
  PsiEval e = eval_psi_nu(s, 2.0, VectorXd::Zero(2));
  VectorXd want = (s.c_lin - (1.0 / s.omega) * s.A.transpose() * s.b) / 2.0;
  CHECK((e.grad - want).lpNorm<Eigen::Infinity>() <=
        1e-12 * (1.0 + want.lpNorm<Eigen::Infinity>()));

  // nu -> infinity kills the quadratic part at 0
  PsiEval big = eval_psi_nu(s, 1e16, VectorXd::Zero(2));
  CHECK(big.grad.lpNorm<Eigen::Infinity>() <= 1e-6);

  const double h = 1e-6;
  VectorXd x = random_interior(2, rng, 0.5);
  for (double nu : {1.0, 1e3, 1e7}) {
    PsiEval mid = eval_psi_nu(s, nu, x);
    for (int k = 0; k < 2; ++k) {
      VectorXd xp = x, xm = x;
      xp[k] += h;
      xm[k] -= h;
      double fd = (eval_psi_nu(s, nu, xp).value - eval_psi_nu(s, nu, xm).value) /
                  (2 * h);
      CHECK(std::abs(fd - mid.grad[k]) <= 1e-5 * (1.0 + std::abs(mid.grad[k])));
      VectorXd fdh = (eval_psi_nu(s, nu, xp).grad - eval_psi_nu(s, nu, xm).grad) /
                     (2 * h);
      CHECK((fdh - mid.hess.col(k)).lpNorm<Eigen::Infinity>() <=
            1e-4 * (1.0 + mid.hess.col(k).lpNorm<Eigen::Infinity>()));
    }
  }
}

TEST_CASE("initial_centering trivial case keeps nu = 1 and x = 0") {
  SubQp s;
  s.Q = MatrixXd::Identity(1, 1);
  s.c_lin = VectorXd::Zero(1);
  s.A = MatrixXd(0, 1);
  s.b = VectorXd(0);
  s.omega = 1e-7;
  s.tau = 1e-7;
  s.x_ref = VectorXd::Zero(1);
  s.c_ref = VectorXd(0);
  auto [x, nu] = initial_centering(s);
  CHECK(nu == 1.0);
  CHECK(std::abs(x[0]) <= 1e-12);
}

TEST_CASE("initial_centering nu escalation for large c_lin") {
  SubQp s;
  s.Q = MatrixXd::Identity(1, 1);
  s.c_lin = VectorXd::Constant(1, 1e6);
  s.A = MatrixXd(0, 1);
  s.b = VectorXd(0);
  s.omega = 1e-7;
  s.tau = 1e-7;
  s.x_ref = VectorXd::Zero(1);
  s.c_ref = VectorXd(0);
  auto [x, nu] = initial_centering(s);
  CHECK(nu == 1e7);  // first power of ten with 1e6/nu < 0.25
  CHECK(nu >= 4e6);
  (void)x;
}

TEST_CASE("initial_centering post-state on random instances") {
  std::mt19937 rng(37);
  for (int t = 0; t < 10; ++t) {
    SubQp s = random_subqp(2, t % 3, rng);
    auto [x, nu] = initial_centering(s);
    CHECK(eval_psi_nu(s, nu, x).grad.norm() <= 1e-8);
    CHECK((2.0 * x).lpNorm<Eigen::Infinity>() < 1.0);
  }
}

TEST_CASE("eval_F at the exact center is zero") {
  SubQp s;
  s.Q = MatrixXd::Zero(1, 1);
  s.c_lin = VectorXd::Zero(1);
  s.A = MatrixXd(0, 1);
  s.b = VectorXd(0);
  s.omega = 1e-7;
  s.tau = 1e-7;
  s.x_ref = VectorXd::Zero(1);
  s.c_ref = VectorXd(0);
  PrimalDualPoint z;
  z.x = VectorXd::Zero(1);
  z.lambda = VectorXd(0);
  double nu = 3.0;
  z.mu_l = VectorXd::Constant(1, nu);
  z.mu_r = VectorXd::Constant(1, nu);
  CHECK(eval_F(s, nu, z).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("eval_F row 2 vanishes with lambda from its defining identity") {
  std::mt19937 rng(41);
  SubQp s = random_subqp(2, 2, rng);
  PrimalDualPoint z;
  z.x = random_interior(2, rng, 0.5);
  z.lambda = -penalty_residual(s, z.x) / s.omega;
  z.mu_l = VectorXd::Constant(2, 0.5);
  z.mu_r = VectorXd::Constant(2, 0.5);
  VectorXd F = eval_F(s, 1.0, z);
  CHECK(F.segment(2, 2).lpNorm<Eigen::Infinity>() <= 1e-9);
}

TEST_CASE("eval_F matches an independently coded residual") {
  std::mt19937 rng(43);
  for (int t = 0; t < 10; ++t) {
    int n = 2, m = 1 + (t % 2);
    SubQp s = random_subqp(n, m, rng);
    PrimalDualPoint z;
    z.x = random_interior(n, rng, 0.5);
    z.lambda = VectorXd(m);
    for (int i = 0; i < m; ++i) z.lambda[i] = 0.3 * (i + 1);
    z.mu_l = VectorXd::Constant(n, 0.7);
    z.mu_r = VectorXd::Constant(n, 0.2);
    double nu = 0.01;
    VectorXd F = eval_F(s, nu, z);
    // independent residual, element by element
    VectorXd want(2 * n + m + n);
    for (int i = 0; i < n; ++i) {
      double v = s.c_lin[i] - z.mu_l[i] + z.mu_r[i];
      for (int j = 0; j < n; ++j) v += s.Q(i, j) * z.x[j];
      for (int j = 0; j < m; ++j) v -= s.A(j, i) * z.lambda[j];
      want[i] = v;
    }
    for (int i = 0; i < m; ++i) {
      double v = -s.b[i] + s.omega * z.lambda[i];
      for (int j = 0; j < n; ++j) v += s.A(i, j) * z.x[j];
      want[n + i] = v;
    }
    for (int i = 0; i < n; ++i) {
      want[n + m + i] = z.mu_l[i] * (1.0 + z.x[i]) - nu;
      want[2 * n + m + i] = z.mu_r[i] * (1.0 - z.x[i]) - nu;
    }
    double scale = 1.0 + want.lpNorm<Eigen::Infinity>();
    CHECK((F - want).lpNorm<Eigen::Infinity>() / scale <= 1e-14);
  }
}

TEST_CASE("solve_kkt: zero rhs gives zero step") {
  std::mt19937 rng(47);
  SubQp s = random_subqp(2, 1, rng);
  PrimalDualPoint z;
  z.x = VectorXd::Zero(2);
  z.lambda = VectorXd::Zero(1);
  z.mu_l = VectorXd::Constant(2, 1.0);
  z.mu_r = VectorXd::Constant(2, 1.0);
  CHECK(solve_kkt(s, z, VectorXd::Zero(7)).norm() == 0.0);
}

TEST_CASE("solve_kkt solves the FD Jacobian of eval_F") {
  std::mt19937 rng(53);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int t = 0; t < 5; ++t) {
    int n = 2, m = 1;
    SubQp s = random_subqp(n, m, rng);
    s.omega = 1e-3;  // keep FD of the stiff row well-conditioned
    PrimalDualPoint z;
    z.x = random_interior(n, rng, 0.3);
    z.lambda = VectorXd(m);
    z.lambda[0] = gauss(rng);
    z.mu_l = VectorXd::Constant(n, 0.8);
    z.mu_r = VectorXd::Constant(n, 0.6);

    const int N = 2 * n + m + n;
    const double nu = 0.1;
    // FD Jacobian of F_nu in z
    auto pack = [&](const VectorXd& v) {
      PrimalDualPoint w;
      w.x = v.segment(0, n);
      w.lambda = v.segment(n, m);
      w.mu_l = v.segment(n + m, n);
      w.mu_r = v.segment(2 * n + m, n);
      return w;
    };
    VectorXd z0(N);
    z0 << z.x, z.lambda, z.mu_l, z.mu_r;
    MatrixXd DF(N, N);
    const double h = 1e-7;
    for (int j = 0; j < N; ++j) {
      VectorXd zp = z0, zm = z0;
      zp[j] += h;
      zm[j] -= h;
      DF.col(j) = (eval_F(s, nu, pack(zp)) - eval_F(s, nu, pack(zm))) / (2 * h);
    }
    VectorXd rhs(N);
    for (int i = 0; i < N; ++i) rhs[i] = gauss(rng);
    VectorXd dz = solve_kkt(s, z, rhs);
    double rel = (DF * dz - rhs).lpNorm<Eigen::Infinity>() /
                 rhs.lpNorm<Eigen::Infinity>();
    INFO("trial " << t);
    CHECK(rel <= 1e-5);
  }
}

TEST_CASE("solve_subqp: identity quadratic stays near the origin") {
  SubQp s;
  s.Q = MatrixXd::Identity(1, 1);
  s.c_lin = VectorXd::Zero(1);
  s.A = MatrixXd(0, 1);
  s.b = VectorXd(0);
  s.omega = 1e-7;
  s.tau = 1e-8;
  s.x_ref = VectorXd::Zero(1);
  s.c_ref = VectorXd(0);
  InnerSolveResult r = solve_subqp(s, 1e-10);
  REQUIRE(r.ok);
  CHECK(std::abs(r.x_hat[0]) <= 1e-6);
}

TEST_CASE("solve_subqp matches the 1-D bisection oracle on the linear-rate step") {
  SubQp s;
  s.Q = MatrixXd::Constant(1, 1, 1e-7);  // rho
  s.c_lin = VectorXd::Constant(1, -0.5); // grad f at x_k = 0.5 with H-tilde = 0
  s.A = MatrixXd(0, 1);
  s.b = VectorXd(0);
  s.omega = 1e-7;
  s.tau = 1e-7;
  s.x_ref = VectorXd::Constant(1, 0.5);
  s.c_ref = VectorXd(0);
  InnerSolveResult r = solve_subqp(s, 1e-10);
  REQUIRE(r.ok);
  double want = bisect_minimizer_1d(s);
  CHECK(std::abs(r.x_hat[0] - want) <= 1e-8);
}

TEST_CASE("solve_subqp oracle equivalence on 20 random small instances") {
  std::mt19937 rng(61);
  std::vector<int> iters;
  for (int t = 0; t < 20; ++t) {
    int n = 1 + (t % 2);
    int m = t % 3;
    SubQp s = random_subqp(n, m, rng);
    double itol = 1e-10;
    InnerSolveResult r = solve_subqp(s, itol);
    INFO("instance " << t << " n " << n << " m " << m);
    REQUIRE(r.ok);
    CHECK(r.stats.final_residual <= itol);
    CHECK(r.z.x.lpNorm<Eigen::Infinity>() < 1.0);
    CHECK(r.z.mu_l.minCoeff() > 0.0);
    CHECK(r.z.mu_r.minCoeff() > 0.0);
    iters.push_back(r.stats.pd_iterations);
    VectorXd want =
        n == 1 ? VectorXd::Constant(1, bisect_minimizer_1d(s))
               : nested_bisection_minimizer_2d(s);
    CHECK((r.x_hat - want).lpNorm<Eigen::Infinity>() <= 1e-6);
  }
  std::nth_element(iters.begin(), iters.begin() + iters.size() / 2,
                   iters.end());
  CHECK(iters[iters.size() / 2] <= 30);
}

TEST_CASE("nu-hat floor: duality trace never collapses below tau scale") {
  std::mt19937 rng(67);
  SubQp s = random_subqp(2, 1, rng);
  InnerSolveResult r = solve_subqp(s, 1e-10);
  REQUIRE(r.ok);
  for (const auto& rec : r.stats.trace) CHECK(rec.nu > 0.0);
}
