#include <benchmark/benchmark.h>

#include "ppdipm/merit.hpp"
#include "ppdipm/problem.hpp"
#include "ppdipm/psd_projection.hpp"
#include "ppdipm/solver.hpp"
#include "ppdipm/subqp.hpp"

namespace {

using namespace ppdipm;

void BM_SolveRegistry(benchmark::State& state, const std::string& name) {
  const NlpProblem& p = registry_get(name);
  SolverConfig cfg;
  for (auto _ : state) {
    SolveReport r = solve(p, VectorXd::Zero(p.n), cfg);
    benchmark::DoNotOptimize(r.grad_phi_inf);
  }
}

void BM_InnerSolve(benchmark::State& state) {
  const NlpProblem& p = registry_get("convex_qp_5");
  PenaltyParams pr;
  VectorXd x = VectorXd::Constant(p.n, 0.1);
  PsdHessian ph =
      project_psd(p.eval_hess_lag(x, eval_lambda(p, pr, x)), p.eval_jac_c(x),
                  pr.omega);
  SubQp sub = assemble_subqp(p, pr, x, ph.h_tilde);
  double itol = inner_tolerance(pr, sub);
  for (auto _ : state) {
    InnerSolveResult r = solve_subqp(sub, itol);
    benchmark::DoNotOptimize(r.x_hat);
  }
}

void BM_MeritGradient(benchmark::State& state) {
  const NlpProblem& p = registry_get("convex_qp_5");
  PenaltyParams pr;
  VectorXd x = VectorXd::Constant(p.n, 0.1);
  for (auto _ : state) {
    VectorXd g = eval_grad_phi(p, pr, x);
    benchmark::DoNotOptimize(g);
  }
}

}  // namespace

BENCHMARK_CAPTURE(BM_SolveRegistry, convex_qp_5, std::string("convex_qp_5"));
BENCHMARK_CAPTURE(BM_SolveRegistry, circle_equality,
                  std::string("circle_equality"));
BENCHMARK_CAPTURE(BM_SolveRegistry, box_lp, std::string("box_lp"));
BENCHMARK(BM_InnerSolve);
BENCHMARK(BM_MeritGradient);

BENCHMARK_MAIN();
