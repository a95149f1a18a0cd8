#include "ppdipm/solver.hpp"

#include <Eigen/Dense>
#include <chrono>
#include <cmath>

#include "ppdipm/globalization.hpp"
#include "ppdipm/merit.hpp"
#include "ppdipm/psd_projection.hpp"
#include "ppdipm/subqp.hpp"

namespace ppdipm {

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iter: return "max_iter";
    case SolveStatus::line_search_failure: return "line_search_failure";
    case SolveStatus::inner_failure: return "inner_failure";
  }
  return "unknown";
}

namespace {

// H-tilde selection: user hook if present, otherwise the PSD projection.
// force_psd always takes the clipped projection of M (used by the
// linear-rate study where H-tilde = 0 must be reproduced even though
// clipping would normally keep an exact PSD Hessian).
PsdHessian select_hessian(const NlpProblem& p, const SolverConfig& cfg,
                          const VectorXd& x, const VectorXd& lam,
                          bool allow_hook) {
  MatrixXd J = p.eval_jac_c(x);
  if (cfg.force_psd_projection) {
    MatrixXd H = p.eval_hess_lag(x, lam);
    MatrixXd M = H + (1.0 / cfg.params.omega) * (J * J.transpose());
    M = 0.5 * (M + M.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(M);
    MatrixXd Mt = es.eigenvectors() *
                  es.eigenvalues().cwiseMax(0.0).asDiagonal() *
                  es.eigenvectors().transpose();
    PsdHessian out;
    out.h_tilde = Mt - (1.0 / cfg.params.omega) * (J * J.transpose());
    out.m_tilde_min_eig = 0.0;
    out.used_exact = false;
    return out;
  }
  if (allow_hook && p.eval_hess_psd) {
    PsdHessian out;
    out.h_tilde = p.eval_hess_psd(x, lam);
    out.used_exact = false;
    return out;
  }
  return project_psd(p.eval_hess_lag(x, lam), J, cfg.params.omega);
}

}  // namespace

SolveReport solve(const NlpProblem& p, const VectorXd& x0,
                  const SolverConfig& cfg) {
  const auto t_start = std::chrono::steady_clock::now();
  const PenaltyParams& pr = cfg.params;
  pr.validate(p.n);

  SolveReport rep;
  rep.problem = p.name;
  rep.n = p.n;
  rep.m = p.m;

  VectorXd x = x0;
  if (x.lpNorm<Eigen::Infinity>() >= 1.0)
    x = x.cwiseMax(-1.0 + 1e-3).cwiseMin(1.0 - 1e-3);

  WatchdogState wd;
  wd.ell = cfg.watchdog_ell;
  wd.reset(x, eval_phi(p, pr, x));

  auto finish = [&](SolveStatus st) {
    rep.status = st;
    rep.x_final = x;
    rep.phi_final = eval_phi(p, pr, x);
    VectorXd g = eval_grad_phi(p, pr, x);
    rep.grad_phi_2 = g.norm();
    rep.grad_phi_inf = g.lpNorm<Eigen::Infinity>();
    rep.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
            .count();
    return rep;
  };

  for (int k = 0; k < pr.max_outer_iter; ++k) {
    VectorXd g = eval_grad_phi(p, pr, x);
    IterationRecord rec{};
    rec.phi = eval_phi(p, pr, x);
    rec.grad_phi_2 = g.norm();
    rec.grad_phi_inf = g.lpNorm<Eigen::Infinity>();
    if (rec.grad_phi_2 <= pr.tol) {
      rep.outer_iterations = k;
      return finish(SolveStatus::converged);
    }

    VectorXd lam = eval_lambda(p, pr, x);
    PsdHessian ph = select_hessian(p, cfg, x, lam, /*allow_hook=*/true);
    rec.used_exact = ph.used_exact;
    SubQp sub = assemble_subqp(p, pr, x, ph.h_tilde);
    double itol = inner_tolerance(pr, sub);
    InnerSolveResult inner = solve_subqp(sub, itol, cfg.inner_iteration_cap);
    if (!inner.ok && p.eval_hess_psd && !cfg.force_psd_projection) {
      // One structured retry with the computed projection instead of the hook.
      ph = select_hessian(p, cfg, x, lam, /*allow_hook=*/false);
      sub = assemble_subqp(p, pr, x, ph.h_tilde);
      inner = solve_subqp(sub, inner_tolerance(pr, sub),
                          cfg.inner_iteration_cap);
    }
    if (!inner.ok) {
      rep.outer_iterations = k;
      rep.iterations.push_back(rec);
      return finish(SolveStatus::inner_failure);
    }
    rec.inner_iterations = inner.stats.pd_iterations;
    rep.total_inner_iterations += inner.stats.pd_iterations;
    VectorXd v = inner.x_hat - x;

    if (cfg.watchdog_enabled) {
      LineSearchResult ls =
          line_search(p, pr, x, v, StepCriterion::relaxed, cfg.line_search);
      if (!ls.ok) {
        rep.outer_iterations = k;
        rep.iterations.push_back(rec);
        return finish(SolveStatus::line_search_failure);
      }
      double phi_new = eval_phi(p, pr, ls.x_new);
      if (phi_new < wd.checkpoint_phi) {
        wd.reset(ls.x_new, phi_new);
        x = ls.x_new;
        rec.alpha = ls.alpha_total;
      } else if (++wd.relaxed_steps_since_progress >= wd.ell) {
        // Restore the checkpoint and force an Armijo step from there.
        x = wd.checkpoint_x;
        lam = eval_lambda(p, pr, x);
        ph = select_hessian(p, cfg, x, lam, /*allow_hook=*/true);
        sub = assemble_subqp(p, pr, x, ph.h_tilde);
        inner = solve_subqp(sub, inner_tolerance(pr, sub),
                            cfg.inner_iteration_cap);
        if (!inner.ok) {
          rep.outer_iterations = k;
          rep.iterations.push_back(rec);
          return finish(SolveStatus::inner_failure);
        }
        rec.inner_iterations += inner.stats.pd_iterations;
        rep.total_inner_iterations += inner.stats.pd_iterations;
        v = inner.x_hat - x;
        ls = line_search(p, pr, x, v, StepCriterion::armijo, cfg.line_search);
        rec.watchdog_standard_mode = true;
        if (!ls.ok) {
          rep.outer_iterations = k;
          rep.iterations.push_back(rec);
          return finish(SolveStatus::line_search_failure);
        }
        x = ls.x_new;
        rec.alpha = ls.alpha_total;
        wd.reset(x, eval_phi(p, pr, x));
      } else {
        x = ls.x_new;
        rec.alpha = ls.alpha_total;
      }
    } else {
      LineSearchResult ls =
          line_search(p, pr, x, v, StepCriterion::armijo, cfg.line_search);
      if (!ls.ok) {
        rep.outer_iterations = k;
        rep.iterations.push_back(rec);
        return finish(SolveStatus::line_search_failure);
      }
      x = ls.x_new;
      rec.alpha = ls.alpha_total;
    }

    if (cfg.newton_polish_enabled) {
      PolishResult pol = newton_polish(p, pr, x);
      rec.polish_accepted = pol.accepted;
      if (pol.accepted) x = pol.x;
    }
    rep.iterations.push_back(rec);
  }
  rep.outer_iterations = pr.max_outer_iter;
  return finish(SolveStatus::max_iter);
}

ConvergenceOrder convergence_order(const SolveReport& report) {
  ConvergenceOrder out;
  std::vector<double> run;
  for (const auto& it : report.iterations) {
    double g = it.grad_phi_2;
    if (g <= 0.0) continue;
    if (!run.empty() && g < run.back())
      run.push_back(g);
    else
      run.assign(1, g);
  }
  // The final gradient norm (at the terminating iterate) extends the run.
  if (report.grad_phi_2 > 0.0) {
    if (!run.empty() && report.grad_phi_2 < run.back())
      run.push_back(report.grad_phi_2);
    else
      run.assign(1, report.grad_phi_2);
  }
  out.window_points = static_cast<int>(run.size());
  if (run.size() < 4 || run.back() >= 1e-2) return out;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int np = static_cast<int>(run.size()) - 1;
  for (int i = 0; i < np; ++i) {
    double lx = std::log(run[i]), ly = std::log(run[i + 1]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  double denom = np * sxx - sx * sx;
  if (denom == 0.0) return out;
  out.valid = true;
  out.order = (np * sxy - sx * sy) / denom;
  return out;
}

}  // namespace ppdipm
