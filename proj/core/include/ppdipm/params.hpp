#pragma once

#include <Eigen/Core>
#include <stdexcept>

namespace ppdipm {

// Regularization bundle (rho, omega, tau, S, tol), fixed for a whole solve.
struct PenaltyParams {
  double rho = 1e-7;
  double omega = 1e-7;
  double tau = 1e-7;
  // Scaling matrix S; empty means identity.
  Eigen::MatrixXd S;
  double tol = 1e-8;
  int max_outer_iter = 10000;

  void validate(int n) const;
};

struct LineSearchParams {
  double gamma = 0.1;  // Armijo slope fraction
  double beta = 0.8;   // backtracking factor
  int max_doublings = 30;
  int max_backtracks = 60;
};

struct SolverConfig {
  PenaltyParams params;
  LineSearchParams line_search;
  bool watchdog_enabled = true;
  bool newton_polish_enabled = true;
  // Replace the Hessian by the PSD projection of M even when M is PSD
  // (reproduces the H-tilde = 0 setting of the 1-D linear-rate study).
  bool force_psd_projection = false;
  int watchdog_ell = 5;
  int inner_iteration_cap = 200;
  int verbosity = 0;
};

}  // namespace ppdipm
