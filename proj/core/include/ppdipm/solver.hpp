#pragma once

#include <string>
#include <vector>

#include "ppdipm/params.hpp"
#include "ppdipm/problem.hpp"

namespace ppdipm {

enum class SolveStatus { converged, max_iter, line_search_failure, inner_failure };

const char* to_string(SolveStatus s);

struct IterationRecord {
  double phi;
  double grad_phi_2;
  double grad_phi_inf;
  double alpha;
  int inner_iterations;
  bool used_exact;
  bool polish_accepted;
  bool watchdog_standard_mode;  // true when the Armijo fallback ran
};

struct SolveReport {
  SolveStatus status = SolveStatus::max_iter;
  std::string problem;
  int n = 0;
  int m = 0;
  VectorXd x_final;
  double phi_final = 0.0;
  double grad_phi_2 = 0.0;
  double grad_phi_inf = 0.0;
  int outer_iterations = 0;
  long total_inner_iterations = 0;
  double wall_time_s = 0.0;
  std::vector<IterationRecord> iterations;
};

// Outer merit-descent loop with watchdog line search and Newton
// polish). x0 outside the open box is pulled to ||x||_inf <= 1 - 1e-3.
SolveReport solve(const NlpProblem& p, const VectorXd& x0,
                  const SolverConfig& cfg);

// Least-squares slope of log g_{k+1} against log g_k over the trailing
// maximal strictly-decreasing run of ||grad phi||_2; valid only if the run
// has >= 4 points and ends below 1e-2.
struct ConvergenceOrder {
  bool valid = false;  // false: insufficient data
  double order = 0.0;
  int window_points = 0;
};
ConvergenceOrder convergence_order(const SolveReport& report);

}  // namespace ppdipm
