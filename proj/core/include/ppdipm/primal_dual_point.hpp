#pragma once

#include <Eigen/Core>

namespace ppdipm {

// Inner-solver state z = (x, lambda, mu_l, mu_r); x strictly interior,
// multipliers strictly positive while iterating.
struct PrimalDualPoint {
  Eigen::VectorXd x;
  Eigen::VectorXd lambda;
  Eigen::VectorXd mu_l;
  Eigen::VectorXd mu_r;
};

}  // namespace ppdipm
