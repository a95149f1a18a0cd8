#pragma once

#include <Eigen/Core>

namespace ppdipm {

struct PsdHessian {
  Eigen::MatrixXd h_tilde;
  // Certified lower bound on lambda_min(M-tilde) from the eigensolve.
  double m_tilde_min_eig = 0.0;
  bool used_exact = false;
};

// Returns H-tilde such that M-tilde = H-tilde + (1/omega) J J' is PSD.
// If M = H + (1/omega) J J' is already PSD to a 1e-10 relative tolerance,
// H is returned unchanged; otherwise the negative spectrum of M is clipped
// (Frobenius-norm projection of M onto the PSD cone).
PsdHessian project_psd(const Eigen::MatrixXd& H, const Eigen::MatrixXd& jac_c,
                       double omega);

}  // namespace ppdipm
