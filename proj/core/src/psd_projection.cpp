#include "ppdipm/psd_projection.hpp"

#include <Eigen/Dense>
#include <stdexcept>

namespace ppdipm {

PsdHessian project_psd(const Eigen::MatrixXd& H, const Eigen::MatrixXd& jac_c,
                       double omega) {
  Eigen::MatrixXd M = H + (1.0 / omega) * (jac_c * jac_c.transpose());
  M = 0.5 * (M + M.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("project_psd: eigendecomposition failed");
  const Eigen::VectorXd& w = es.eigenvalues();
  double nrm = std::max(w.cwiseAbs().maxCoeff(), 1.0);

  PsdHessian out;
  if (w.minCoeff() >= -1e-10 * nrm) {
    out.h_tilde = H;
    out.m_tilde_min_eig = w.minCoeff();
    out.used_exact = true;
    return out;
  }
  Eigen::VectorXd wc = w.cwiseMax(0.0);
  Eigen::MatrixXd Mt =
      es.eigenvectors() * wc.asDiagonal() * es.eigenvectors().transpose();
  Mt = 0.5 * (Mt + Mt.transpose()).eval();
  out.h_tilde = Mt - (1.0 / omega) * (jac_c * jac_c.transpose());
  out.m_tilde_min_eig = 0.0;
  out.used_exact = false;
  return out;
}

}  // namespace ppdipm
