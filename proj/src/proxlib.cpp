#include "gsadmm/proxlib.hpp"

#include <cmath>
#include <stdexcept>

namespace gsadmm {

SymEig sym_eig(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("sym_eig: matrix is not square");
  if (!m.allFinite()) throw std::invalid_argument("sym_eig: non-finite entries");
  Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  if (es.info() != Eigen::Success) throw std::runtime_error("sym_eig: eigensolver failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

double prox_logdet_gamma(double rho, double a) {
  if (!(a > 0)) throw std::invalid_argument("prox_logdet_gamma: a must be positive");
  double disc = std::sqrt(rho * rho + 4.0 * a);
  // Both branches solve a*g^2 + rho*g - 1 = 0; pick the one that never
  // subtracts nearly equal quantities.
  if (rho >= 0) return 2.0 / (rho + disc);
  return (-rho + disc) / (2.0 * a);
}

Eigen::MatrixXd prox_logdet(const Eigen::MatrixXd& r, double a) {
  SymEig eig = sym_eig(r);
  Eigen::VectorXd gamma(eig.values.size());
  for (Eigen::Index i = 0; i < gamma.size(); ++i) gamma(i) = prox_logdet_gamma(eig.values(i), a);
  return eig.vectors * gamma.asDiagonal() * eig.vectors.transpose();
}

Eigen::MatrixXd soft_shrink(const Eigen::MatrixXd& m, double kappa) {
  if (!(kappa >= 0)) throw std::invalid_argument("soft_shrink: kappa must be nonnegative");
  return m.unaryExpr(
      [kappa](double v) { return std::copysign(std::max(std::abs(v) - kappa, 0.0), v); });
}

Eigen::MatrixXd psd_project(const Eigen::MatrixXd& m) {
  SymEig eig = sym_eig(m);
  Eigen::VectorXd clipped = eig.values.cwiseMax(0.0);
  return eig.vectors * clipped.asDiagonal() * eig.vectors.transpose();
}

}  // namespace gsadmm
