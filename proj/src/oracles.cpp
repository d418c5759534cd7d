#include "gsadmm/oracles.hpp"

#include "gsadmm/proxlib.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <stdexcept>

namespace gsadmm {

namespace {

double identity_scale(const LinearMap& map, const char* who) {
  if (!map.is_scaled_identity()) {
    throw std::invalid_argument(std::string(who) + ": coupling map must be a scaled identity");
  }
  double alpha = map.scale();
  if (alpha == 0.0) throw std::invalid_argument(std::string(who) + ": zero coupling scale");
  return alpha;
}

Index matrix_side(Index vec_dim, const char* who) {
  auto n = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(vec_dim))));
  if (n * n != vec_dim) {
    throw std::invalid_argument(std::string(who) + ": block dim is not a perfect square");
  }
  return n;
}

Eigen::Map<const MatrixXd> as_matrix(const VectorXd& v, Index n) {
  return Eigen::Map<const MatrixXd>(v.data(), n, n);
}

VectorXd as_vector(const MatrixXd& m) {
  return Eigen::Map<const VectorXd>(m.data(), m.size());
}

}  // namespace

QuadraticOracle::QuadraticOracle(MatrixXd P, VectorXd q) : P_(std::move(P)), q_(std::move(q)) {
  if (P_.rows() != P_.cols() || P_.rows() != q_.size()) {
    throw std::invalid_argument("QuadraticOracle: P must be square and match q");
  }
  P_ = 0.5 * (P_ + P_.transpose().eval());
}

double QuadraticOracle::eval(const VectorXd& v) const {
  return 0.5 * v.dot(P_ * v) + q_.dot(v);
}

VectorXd QuadraticOracle::prox_solve(const LinearMap& map, double a, const VectorXd& z) const {
  MatrixXd lhs = P_ + a * map.gram();
  VectorXd rhs = a * map.apply_transpose(z) - q_;
  Eigen::LDLT<MatrixXd> ldlt(lhs);
  if (ldlt.info() != Eigen::Success) {
    throw std::runtime_error("QuadraticOracle: block system is not positive definite");
  }
  return ldlt.solve(rhs);
}

LogDetOracle::LogDetOracle(MatrixXd C) : C_(std::move(C)), n_(C_.rows()) {
  if (C_.rows() != C_.cols()) throw std::invalid_argument("LogDetOracle: C must be square");
  C_ = 0.5 * (C_ + C_.transpose().eval());
}

double LogDetOracle::eval(const VectorXd& v) const {
  Index n = matrix_side(v.size(), "LogDetOracle::eval");
  MatrixXd X = 0.5 * (as_matrix(v, n) + as_matrix(v, n).transpose());
  Eigen::LLT<MatrixXd> llt(X);
  if (llt.info() != Eigen::Success) {
    throw std::domain_error("LogDetOracle::eval: argument is not positive definite");
  }
  double logdet = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  return (C_.array() * X.array()).sum() - logdet;
}

VectorXd LogDetOracle::prox_solve(const LinearMap& map, double a, const VectorXd& z) const {
  double alpha = identity_scale(map, "LogDetOracle");
  Index n = matrix_side(z.size(), "LogDetOracle::prox_solve");
  if (n != n_) throw std::invalid_argument("LogDetOracle: block side does not match C");
  MatrixXd R = C_ - a * alpha * as_matrix(z, n);
  return as_vector(prox_logdet(R, a * alpha * alpha));
}

L1Oracle::L1Oracle(double weight) : weight_(weight) {
  if (!(weight_ >= 0)) throw std::invalid_argument("L1Oracle: weight must be nonnegative");
}

double L1Oracle::eval(const VectorXd& v) const { return weight_ * v.cwiseAbs().sum(); }

VectorXd L1Oracle::prox_solve(const LinearMap& map, double a, const VectorXd& z) const {
  double alpha = identity_scale(map, "L1Oracle");
  VectorXd anchor = z / alpha;
  double kappa = weight_ / (a * alpha * alpha);
  return anchor.unaryExpr(
      [kappa](double v) { return std::copysign(std::max(std::abs(v) - kappa, 0.0), v); });
}

TraceOracle::TraceOracle(double weight, Index n) : weight_(weight), n_(n) {
  if (!(weight_ >= 0)) throw std::invalid_argument("TraceOracle: weight must be nonnegative");
  if (n_ < 1) throw std::invalid_argument("TraceOracle: n must be >= 1");
}

double TraceOracle::eval(const VectorXd& v) const {
  Index n = matrix_side(v.size(), "TraceOracle::eval");
  return weight_ * as_matrix(v, n).trace();
}

VectorXd TraceOracle::prox_solve(const LinearMap& map, double a, const VectorXd& z) const {
  double alpha = identity_scale(map, "TraceOracle");
  Index n = matrix_side(z.size(), "TraceOracle::prox_solve");
  MatrixXd target = as_matrix(z, n) / alpha;
  target.diagonal().array() -= weight_ / (a * alpha * alpha);
  return as_vector(psd_project(target));
}

}  // namespace gsadmm
