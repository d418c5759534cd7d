#pragma once

#include "gsadmm/blockspace.hpp"

namespace gsadmm {

// f(v) = v'Pv/2 + q'v with P symmetric positive definite.
class QuadraticOracle : public ProxOracle {
 public:
  QuadraticOracle(MatrixXd P, VectorXd q);

  double eval(const VectorXd& v) const override;
  VectorXd prox_solve(const LinearMap& map, double a, const VectorXd& z) const override;
  std::string name() const override { return "quadratic"; }

  const MatrixXd& P() const { return P_; }
  const VectorXd& q() const { return q_; }

 private:
  MatrixXd P_;
  VectorXd q_;
};

// f(X) = <C, X> - logdet X on vectorized symmetric matrices; the map must be
// a scaled identity. eval throws std::domain_error when X is not positive
// definite.
class LogDetOracle : public ProxOracle {
 public:
  explicit LogDetOracle(MatrixXd C);

  double eval(const VectorXd& v) const override;
  VectorXd prox_solve(const LinearMap& map, double a, const VectorXd& z) const override;
  std::string name() const override { return "logdet"; }

  const MatrixXd& C() const { return C_; }

 private:
  MatrixXd C_;
  Index n_;
};

// f(v) = weight * ||v||_1; map must be a scaled identity.
class L1Oracle : public ProxOracle {
 public:
  explicit L1Oracle(double weight);

  double eval(const VectorXd& v) const override;
  VectorXd prox_solve(const LinearMap& map, double a, const VectorXd& z) const override;
  std::string name() const override { return "l1"; }

  double weight() const { return weight_; }

 private:
  double weight_;
};

// f(L) = weight * tr(L) over the PSD cone, on vectorized square matrices;
// map must be a scaled identity.
class TraceOracle : public ProxOracle {
 public:
  TraceOracle(double weight, Index n);

  double eval(const VectorXd& v) const override;
  VectorXd prox_solve(const LinearMap& map, double a, const VectorXd& z) const override;
  std::string name() const override { return "trace"; }

  double weight() const { return weight_; }
  Index n() const { return n_; }

 private:
  double weight_;
  Index n_;
};

}  // namespace gsadmm
