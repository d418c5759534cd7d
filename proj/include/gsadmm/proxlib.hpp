#pragma once

#include <Eigen/Dense>

namespace gsadmm {

// Eigendecomposition of the symmetrized input, eigenvalues ascending.
struct SymEig {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

// Throws on non-finite entries; input is symmetrized as (M + M')/2 first to
// absorb round-off drift in iterates.
SymEig sym_eig(const Eigen::MatrixXd& m);

// Spectral solution of  a*g^2 + rho*g - 1 = 0,  g > 0, evaluated in the
// cancellation-free branch.
double prox_logdet_gamma(double rho, double a);

// argmin_{X > 0}  <R, X> - logdet X + (a/2) ||X||_F^2.
// Callers fold their anchor and linear data into R = linear_part - a * anchor.
Eigen::MatrixXd prox_logdet(const Eigen::MatrixXd& r, double a);

// Entrywise sign(m) * max(|m| - kappa, 0): the prox of kappa * ||.||_1.
Eigen::MatrixXd soft_shrink(const Eigen::MatrixXd& m, double kappa);

// Frobenius-nearest positive semidefinite matrix: clamp negative eigenvalues.
Eigen::MatrixXd psd_project(const Eigen::MatrixXd& m);

}  // namespace gsadmm
