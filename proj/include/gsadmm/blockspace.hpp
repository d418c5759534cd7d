#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace gsadmm {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

// Coupling map of one block: an explicit dense n x dim matrix, or alpha * I.
// The scaled-identity form keeps vectorized matrix blocks (dim = n^2)
// affordable; everything else in the library stays dense.
class LinearMap {
 public:
  LinearMap() = default;
  static LinearMap dense(MatrixXd m);
  static LinearMap scaled_identity(Index dim, double alpha);

  Index rows() const { return is_identity_ ? dim_ : dense_.rows(); }
  Index cols() const { return is_identity_ ? dim_ : dense_.cols(); }
  bool is_scaled_identity() const { return is_identity_; }
  double scale() const { return alpha_; }

  VectorXd apply(const VectorXd& v) const;            // A v
  VectorXd apply_transpose(const VectorXd& r) const;  // A' r
  MatrixXd gram() const;                              // A' A
  MatrixXd to_dense() const;
  double min_singular_value() const;
  double max_singular_value() const;

 private:
  MatrixXd dense_;
  Index dim_ = 0;
  double alpha_ = 1.0;
  bool is_identity_ = true;
};

enum class ConstraintSet { Unconstrained, PsdCone };

// A block objective together with an exact solver for the regularized block
// subproblem the sweep produces. Implementations are immutable and pure.
class ProxOracle {
 public:
  virtual ~ProxOracle() = default;

  virtual double eval(const VectorXd& v) const = 0;

  // argmin_v f(v) + (a/2) || map(v) - z ||^2 over the block's constraint set.
  // The sweep folds the dual term, the penalty cross terms and the proximal
  // anchor into (a, z), so this one form covers every subproblem.
  virtual VectorXd prox_solve(const LinearMap& map, double a, const VectorXd& z) const = 0;

  virtual std::string name() const = 0;
};

struct BlockSpec {
  Index dim = 0;
  LinearMap map;  // n x dim
  std::shared_ptr<const ProxOracle> objective;
  ConstraintSet constraint = ConstraintSet::Unconstrained;
};

class SeparableProblem {
 public:
  // Throws std::invalid_argument naming the offending block on shape errors.
  SeparableProblem(std::vector<BlockSpec> x_blocks, std::vector<BlockSpec> y_blocks, VectorXd c);

  Index n() const { return c_.size(); }
  Index p() const { return static_cast<Index>(x_blocks_.size()); }
  Index q() const { return static_cast<Index>(y_blocks_.size()); }
  const std::vector<BlockSpec>& x_blocks() const { return x_blocks_; }
  const std::vector<BlockSpec>& y_blocks() const { return y_blocks_; }
  const VectorXd& c() const { return c_; }

  Index x_dim() const;  // sum of x block dims
  Index y_dim() const;

 private:
  std::vector<BlockSpec> x_blocks_;
  std::vector<BlockSpec> y_blocks_;
  VectorXd c_;
};

// Full iterate w = (x_1..x_p, y_1..y_q, lambda).
struct GroupedPoint {
  std::vector<VectorXd> x;
  std::vector<VectorXd> y;
  VectorXd lambda;
};

GroupedPoint zero_point(const SeparableProblem& problem);

// Stacks (x_1..x_p, y_1..y_q, lambda) into one vector, the coordinate order
// used by all analysis matrices.
VectorXd stack_point(const SeparableProblem& problem, const GroupedPoint& w);
GroupedPoint unstack_point(const SeparableProblem& problem, const VectorXd& v);

// Sum_i A_i x_i + Sum_j B_j y_j - c.
VectorXd residual(const SeparableProblem& problem, const GroupedPoint& point);

// Sum_i f_i(x_i) + Sum_j g_j(y_j).
double objective_value(const SeparableProblem& problem, const GroupedPoint& point);

// objective - <lambda, residual> + (beta/2) ||residual||^2.
double augmented_lagrangian(const SeparableProblem& problem, const GroupedPoint& point, double beta);

struct ValidationIssue {
  std::string where;
  std::string message;
};
struct ValidationReport {
  bool ok = true;
  std::vector<ValidationIssue> issues;
  std::string summary() const;
};

// Per-block full-column-rank check (relative tolerance 1e-10 on singular
// values) plus dimension consistency.
ValidationReport validate(const SeparableProblem& problem);

// Random strongly convex quadratic fixture with a known saddle point,
// computed by solving the KKT system directly.
struct QuadraticFixture {
  SeparableProblem problem;
  GroupedPoint w_star;
  double f_star = 0.0;
};
QuadraticFixture make_quadratic_test_problem(Index p, Index q, Index n, std::uint64_t seed);

}  // namespace gsadmm
