#include "gsadmm/blockspace.hpp"

#include "gsadmm/oracles.hpp"
#include "gsadmm/rng.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <stdexcept>

namespace gsadmm {

LinearMap LinearMap::dense(MatrixXd m) {
  LinearMap map;
  map.is_identity_ = false;
  map.dense_ = std::move(m);
  return map;
}

LinearMap LinearMap::scaled_identity(Index dim, double alpha) {
  LinearMap map;
  map.is_identity_ = true;
  map.dim_ = dim;
  map.alpha_ = alpha;
  return map;
}

VectorXd LinearMap::apply(const VectorXd& v) const {
  return is_identity_ ? VectorXd(alpha_ * v) : VectorXd(dense_ * v);
}

VectorXd LinearMap::apply_transpose(const VectorXd& r) const {
  return is_identity_ ? VectorXd(alpha_ * r) : VectorXd(dense_.transpose() * r);
}

MatrixXd LinearMap::gram() const {
  if (is_identity_) return alpha_ * alpha_ * MatrixXd::Identity(dim_, dim_);
  return dense_.transpose() * dense_;
}

MatrixXd LinearMap::to_dense() const {
  if (is_identity_) return alpha_ * MatrixXd::Identity(dim_, dim_);
  return dense_;
}

double LinearMap::min_singular_value() const {
  if (is_identity_) return std::abs(alpha_);
  if (dense_.size() == 0) return 0.0;
  return Eigen::JacobiSVD<MatrixXd>(dense_).singularValues().minCoeff();
}

double LinearMap::max_singular_value() const {
  if (is_identity_) return std::abs(alpha_);
  if (dense_.size() == 0) return 0.0;
  return Eigen::JacobiSVD<MatrixXd>(dense_).singularValues().maxCoeff();
}

namespace {

void check_block_shapes(const std::vector<BlockSpec>& blocks, const char* group, Index n) {
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const BlockSpec& b = blocks[i];
    std::string where = std::string(group) + "-block " + std::to_string(i);
    if (b.dim < 1) throw std::invalid_argument(where + ": dim must be >= 1");
    if (b.map.cols() != b.dim) {
      throw std::invalid_argument(where + ": map has " + std::to_string(b.map.cols()) +
                                  " columns, block dim is " + std::to_string(b.dim));
    }
    if (b.map.rows() != n) {
      throw std::invalid_argument(where + ": map has " + std::to_string(b.map.rows()) +
                                  " rows, problem n is " + std::to_string(n));
    }
    if (!b.objective) throw std::invalid_argument(where + ": missing objective oracle");
  }
}

}  // namespace

SeparableProblem::SeparableProblem(std::vector<BlockSpec> x_blocks, std::vector<BlockSpec> y_blocks,
                                   VectorXd c)
    : x_blocks_(std::move(x_blocks)), y_blocks_(std::move(y_blocks)), c_(std::move(c)) {
  if (x_blocks_.empty() || y_blocks_.empty()) {
    throw std::invalid_argument("problem needs at least one block in each group");
  }
  check_block_shapes(x_blocks_, "x", n());
  check_block_shapes(y_blocks_, "y", n());
}

Index SeparableProblem::x_dim() const {
  Index d = 0;
  for (const auto& b : x_blocks_) d += b.dim;
  return d;
}

Index SeparableProblem::y_dim() const {
  Index d = 0;
  for (const auto& b : y_blocks_) d += b.dim;
  return d;
}

GroupedPoint zero_point(const SeparableProblem& problem) {
  GroupedPoint w;
  w.x.reserve(problem.p());
  for (const auto& b : problem.x_blocks()) w.x.push_back(VectorXd::Zero(b.dim));
  w.y.reserve(problem.q());
  for (const auto& b : problem.y_blocks()) w.y.push_back(VectorXd::Zero(b.dim));
  w.lambda = VectorXd::Zero(problem.n());
  return w;
}

VectorXd stack_point(const SeparableProblem& problem, const GroupedPoint& w) {
  VectorXd v(problem.x_dim() + problem.y_dim() + problem.n());
  Index at = 0;
  for (Index i = 0; i < problem.p(); ++i) {
    v.segment(at, w.x[i].size()) = w.x[i];
    at += w.x[i].size();
  }
  for (Index j = 0; j < problem.q(); ++j) {
    v.segment(at, w.y[j].size()) = w.y[j];
    at += w.y[j].size();
  }
  v.segment(at, w.lambda.size()) = w.lambda;
  return v;
}

GroupedPoint unstack_point(const SeparableProblem& problem, const VectorXd& v) {
  GroupedPoint w;
  Index at = 0;
  for (const auto& b : problem.x_blocks()) {
    w.x.push_back(v.segment(at, b.dim));
    at += b.dim;
  }
  for (const auto& b : problem.y_blocks()) {
    w.y.push_back(v.segment(at, b.dim));
    at += b.dim;
  }
  w.lambda = v.segment(at, problem.n());
  return w;
}

namespace {

void check_point_shapes(const SeparableProblem& problem, const GroupedPoint& w) {
  if (static_cast<Index>(w.x.size()) != problem.p() ||
      static_cast<Index>(w.y.size()) != problem.q() || w.lambda.size() != problem.n()) {
    throw std::invalid_argument("point group sizes do not match the problem");
  }
  for (Index i = 0; i < problem.p(); ++i) {
    if (w.x[i].size() != problem.x_blocks()[i].dim) {
      throw std::invalid_argument("x-block " + std::to_string(i) + ": point dim " +
                                  std::to_string(w.x[i].size()) + " vs block dim " +
                                  std::to_string(problem.x_blocks()[i].dim));
    }
  }
  for (Index j = 0; j < problem.q(); ++j) {
    if (w.y[j].size() != problem.y_blocks()[j].dim) {
      throw std::invalid_argument("y-block " + std::to_string(j) + ": point dim " +
                                  std::to_string(w.y[j].size()) + " vs block dim " +
                                  std::to_string(problem.y_blocks()[j].dim));
    }
  }
}

}  // namespace

VectorXd residual(const SeparableProblem& problem, const GroupedPoint& point) {
  check_point_shapes(problem, point);
  VectorXd r = -problem.c();
  for (Index i = 0; i < problem.p(); ++i) r += problem.x_blocks()[i].map.apply(point.x[i]);
  for (Index j = 0; j < problem.q(); ++j) r += problem.y_blocks()[j].map.apply(point.y[j]);
  return r;
}

double objective_value(const SeparableProblem& problem, const GroupedPoint& point) {
  check_point_shapes(problem, point);
  double v = 0;
  for (Index i = 0; i < problem.p(); ++i) v += problem.x_blocks()[i].objective->eval(point.x[i]);
  for (Index j = 0; j < problem.q(); ++j) v += problem.y_blocks()[j].objective->eval(point.y[j]);
  return v;
}

double augmented_lagrangian(const SeparableProblem& problem, const GroupedPoint& point,
                            double beta) {
  if (!(beta > 0)) throw std::invalid_argument("beta must be positive");
  VectorXd r = residual(problem, point);
  return objective_value(problem, point) - point.lambda.dot(r) + 0.5 * beta * r.squaredNorm();
}

std::string ValidationReport::summary() const {
  if (ok) return "ok";
  std::string s;
  for (const auto& issue : issues) {
    if (!s.empty()) s += "; ";
    s += issue.where + ": " + issue.message;
  }
  return s;
}

ValidationReport validate(const SeparableProblem& problem) {
  constexpr double rank_tol = 1e-10;
  ValidationReport report;
  auto check_group = [&](const std::vector<BlockSpec>& blocks, const char* group) {
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      const BlockSpec& b = blocks[i];
      std::string where = std::string(group) + "-block " + std::to_string(i);
      if (b.map.rows() < b.map.cols()) {
        report.ok = false;
        report.issues.push_back({where, "map is wider than tall, cannot have full column rank"});
        continue;
      }
      double smin = b.map.min_singular_value();
      double smax = b.map.max_singular_value();
      if (!(smin > rank_tol * smax) || smax == 0.0) {
        report.ok = false;
        report.issues.push_back(
            {where, "rank deficient: min/max singular value " + std::to_string(smin) + " / " +
                        std::to_string(smax)});
      }
    }
  };
  check_group(problem.x_blocks(), "x");
  check_group(problem.y_blocks(), "y");
  return report;
}

QuadraticFixture make_quadratic_test_problem(Index p, Index q, Index n, std::uint64_t seed) {
  if (p < 1 || q < 1 || n < 1) throw std::invalid_argument("p, q, n must be >= 1");
  SplitMix64 rng(seed);

  auto random_spd = [&](Index d) {
    MatrixXd g(d, d);
    for (Index r = 0; r < d; ++r)
      for (Index c = 0; c < d; ++c) g(r, c) = rng.normal();
    MatrixXd m = g.transpose() * g / static_cast<double>(2 * d);
    m += 0.5 * MatrixXd::Identity(d, d);
    return m;
  };
  auto random_map = [&](Index d) {
    MatrixXd a(n, d);
    for (Index r = 0; r < n; ++r)
      for (Index c = 0; c < d; ++c) a(r, c) = rng.normal();
    return a;
  };
  auto random_vec = [&](Index d) {
    VectorXd v(d);
    for (Index r = 0; r < d; ++r) v(r) = rng.normal();
    return v;
  };
  // Block dims in [ceil(n/2), n] so the stacked [A B] has full row rank
  // almost surely and the KKT system below is nonsingular.
  auto random_dim = [&]() {
    Index lo = (n + 1) / 2;
    return lo + static_cast<Index>(rng.below(static_cast<std::uint64_t>(n - lo + 1)));
  };

  std::vector<BlockSpec> xb, yb;
  std::vector<MatrixXd> Ps;
  std::vector<VectorXd> qs;
  for (Index i = 0; i < p + q; ++i) {
    Index d = random_dim();
    MatrixXd P = random_spd(d);
    VectorXd lin = random_vec(d);
    BlockSpec b;
    b.dim = d;
    b.map = LinearMap::dense(random_map(d));
    b.objective = std::make_shared<QuadraticOracle>(P, lin);
    (i < p ? xb : yb).push_back(std::move(b));
    Ps.push_back(std::move(P));
    qs.push_back(std::move(lin));
  }
  VectorXd c = random_vec(n);

  SeparableProblem problem(std::move(xb), std::move(yb), c);

  // Saddle point from the KKT system
  //   P u - [A B]' lambda = -q,   [A B] u = c.
  Index ud = problem.x_dim() + problem.y_dim();
  MatrixXd kkt = MatrixXd::Zero(ud + n, ud + n);
  VectorXd rhs(ud + n);
  Index at = 0;
  auto put_block = [&](const BlockSpec& b, const MatrixXd& P, const VectorXd& lin) {
    kkt.block(at, at, b.dim, b.dim) = P;
    kkt.block(at, ud, b.dim, n) = -b.map.to_dense().transpose();
    kkt.block(ud, at, n, b.dim) = b.map.to_dense();
    rhs.segment(at, b.dim) = -lin;
    at += b.dim;
  };
  for (Index i = 0; i < p; ++i) put_block(problem.x_blocks()[i], Ps[i], qs[i]);
  for (Index j = 0; j < q; ++j) put_block(problem.y_blocks()[j], Ps[p + j], qs[p + j]);
  rhs.segment(ud, n) = c;

  VectorXd sol = kkt.fullPivLu().solve(rhs);
  double kkt_defect = (kkt * sol - rhs).norm();
  if (!(kkt_defect <= 1e-8 * (1.0 + rhs.norm()))) {
    throw std::runtime_error("fixture KKT solve failed, defect " + std::to_string(kkt_defect));
  }

  QuadraticFixture fixture{std::move(problem), GroupedPoint{}, 0.0};
  VectorXd stacked(ud + n);
  stacked = sol;
  fixture.w_star = unstack_point(fixture.problem, stacked);
  fixture.f_star = objective_value(fixture.problem, fixture.w_star);
  return fixture;
}

}  // namespace gsadmm
