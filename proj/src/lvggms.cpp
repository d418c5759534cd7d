#include "gsadmm/lvggms.hpp"

#include "gsadmm/csv.hpp"
#include "gsadmm/oracles.hpp"
#include "gsadmm/proxlib.hpp"
#include "gsadmm/rng.hpp"

#include <json.hpp>

#include <Eigen/Cholesky>

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace gsadmm::lvggms {

using Eigen::MatrixXd;
using Eigen::VectorXd;

Instance generate_instance(int n, std::uint64_t seed, double density, int sample_factor,
                           double nu, double mu) {
  if (n < 2) throw std::invalid_argument("generate_instance: n must be >= 2");
  if (!(density >= 0)) throw std::invalid_argument("generate_instance: density must be >= 0");
  if (sample_factor < 1) {
    throw std::invalid_argument("generate_instance: sample_factor must be >= 1");
  }
  SplitMix64 rng(seed);

  MatrixXd sinv = MatrixXd::Identity(n, n);
  auto picks = static_cast<long>(std::ceil(density * n * n));
  for (long k = 0; k < picks; ++k) {
    std::uint64_t idx = rng.below(static_cast<std::uint64_t>(n) * n);
    // Column-major linear index, duplicates collapse.
    sinv(static_cast<int>(idx % n), static_cast<int>(idx / n)) = 1.0;
  }
  sinv += sinv.transpose().eval();

  Eigen::SelfAdjointEigenSolver<MatrixXd> es(sinv);
  double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < 0) sinv.diagonal().array() += 1.1 * std::abs(min_eig);

  Eigen::LLT<MatrixXd> llt_prec(sinv);
  if (llt_prec.info() != Eigen::Success) {
    throw std::runtime_error("generate_instance: precision matrix is not positive definite");
  }
  MatrixXd sigma = llt_prec.solve(MatrixXd::Identity(n, n));
  sigma = 0.5 * (sigma + sigma.transpose().eval());

  Eigen::LLT<MatrixXd> llt_cov(sigma);
  if (llt_cov.info() != Eigen::Success) {
    throw std::runtime_error("generate_instance: covariance is not positive definite");
  }
  MatrixXd chol = llt_cov.matrixL();

  const long rows = static_cast<long>(sample_factor) * n;
  MatrixXd samples(rows, n);
  VectorXd g(n);
  for (long r = 0; r < rows; ++r) {
    for (int i = 0; i < n; ++i) g(i) = rng.normal();
    samples.row(r) = (chol * g).transpose();
  }
  Eigen::RowVectorXd mean = samples.colwise().mean();
  samples.rowwise() -= mean;
  MatrixXd C = samples.transpose() * samples / static_cast<double>(rows - 1);
  C = 0.5 * (C + C.transpose().eval());

  Instance instance;
  instance.n = n;
  instance.nu = nu;
  instance.mu = mu;
  instance.seed = seed;
  instance.C = std::move(C);
  return instance;
}

double objective(const Instance& instance, const State& state) {
  Eigen::LLT<MatrixXd> llt(MatrixXd(0.5 * (state.X + state.X.transpose())));
  if (llt.info() != Eigen::Success) {
    throw std::domain_error("objective: X is not positive definite");
  }
  double logdet = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  return (instance.C.array() * state.X.array()).sum() - logdet +
         instance.nu * state.S.cwiseAbs().sum() + instance.mu * state.L.trace();
}

namespace {

VectorXd vec(const MatrixXd& m) { return Eigen::Map<const VectorXd>(m.data(), m.size()); }

MatrixXd unvec(const VectorXd& v, int n) { return Eigen::Map<const MatrixXd>(v.data(), n, n); }

BlockSpec matrix_block(int n, double map_scale, std::shared_ptr<const ProxOracle> oracle,
                       ConstraintSet constraint = ConstraintSet::Unconstrained) {
  BlockSpec b;
  b.dim = static_cast<Index>(n) * n;
  b.map = LinearMap::scaled_identity(b.dim, map_scale);
  b.objective = std::move(oracle);
  b.constraint = constraint;
  return b;
}

}  // namespace

BuiltProblem make_problem(const Instance& instance, Grouping grouping) {
  const int n = instance.n;
  auto x_oracle = std::make_shared<LogDetOracle>(instance.C);
  auto s_oracle = std::make_shared<L1Oracle>(instance.nu);
  auto l_oracle = std::make_shared<TraceOracle>(instance.mu, n);

  std::vector<BlockSpec> xb, yb;
  if (grouping == Grouping::VariantI) {
    xb.push_back(matrix_block(n, 1.0, x_oracle));
    xb.push_back(matrix_block(n, -1.0, s_oracle));
    yb.push_back(matrix_block(n, 1.0, l_oracle, ConstraintSet::PsdCone));
  } else {
    xb.push_back(matrix_block(n, 1.0, x_oracle));
    yb.push_back(matrix_block(n, -1.0, s_oracle));
    yb.push_back(matrix_block(n, 1.0, l_oracle, ConstraintSet::PsdCone));
  }
  VectorXd c = VectorXd::Zero(static_cast<Index>(n) * n);

  BuiltProblem built{SeparableProblem(std::move(xb), std::move(yb), std::move(c)), GroupedPoint{},
                     grouping, n};
  State start;
  start.X = MatrixXd::Identity(n, n);
  start.S = 2.0 * MatrixXd::Identity(n, n);
  start.L = MatrixXd::Identity(n, n);
  start.Lambda = MatrixXd::Zero(n, n);
  built.start = to_point(built, start);
  return built;
}

State to_state(const BuiltProblem& built, const GroupedPoint& w) {
  State st;
  if (built.grouping == Grouping::VariantI) {
    st.X = unvec(w.x[0], built.n);
    st.S = unvec(w.x[1], built.n);
    st.L = unvec(w.y[0], built.n);
  } else {
    st.X = unvec(w.x[0], built.n);
    st.S = unvec(w.y[0], built.n);
    st.L = unvec(w.y[1], built.n);
  }
  st.Lambda = unvec(w.lambda, built.n);
  return st;
}

GroupedPoint to_point(const BuiltProblem& built, const State& state) {
  GroupedPoint w;
  if (built.grouping == Grouping::VariantI) {
    w.x = {vec(state.X), vec(state.S)};
    w.y = {vec(state.L)};
  } else {
    w.x = {vec(state.X)};
    w.y = {vec(state.S), vec(state.L)};
  }
  w.lambda = vec(state.Lambda);
  return w;
}

ErrorMetrics error_metrics(const State& prev, const State& cur, const Instance& instance,
                           std::optional<double> f_star) {
  ErrorMetrics m;
  m.ier = std::max({(cur.X - prev.X).cwiseAbs().maxCoeff(), (cur.S - prev.S).cwiseAbs().maxCoeff(),
                    (cur.L - prev.L).cwiseAbs().maxCoeff()});
  m.cer = (cur.X - cur.S + cur.L).norm();
  if (f_star) {
    double f = objective(instance, cur);
    double denom = std::abs(*f_star);
    m.oer = denom > 0 ? std::abs(f - *f_star) / denom : std::abs(f - *f_star);
  }
  return m;
}

double reference_objective(const Instance& instance, const StepsizeParams& params) {
  BuiltProblem built = make_problem(instance, Grouping::VariantI);
  SolverConfig config;
  config.params = params;
  config.variant = SweepVariant::XFirst;
  SolveResult result = run_steps(built.problem, built.start, config, 1000);
  return objective_value(built.problem, result.point);
}

void save_instance(const Instance& instance, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  csv::write_matrix(dir / "C.csv", instance.C);
  nlohmann::ordered_json j;
  j["n"] = instance.n;
  j["nu"] = instance.nu;
  j["mu"] = instance.mu;
  j["seed"] = instance.seed;
  j["C_file"] = "C.csv";
  std::ofstream out(dir / "instance.json");
  if (!out) throw std::runtime_error("save_instance: cannot open " + (dir / "instance.json").string());
  out << j.dump(2) << '\n';
}

Instance load_instance(const std::filesystem::path& json_path) {
  std::ifstream in(json_path);
  if (!in) throw std::runtime_error("load_instance: cannot open " + json_path.string());
  nlohmann::json j = nlohmann::json::parse(in);
  Instance instance;
  instance.n = j.at("n").get<int>();
  instance.nu = j.at("nu").get<double>();
  instance.mu = j.at("mu").get<double>();
  instance.seed = j.at("seed").get<std::uint64_t>();
  instance.C = csv::read_matrix(json_path.parent_path() / j.at("C_file").get<std::string>());
  if (instance.C.rows() != instance.n || instance.C.cols() != instance.n) {
    throw std::runtime_error("load_instance: covariance shape does not match n");
  }
  return instance;
}

}  // namespace gsadmm::lvggms
