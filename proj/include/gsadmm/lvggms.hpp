#pragma once

#include "gsadmm/blockspace.hpp"
#include "gsadmm/engine.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>

namespace gsadmm::lvggms {

// Latent-variable Gaussian graphical model selection:
//   min <X, C> - logdet X + nu ||S||_1 + mu tr(L)   s.t.  X - S + L = 0, L >= 0.
struct Instance {
  int n = 0;
  double nu = 0.005;
  double mu = 0.05;
  std::uint64_t seed = 0;
  Eigen::MatrixXd C;
};

// Synthetic covariance: start from the identity precision matrix, set
// ceil(density * n^2) randomly drawn linear positions (with replacement,
// duplicates collapse) to 1, symmetrize by addition, shift by 1.1|lambda_min|I
// if indefinite, invert, draw sample_factor * n Gaussian samples through the
// Cholesky factor, and return their sample covariance. Deterministic per seed.
Instance generate_instance(int n, std::uint64_t seed, double density = 0.001,
                           int sample_factor = 10, double nu = 0.005, double mu = 0.05);

struct State {
  Eigen::MatrixXd X, S, L, Lambda;
};

// <X, C> - logdet X + nu ||S||_1 + mu tr(L); throws std::domain_error when X
// is not positive definite.
double objective(const Instance& instance, const State& state);

// VariantI: x group (X, S), y group (L). VariantII: x group (X), y group (S, L).
enum class Grouping { VariantI, VariantII };

struct BuiltProblem {
  SeparableProblem problem;
  GroupedPoint start;  // (I, 2I, I, 0)
  Grouping grouping;
  int n = 0;
};

BuiltProblem make_problem(const Instance& instance, Grouping grouping);

State to_state(const BuiltProblem& built, const GroupedPoint& w);
GroupedPoint to_point(const BuiltProblem& built, const State& state);

struct ErrorMetrics {
  double ier = 0, cer = 0;
  std::optional<double> oer;
};
// IER: largest entrywise |prev - cur| over X, S, L. CER: ||X - S + L||_F.
// OER: |F - F*| / |F*| when F* is given.
ErrorMetrics error_metrics(const State& prev, const State& cur, const Instance& instance,
                           std::optional<double> f_star);

// Reference optimal value: the x-first sweep on the VariantI grouping for
// exactly 1000 iterations, no early stop. params must be valid for
// VariantI's (p, q) = (2, 1).
double reference_objective(const Instance& instance, const StepsizeParams& params);

// JSON manifest {n, nu, mu, seed, C_file} next to a CSV covariance.
void save_instance(const Instance& instance, const std::filesystem::path& dir);
Instance load_instance(const std::filesystem::path& json_path);

}  // namespace gsadmm::lvggms
