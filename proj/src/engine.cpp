#include "gsadmm/engine.hpp"

#include "gsadmm/csv.hpp"

#include <omp.h>

#include <cmath>
#include <exception>
#include <fstream>
#include <stdexcept>
#include <string>

namespace gsadmm {

namespace {

VectorXd group_residual(const SeparableProblem& problem, const std::vector<VectorXd>& xs,
                        const std::vector<VectorXd>& ys) {
  VectorXd r = -problem.c();
  for (Index i = 0; i < problem.p(); ++i) r += problem.x_blocks()[i].map.apply(xs[i]);
  for (Index j = 0; j < problem.q(); ++j) r += problem.y_blocks()[j].map.apply(ys[j]);
  return r;
}

// One Jacobi phase over a block group: every block reads the same snapshot
// and shift, so the solves are independent. The parallel path distributes
// blocks over an OpenMP team; iterates are bitwise equal to the serial path
// because each solve is self-contained and nothing is reduced here.
void solve_group(const std::vector<BlockSpec>& blocks, const std::vector<VectorXd>& in,
                 std::vector<VectorXd>& out, double a, const VectorXd& shift, const char* group,
                 int threads) {
  const int nb = static_cast<int>(blocks.size());
  out.resize(nb);
  if (threads == 1 || nb == 1) {
    for (int b = 0; b < nb; ++b) {
      try {
        VectorXd z = blocks[b].map.apply(in[b]) + shift;
        out[b] = blocks[b].objective->prox_solve(blocks[b].map, a, z);
      } catch (const std::exception& e) {
        throw std::runtime_error(std::string(group) + "-block " + std::to_string(b) + ": " +
                                 e.what());
      }
    }
    return;
  }

  std::vector<std::exception_ptr> errors(nb);
#pragma omp parallel for schedule(static) num_threads(threads)
  for (int b = 0; b < nb; ++b) {
    try {
      VectorXd z = blocks[b].map.apply(in[b]) + shift;
      out[b] = blocks[b].objective->prox_solve(blocks[b].map, a, z);
    } catch (const std::exception& e) {
      errors[b] = std::make_exception_ptr(std::runtime_error(
          std::string(group) + "-block " + std::to_string(b) + ": " + e.what()));
    } catch (...) {
      errors[b] = std::current_exception();
    }
  }
  for (int b = 0; b < nb; ++b) {
    if (errors[b]) std::rethrow_exception(errors[b]);
  }
}

void add_scaled(GroupedPoint& acc, const GroupedPoint& w) {
  for (std::size_t i = 0; i < acc.x.size(); ++i) acc.x[i] += w.x[i];
  for (std::size_t j = 0; j < acc.y.size(); ++j) acc.y[j] += w.y[j];
  acc.lambda += w.lambda;
}

}  // namespace

IterationState make_initial_state(const SeparableProblem& problem, const GroupedPoint& start) {
  IterationState st;
  st.current = start;
  st.previous = start;
  st.predicted = start;
  st.half_dual = start.lambda;
  st.residual = residual(problem, start);  // validates the point's shapes
  st.ergodic_sum = zero_point(problem);
  st.ergodic_count = 0;
  st.k = 0;
  return st;
}

IterationState step(const SeparableProblem& problem, const IterationState& state,
                    const SolverConfig& config) {
  ParamReport report = validate_params(static_cast<int>(problem.p()),
                                       static_cast<int>(problem.q()), config.params,
                                       config.variant, config.special_case);
  if (!report.ok) throw std::invalid_argument("step: " + report.summary());
  if (config.threads < 1) throw std::invalid_argument("step: threads must be >= 1");

  const double beta = config.params.beta;
  const double tau = config.params.tau;
  const double s = config.params.s;
  const double a1 = (1.0 + config.params.sigma1) * beta;
  const double a2 = (1.0 + config.params.sigma2) * beta;

  IterationState next;
  VectorXd res_mid, lambda_tilde, half_dual, res_next, lambda_next;

  if (config.variant == SweepVariant::XFirst) {
    VectorXd shift_x = (state.current.lambda - beta * state.residual) / a1;
    solve_group(problem.x_blocks(), state.current.x, next.current.x, a1, shift_x, "x",
                config.threads);
    res_mid = group_residual(problem, next.current.x, state.current.y);
    lambda_tilde = state.current.lambda - beta * res_mid;
    half_dual = state.current.lambda - tau * beta * res_mid;

    VectorXd shift_y = (half_dual - beta * res_mid) / a2;
    solve_group(problem.y_blocks(), state.current.y, next.current.y, a2, shift_y, "y",
                config.threads);
    res_next = group_residual(problem, next.current.x, next.current.y);
    lambda_next = half_dual - s * beta * res_next;
  } else {
    VectorXd shift_y = (state.current.lambda - beta * state.residual) / a2;
    solve_group(problem.y_blocks(), state.current.y, next.current.y, a2, shift_y, "y",
                config.threads);
    res_mid = group_residual(problem, state.current.x, next.current.y);
    lambda_tilde = state.current.lambda - beta * res_mid;
    half_dual = state.current.lambda - s * beta * res_mid;

    VectorXd shift_x = (half_dual - beta * res_mid) / a1;
    solve_group(problem.x_blocks(), state.current.x, next.current.x, a1, shift_x, "x",
                config.threads);
    res_next = group_residual(problem, next.current.x, next.current.y);
    lambda_next = half_dual - tau * beta * res_next;
  }

  next.previous = state.current;
  next.current.lambda = std::move(lambda_next);
  next.predicted.x = next.current.x;
  next.predicted.y = next.current.y;
  next.predicted.lambda = std::move(lambda_tilde);
  next.half_dual = std::move(half_dual);
  next.residual = std::move(res_next);
  next.ergodic_sum = state.ergodic_sum;
  next.ergodic_count = state.ergodic_count;
  if (state.k >= 1) {
    add_scaled(next.ergodic_sum, next.predicted);
    ++next.ergodic_count;
  }
  next.k = state.k + 1;
  return next;
}

GroupedPoint predicted_point(const SeparableProblem& problem, const IterationState& state,
                             double beta, SweepVariant variant) {
  GroupedPoint w;
  w.x = state.current.x;
  w.y = state.current.y;
  VectorXd res_mid = variant == SweepVariant::XFirst
                         ? group_residual(problem, state.current.x, state.previous.y)
                         : group_residual(problem, state.previous.x, state.current.y);
  w.lambda = state.previous.lambda - beta * res_mid;
  return w;
}

double correction_identity_check(const SeparableProblem& problem, const IterationState& state_k,
                                 const IterationState& state_k1, const MatrixXd& M) {
  VectorXd wk = stack_point(problem, state_k.current);
  VectorXd wk1 = stack_point(problem, state_k1.current);
  VectorXd wt = stack_point(problem, state_k1.predicted);
  VectorXd defect = wk1 - (wk - M * (wk - wt));
  return defect.size() == 0 ? 0.0 : defect.cwiseAbs().maxCoeff();
}

double iterate_error(const GroupedPoint& prev, const GroupedPoint& cur) {
  double ier = 0;
  for (std::size_t i = 0; i < cur.x.size(); ++i) {
    ier = std::max(ier, (cur.x[i] - prev.x[i]).cwiseAbs().maxCoeff());
  }
  for (std::size_t j = 0; j < cur.y.size(); ++j) {
    ier = std::max(ier, (cur.y[j] - prev.y[j]).cwiseAbs().maxCoeff());
  }
  return ier;
}

GroupedPoint ergodic_average(const IterationState& state) {
  if (state.ergodic_count == 0) {
    throw std::logic_error("ergodic_average: no predictions accumulated yet");
  }
  GroupedPoint avg = state.ergodic_sum;
  double inv = 1.0 / static_cast<double>(state.ergodic_count);
  for (auto& v : avg.x) v *= inv;
  for (auto& v : avg.y) v *= inv;
  avg.lambda *= inv;
  return avg;
}

namespace {

SolveResult run_loop(const SeparableProblem& problem, const GroupedPoint& start,
                     const SolverConfig& config, int budget, bool use_tolerances) {
  ParamReport report = validate_params(static_cast<int>(problem.p()),
                                       static_cast<int>(problem.q()), config.params,
                                       config.variant, config.special_case);
  if (!report.ok) throw std::invalid_argument("solve: " + report.summary());
  if (budget < 0) throw std::invalid_argument("solve: iteration budget must be >= 0");

  IterationState state = make_initial_state(problem, start);

  SolveResult result;
  result.history.termination = Termination::MaxIter;
  if (config.record_certificates) {
    Trajectory traj;
    traj.points.push_back(state.current);
    traj.residuals.push_back(state.residual);
    result.trajectory = std::move(traj);
  }

  const bool oer_active = config.reference_objective.has_value() && config.tol_oer.has_value();
  for (int k = 1; k <= budget; ++k) {
    state = step(problem, state, config);

    HistoryRow row;
    row.k = state.k;
    row.ier = iterate_error(state.previous, state.current);
    row.cer = state.residual.norm();
    row.objective = objective_value(problem, state.current);
    row.lagrangian = row.objective - state.current.lambda.dot(state.residual) +
                     0.5 * config.params.beta * state.residual.squaredNorm();
    if (config.reference_objective) {
      double fstar = *config.reference_objective;
      double denom = std::abs(fstar);
      row.oer = denom > 0 ? std::abs(row.objective - fstar) / denom
                          : std::abs(row.objective - fstar);
    }
    result.history.rows.push_back(row);

    if (result.trajectory) {
      result.trajectory->points.push_back(state.current);
      result.trajectory->predicted.push_back(state.predicted);
      result.trajectory->residuals.push_back(state.residual);
    }

    if (use_tolerances && row.ier <= config.tol_ier && row.cer <= config.tol_cer &&
        (!oer_active || *row.oer <= *config.tol_oer)) {
      result.history.termination = Termination::TolerancesMet;
      break;
    }
  }

  result.point = state.current;
  result.final_state = std::move(state);
  return result;
}

}  // namespace

SolveResult solve(const SeparableProblem& problem, const GroupedPoint& start,
                  const SolverConfig& config) {
  if (config.max_iter < 0) throw std::invalid_argument("solve: max_iter must be >= 0");
  return run_loop(problem, start, config, config.max_iter, true);
}

SolveResult run_steps(const SeparableProblem& problem, const GroupedPoint& start,
                      const SolverConfig& config, int n_steps) {
  return run_loop(problem, start, config, n_steps, false);
}

void write_history_csv(const ConvergenceHistory& history, const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("write_history_csv: cannot open " + file.string());
  out << "k,cer,ier,oer,objective,lagrangian,lyapunov,ergodic_gap\n";
  for (const auto& row : history.rows) {
    out << row.k << ',' << csv::format_double(row.cer) << ',' << csv::format_double(row.ier) << ',';
    if (row.oer) out << csv::format_double(*row.oer);
    out << ',' << csv::format_double(row.objective) << ',' << csv::format_double(row.lagrangian) << ',';
    if (row.lyapunov) out << csv::format_double(*row.lyapunov);
    out << ',';
    if (row.ergodic_gap) out << csv::format_double(*row.ergodic_gap);
    out << '\n';
  }
  if (!out) throw std::runtime_error("write_history_csv: write failed for " + file.string());
}

}  // namespace gsadmm
