#pragma once

#include "gsadmm/blockspace.hpp"
#include "gsadmm/stepsize.hpp"

#include <filesystem>
#include <optional>
#include <vector>

namespace gsadmm {

struct SolverConfig {
  StepsizeParams params;
  SweepVariant variant = SweepVariant::XFirst;
  SpecialCase special_case = SpecialCase::None;
  int max_iter = 1000;
  double tol_ier = 1e-7;                  // TOL, on iterate changes
  double tol_cer = 1e-4;                  // on the residual norm
  std::optional<double> tol_oer;          // Tol, on relative objective error
  std::optional<double> reference_objective;  // F*; OER is skipped without it
  bool record_certificates = false;       // keep the trajectory for certification
  int threads = 1;                        // 1 = serial reference sweep
};

// State after k completed sweeps: current = w^k, previous = w^{k-1},
// predicted = the prediction emitted by the sweep that produced current
// (its x and y equal current's, its dual is the beta-step dual), half_dual
// the intermediate multiplier of that sweep.
struct IterationState {
  GroupedPoint current;
  GroupedPoint previous;
  GroupedPoint predicted;
  VectorXd half_dual;
  VectorXd residual;  // residual at current, reused by the next sweep
  GroupedPoint ergodic_sum;  // running sum of predictions (from the 2nd sweep on)
  long ergodic_count = 0;
  long k = 0;
};

IterationState make_initial_state(const SeparableProblem& problem, const GroupedPoint& start);

// One full sweep. Throws on oracle failure (message names the block) and on
// invalid configs. Within-group block solves run serially when
// config.threads == 1 and as an OpenMP team otherwise; both paths produce
// bit-identical iterates because each block solve is self-contained and all
// group reductions run in fixed left-to-right order on the owning thread.
IterationState step(const SeparableProblem& problem, const IterationState& state,
                    const SolverConfig& config);

// The prediction of the last completed sweep, recomputed from the state:
// x and y from current, dual = previous dual - beta * (mid-sweep residual).
GroupedPoint predicted_point(const SeparableProblem& problem, const IterationState& state,
                             double beta, SweepVariant variant = SweepVariant::XFirst);

// || w^{k+1} - [w^k - M (w^k - w_pred^k)] ||_inf, the defect of the
// prediction-correction identity. state_k1 must be step(state_k).
double correction_identity_check(const SeparableProblem& problem, const IterationState& state_k,
                                 const IterationState& state_k1, const MatrixXd& M);

enum class Termination { TolerancesMet, MaxIter };

struct HistoryRow {
  long k = 0;
  double cer = 0, ier = 0;
  std::optional<double> oer;
  double objective = 0, lagrangian = 0;
  std::optional<double> lyapunov;     // filled by certification runs
  std::optional<double> ergodic_gap;  // filled by certification runs
};

struct ConvergenceHistory {
  std::vector<HistoryRow> rows;
  Termination termination = Termination::MaxIter;
};

struct Trajectory {
  std::vector<GroupedPoint> points;     // w^0 .. w^K
  std::vector<GroupedPoint> predicted;  // predictions of sweeps 1..K
  std::vector<VectorXd> residuals;      // at w^0 .. w^K
};

struct SolveResult {
  GroupedPoint point;
  ConvergenceHistory history;
  std::optional<Trajectory> trajectory;
  IterationState final_state;
};

// Iterates until (IER <= tol_ier and CER <= tol_cer and, when both F* and
// tol_oer are set, OER <= tol_oer) or max_iter sweeps. IER is the largest
// entrywise change across all x and y blocks, CER the residual norm, OER
// the relative objective error against F*.
SolveResult solve(const SeparableProblem& problem, const GroupedPoint& start,
                  const SolverConfig& config);

// Exactly n sweeps, no stopping tests; used by reference runs and
// certification trajectories.
SolveResult run_steps(const SeparableProblem& problem, const GroupedPoint& start,
                      const SolverConfig& config, int n_steps);

GroupedPoint ergodic_average(const IterationState& state);

double iterate_error(const GroupedPoint& prev, const GroupedPoint& cur);  // IER

// Header `k,cer,ier,oer,objective,lagrangian,lyapunov,ergodic_gap`; absent
// values are left empty.
void write_history_csv(const ConvergenceHistory& history, const std::filesystem::path& file);

}  // namespace gsadmm
