#pragma once

#include "gsadmm/blockspace.hpp"
#include "gsadmm/engine.hpp"
#include "gsadmm/stepsize.hpp"

#include <optional>
#include <string>
#include <vector>

namespace gsadmm {

// Dense analysis matrices on the stacked (x_1..x_p, y_1..y_q, lambda)
// coordinates. Q is the sweep's variational-inequality weight, M the
// correction matrix, H the prediction metric (block-diagonal: the x-group
// metric Hx and a coupled (y, lambda) part), G the per-sweep descent weight.
// Hx0 / Hy0 are the p x p and q x q scalar patterns (sigma on the diagonal,
// -1 off it) whose smallest eigenvalues drive the group metrics.
// In special case A (sigma2 = 0, q = 1) these general forms already reduce
// to the dedicated ones; in special case B (sigma1 = 0, p = 1) the x rows
// and columns vanish and the live content is the (y, lambda) sub-block.
struct AnalysisMatrices {
  MatrixXd Q, M, H, G;
  MatrixXd Hx, Hy;    // group metrics of size x_dim / y_dim
  MatrixXd Hx0, Hy0;  // scalar patterns, p x p and q x q
  SpecialCase special_case = SpecialCase::None;
  Index x_dim = 0, y_dim = 0, n = 0;
};

// Assembles every matrix from the block maps and (beta, tau, s, sigma1,
// sigma2) per the displayed block formulas. Throws when tau + s <= 0
// (M would be singular). x-first sweep order.
AnalysisMatrices build_analysis(const SeparableProblem& problem, const StepsizeParams& params,
                                SpecialCase special_case = SpecialCase::None);

// Correction matrix alone, for either sweep order.
MatrixXd build_M(const SeparableProblem& problem, const StepsizeParams& params,
                 SweepVariant variant);

struct PdReport {
  bool is_pd = false;
  double min_eigenvalue = 0;
  std::string subject;  // which matrix block the eigenvalue refers to
};

// Smallest eigenvalue of H (special case B: of its live (y, lambda)
// sub-block, since the x rows are structurally zero there).
PdReport check_H_pd(const SeparableProblem& problem, const StepsizeParams& params,
                    SpecialCase special_case = SpecialCase::None);
PdReport check_H_pd(const AnalysisMatrices& matrices);

// min eigenvalue over the pattern blocks that exist: Hx0 and Hy0 in the
// general case, Hx0 alone in special case A, Hy0 alone in B. This is the
// explicit constant behind the descent lower bound; a nonpositive value
// means the sigma margins are violated.
double estimate_xi1(const SeparableProblem& problem, const StepsizeParams& params,
                    SpecialCase special_case = SpecialCase::None);

struct StepDefect {
  long k = 0;
  double lhs = 0, rhs = 0;
  double defect = 0;  // positive = violation beyond slack
};

struct CertificateSection {
  std::string name;
  bool ok = true;
  long steps = 0;
  long violations = 0;
  long first_violation = -1;   // sweep index of the earliest violation
  double max_defect = 0;       // worst signed defect (before slack)
  double slack = 0;            // slack actually applied
  std::vector<StepDefect> worst;  // up to the few worst steps, for reports
};

struct CertificateReport {
  bool ok = true;
  double xi1 = 0;
  XiConstants xi{};
  double eta = 0;  // ergodic constant from the first sweep
  PdReport h_pd;
  double structural_h_defect = 0;  // rel. defect of H against Q * inv(M)
  double structural_g_defect = 0;  // rel. defect of G against Q + Q' - M'HM
  std::vector<CertificateSection> sections;
  const CertificateSection* find(const std::string& name) const;
};

// Relative max-abs defects of the two definitional identities.
std::pair<double, double> structural_identity_defects(const AnalysisMatrices& m);

// h(u_t) - h(u_ref) + <w_t - w_ref, J(w_ref)> with
// J(w) = (-A_i' lambda; -B_j' lambda; residual).
double vi_gap(const SeparableProblem& problem, const GroupedPoint& w_t,
              const GroupedPoint& w_ref);

// Runs every certificate over a recorded trajectory:
//  - correction_identity: w^{k+1} = w^k - M (w^k - pred^k), every sweep;
//  - contraction:        ||w^{k+1}-w*||_H^2 <= ||w^k-w*||_H^2 - ||w^k-pred^k||_G^2;
//  - lyapunov:           V_k non-increasing for k >= 1 (tau, s in K);
//  - lower_bound:        the G-norm descent lower bound, k >= 1 (tau, s in K);
//  - ergodic:            gap_t >= 0 and t * gap_t <= eta / 2 for ergodic means.
// Inequality certificates carry 1e-9 relative slack; identity certificates
// 1e-12. The trajectory must come from an x-first run (mirror runs are
// certified through the swapped problem).
CertificateReport certify_trajectory(const SeparableProblem& problem, const Trajectory& trajectory,
                                     const GroupedPoint& w_star, const SolverConfig& config,
                                     const AnalysisMatrices* override_matrices = nullptr);

// Lyapunov value V_k = ||w^k - w*||_H^2 + xi3 ||res^k||^2 + xi4 ||y^k - y^{k-1}||_Hy^2
// for k = 1..K (index 0 of the result is V_1).
std::vector<double> lyapunov_values(const SeparableProblem& problem, const Trajectory& trajectory,
                                    const GroupedPoint& w_star, const AnalysisMatrices& matrices,
                                    const XiConstants& xi);

// Ergodic gaps: gap_t for t = 1..K-1 over running means of the predictions
// emitted from the second sweep on.
std::vector<double> ergodic_gaps(const SeparableProblem& problem, const Trajectory& trajectory,
                                 const GroupedPoint& w_star);

}  // namespace gsadmm
