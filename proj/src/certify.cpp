#include "gsadmm/certify.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gsadmm {

namespace {

MatrixXd stack_maps(const std::vector<BlockSpec>& blocks, Index n) {
  Index total = 0;
  for (const auto& b : blocks) total += b.dim;
  MatrixXd stacked(n, total);
  Index at = 0;
  for (const auto& b : blocks) {
    stacked.middleCols(at, b.dim) = b.map.to_dense();
    at += b.dim;
  }
  return stacked;
}

// Keeps only the per-block diagonal of a blockwise Gram matrix.
MatrixXd block_diagonal(const MatrixXd& gram, const std::vector<BlockSpec>& blocks) {
  MatrixXd out = MatrixXd::Zero(gram.rows(), gram.cols());
  Index at = 0;
  for (const auto& b : blocks) {
    out.block(at, at, b.dim, b.dim) = gram.block(at, at, b.dim, b.dim);
    at += b.dim;
  }
  return out;
}

MatrixXd pattern_matrix(Index count, double sigma) {
  MatrixXd m = MatrixXd::Constant(count, count, -1.0);
  m.diagonal().setConstant(sigma);
  return m;
}

double min_eigenvalue(const MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (m + m.transpose()));
  return es.eigenvalues().minCoeff();
}

double quad_form(const MatrixXd& w, const VectorXd& v) { return v.dot(w * v); }

GroupedPoint scaled_sum(const GroupedPoint& acc, const GroupedPoint& w, double coeff) {
  GroupedPoint out = acc;
  for (std::size_t i = 0; i < out.x.size(); ++i) out.x[i] += coeff * w.x[i];
  for (std::size_t j = 0; j < out.y.size(); ++j) out.y[j] += coeff * w.y[j];
  out.lambda += coeff * w.lambda;
  return out;
}

GroupedPoint scale_point(const GroupedPoint& w, double coeff) {
  GroupedPoint out = w;
  for (auto& v : out.x) v *= coeff;
  for (auto& v : out.y) v *= coeff;
  out.lambda *= coeff;
  return out;
}

void record_check(CertificateSection& section, long k, double lhs, double rhs, double defect,
                  double slack) {
  ++section.steps;
  section.slack = std::max(section.slack, slack);
  section.max_defect = section.steps == 1 ? defect : std::max(section.max_defect, defect);
  if (defect > slack) {
    ++section.violations;
    section.ok = false;
    if (section.first_violation < 0) section.first_violation = k;
  }
  StepDefect entry{k, lhs, rhs, defect};
  section.worst.push_back(entry);
  std::sort(section.worst.begin(), section.worst.end(),
            [](const StepDefect& a, const StepDefect& b) { return a.defect > b.defect; });
  if (section.worst.size() > 3) section.worst.resize(3);
}

}  // namespace

AnalysisMatrices build_analysis(const SeparableProblem& problem, const StepsizeParams& params,
                                SpecialCase special_case) {
  const double beta = params.beta, tau = params.tau, s = params.s;
  const double sigma1 = params.sigma1, sigma2 = params.sigma2;
  if (!(beta > 0)) throw std::invalid_argument("build_analysis: beta must be positive");
  if (!(tau + s > 0)) {
    throw std::invalid_argument("build_analysis: tau + s must be positive (correction singular)");
  }

  AnalysisMatrices m;
  m.special_case = special_case;
  m.x_dim = problem.x_dim();
  m.y_dim = problem.y_dim();
  m.n = problem.n();
  const Index xd = m.x_dim, yd = m.y_dim, n = m.n;
  const Index total = xd + yd + n;

  MatrixXd A = stack_maps(problem.x_blocks(), n);
  MatrixXd B = stack_maps(problem.y_blocks(), n);
  MatrixXd AtA = A.transpose() * A;
  MatrixXd BtB = B.transpose() * B;
  MatrixXd AtA_diag = block_diagonal(AtA, problem.x_blocks());
  MatrixXd BtB_diag = block_diagonal(BtB, problem.y_blocks());

  m.Hx = beta * ((sigma1 + 1.0) * AtA_diag - AtA);
  m.Hy = beta * ((sigma2 + 1.0) * BtB_diag - BtB);

  m.Q = MatrixXd::Zero(total, total);
  m.Q.topLeftCorner(xd, xd) = m.Hx;
  m.Q.block(xd, xd, yd, yd) = (sigma2 + 1.0) * beta * BtB_diag;
  m.Q.block(xd, xd + yd, yd, n) = -tau * B.transpose();
  m.Q.block(xd + yd, xd, n, yd) = -B;
  m.Q.block(xd + yd, xd + yd, n, n) = (1.0 / beta) * MatrixXd::Identity(n, n);

  m.M = MatrixXd::Identity(total, total);
  m.M.block(xd + yd, xd, n, yd) = -s * beta * B;
  m.M.block(xd + yd, xd + yd, n, n) = (tau + s) * MatrixXd::Identity(n, n);

  const double cross = tau * s / (tau + s);
  m.H = MatrixXd::Zero(total, total);
  m.H.topLeftCorner(xd, xd) = m.Hx;
  m.H.block(xd, xd, yd, yd) = beta * ((sigma2 + 1.0) * BtB_diag - cross * BtB);
  m.H.block(xd, xd + yd, yd, n) = -(tau / (tau + s)) * B.transpose();
  m.H.block(xd + yd, xd, n, yd) = -(tau / (tau + s)) * B;
  m.H.block(xd + yd, xd + yd, n, n) = (1.0 / (beta * (tau + s))) * MatrixXd::Identity(n, n);

  m.G = MatrixXd::Zero(total, total);
  m.G.topLeftCorner(xd, xd) = m.Hx;
  m.G.block(xd, xd, yd, yd) = beta * ((sigma2 + 1.0) * BtB_diag - s * BtB);
  m.G.block(xd, xd + yd, yd, n) = (s - 1.0) * B.transpose();
  m.G.block(xd + yd, xd, n, yd) = (s - 1.0) * B;
  m.G.block(xd + yd, xd + yd, n, n) = ((2.0 - tau - s) / beta) * MatrixXd::Identity(n, n);

  m.Hx0 = pattern_matrix(problem.p(), sigma1);
  m.Hy0 = pattern_matrix(problem.q(), sigma2);
  return m;
}

MatrixXd build_M(const SeparableProblem& problem, const StepsizeParams& params,
                 SweepVariant variant) {
  const double beta = params.beta, tau = params.tau, s = params.s;
  if (!(tau + s > 0)) {
    throw std::invalid_argument("build_M: tau + s must be positive (correction singular)");
  }
  const Index xd = problem.x_dim(), yd = problem.y_dim(), n = problem.n();
  const Index total = xd + yd + n;
  MatrixXd M = MatrixXd::Identity(total, total);
  M.block(xd + yd, xd + yd, n, n) = (tau + s) * MatrixXd::Identity(n, n);
  if (variant == SweepVariant::XFirst) {
    M.block(xd + yd, xd, n, yd) = -s * beta * stack_maps(problem.y_blocks(), n);
  } else {
    M.block(xd + yd, 0, n, xd) = -tau * beta * stack_maps(problem.x_blocks(), n);
  }
  return M;
}

PdReport check_H_pd(const AnalysisMatrices& matrices) {
  PdReport report;
  bool x_part_zero = matrices.Hx.size() == 0 || matrices.Hx.isZero(0.0);
  if (matrices.special_case == SpecialCase::B || x_part_zero) {
    report.subject = "H (y, lambda block)";
    MatrixXd live = matrices.H.bottomRightCorner(matrices.y_dim + matrices.n,
                                                 matrices.y_dim + matrices.n);
    report.min_eigenvalue = min_eigenvalue(live);
  } else {
    report.subject = "H";
    report.min_eigenvalue = min_eigenvalue(matrices.H);
  }
  report.is_pd = report.min_eigenvalue > 0;
  return report;
}

PdReport check_H_pd(const SeparableProblem& problem, const StepsizeParams& params,
                    SpecialCase special_case) {
  return check_H_pd(build_analysis(problem, params, special_case));
}

double estimate_xi1(const SeparableProblem& problem, const StepsizeParams& params,
                    SpecialCase special_case) {
  double from_x = min_eigenvalue(pattern_matrix(problem.p(), params.sigma1));
  double from_y = min_eigenvalue(pattern_matrix(problem.q(), params.sigma2));
  switch (special_case) {
    case SpecialCase::A:
      return from_x;
    case SpecialCase::B:
      return from_y;
    case SpecialCase::None:
    default:
      return std::min(from_x, from_y);
  }
}

std::pair<double, double> structural_identity_defects(const AnalysisMatrices& m) {
  MatrixXd q_m_inv = m.M.transpose().partialPivLu().solve(m.Q.transpose()).transpose();
  double h_scale = std::max(1.0, m.H.cwiseAbs().maxCoeff());
  double h_defect = (m.H - q_m_inv).cwiseAbs().maxCoeff() / h_scale;
  MatrixXd g_from_def = m.Q + m.Q.transpose() - m.M.transpose() * m.H * m.M;
  double g_scale = std::max(1.0, m.G.cwiseAbs().maxCoeff());
  double g_defect = (m.G - g_from_def).cwiseAbs().maxCoeff() / g_scale;
  return {h_defect, g_defect};
}

double vi_gap(const SeparableProblem& problem, const GroupedPoint& w_t,
              const GroupedPoint& w_ref) {
  double gap = objective_value(problem, w_t) - objective_value(problem, w_ref);
  for (Index i = 0; i < problem.p(); ++i) {
    gap -= (w_t.x[i] - w_ref.x[i]).dot(problem.x_blocks()[i].map.apply_transpose(w_ref.lambda));
  }
  for (Index j = 0; j < problem.q(); ++j) {
    gap -= (w_t.y[j] - w_ref.y[j]).dot(problem.y_blocks()[j].map.apply_transpose(w_ref.lambda));
  }
  gap += (w_t.lambda - w_ref.lambda).dot(residual(problem, w_ref));
  return gap;
}

std::vector<double> lyapunov_values(const SeparableProblem& problem, const Trajectory& trajectory,
                                    const GroupedPoint& w_star, const AnalysisMatrices& matrices,
                                    const XiConstants& xi) {
  const std::size_t sweeps = trajectory.predicted.size();
  std::vector<double> values;
  values.reserve(sweeps);
  VectorXd w_star_stacked = stack_point(problem, w_star);
  for (std::size_t k = 1; k <= sweeps; ++k) {
    VectorXd dw = stack_point(problem, trajectory.points[k]) - w_star_stacked;
    VectorXd dy = (stack_point(problem, trajectory.points[k]) -
                   stack_point(problem, trajectory.points[k - 1]))
                      .segment(matrices.x_dim, matrices.y_dim);
    values.push_back(quad_form(matrices.H, dw) + xi.xi3 * trajectory.residuals[k].squaredNorm() +
                     xi.xi4 * quad_form(matrices.Hy, dy));
  }
  return values;
}

std::vector<double> ergodic_gaps(const SeparableProblem& problem, const Trajectory& trajectory,
                                 const GroupedPoint& w_star) {
  std::vector<double> gaps;
  if (trajectory.predicted.size() < 2) return gaps;
  GroupedPoint sum = zero_point(problem);
  for (std::size_t t = 1; t < trajectory.predicted.size(); ++t) {
    sum = scaled_sum(sum, trajectory.predicted[t], 1.0);
    GroupedPoint mean = scale_point(sum, 1.0 / static_cast<double>(t));
    gaps.push_back(vi_gap(problem, mean, w_star));
  }
  return gaps;
}

const CertificateSection* CertificateReport::find(const std::string& name) const {
  for (const auto& section : sections) {
    if (section.name == name) return &section;
  }
  return nullptr;
}

CertificateReport certify_trajectory(const SeparableProblem& problem, const Trajectory& trajectory,
                                     const GroupedPoint& w_star, const SolverConfig& config,
                                     const AnalysisMatrices* override_matrices) {
  if (config.variant != SweepVariant::XFirst) {
    throw std::invalid_argument(
        "certify_trajectory: expects an x-first trajectory; certify mirrored runs through the "
        "swapped problem");
  }
  if (trajectory.points.empty()) {
    throw std::invalid_argument("certify_trajectory: empty trajectory");
  }
  const std::size_t sweeps = trajectory.points.size() - 1;
  if (trajectory.predicted.size() != sweeps || trajectory.residuals.size() != sweeps + 1) {
    throw std::invalid_argument("certify_trajectory: trajectory arrays are inconsistent");
  }
  residual(problem, w_star);  // shape validation

  AnalysisMatrices built;
  const AnalysisMatrices* mats = override_matrices;
  if (!mats) {
    built = build_analysis(problem, config.params, config.special_case);
    mats = &built;
  }
  const double beta = config.params.beta, tau = config.params.tau, s = config.params.s;
  const Index xd = mats->x_dim, yd = mats->y_dim;

  CertificateReport report;
  report.xi = xi_constants(tau, s, beta);
  report.xi1 = estimate_xi1(problem, config.params, config.special_case);
  report.h_pd = check_H_pd(*mats);
  auto [h_defect, g_defect] = structural_identity_defects(*mats);
  report.structural_h_defect = h_defect;
  report.structural_g_defect = g_defect;
  bool structural_ok = h_defect <= 1e-12 && g_defect <= 1e-12;

  std::vector<VectorXd> w(sweeps + 1), w_tilde(sweeps);
  for (std::size_t k = 0; k <= sweeps; ++k) w[k] = stack_point(problem, trajectory.points[k]);
  for (std::size_t k = 0; k < sweeps; ++k) w_tilde[k] = stack_point(problem, trajectory.predicted[k]);
  VectorXd w_star_stacked = stack_point(problem, w_star);

  std::vector<double> dist_h(sweeps + 1), pred_g(sweeps), dy_hy(sweeps + 1, 0.0);
  for (std::size_t k = 0; k <= sweeps; ++k) {
    dist_h[k] = quad_form(mats->H, VectorXd(w[k] - w_star_stacked));
    if (k >= 1) {
      VectorXd dy = (w[k] - w[k - 1]).segment(xd, yd);
      dy_hy[k] = quad_form(mats->Hy, dy);
    }
  }
  for (std::size_t k = 0; k < sweeps; ++k) {
    pred_g[k] = quad_form(mats->G, VectorXd(w[k] - w_tilde[k]));
  }

  if (sweeps >= 1) {
    report.eta = quad_form(mats->H, VectorXd(w_star_stacked - w[1])) +
                 report.xi.xi3 * trajectory.residuals[1].squaredNorm() + report.xi.xi4 * dy_hy[1];
  }

  // Identity along every sweep: w^{k+1} = w^k - M (w^k - pred^k).
  CertificateSection correction;
  correction.name = "correction_identity";
  for (std::size_t k = 0; k < sweeps; ++k) {
    VectorXd expect = w[k] - mats->M * (w[k] - w_tilde[k]);
    double defect = (w[k + 1] - expect).cwiseAbs().maxCoeff();
    double scale = std::max({1.0, w[k].cwiseAbs().maxCoeff(), w[k + 1].cwiseAbs().maxCoeff()});
    record_check(correction, static_cast<long>(k), defect, 0.0, defect, 1e-12 * scale);
  }
  report.sections.push_back(std::move(correction));

  // H-norm contraction toward the reference point, every sweep.
  CertificateSection contraction;
  contraction.name = "contraction";
  double contraction_scale = std::max(1.0, dist_h.empty() ? 1.0 : dist_h[0]);
  for (std::size_t k = 0; k < sweeps; ++k) {
    double lhs = dist_h[k + 1];
    double rhs = dist_h[k] - pred_g[k];
    record_check(contraction, static_cast<long>(k), lhs, rhs, lhs - rhs,
                 1e-9 * contraction_scale);
  }
  report.sections.push_back(std::move(contraction));

  const bool in_k = in_region_K(tau, s);
  if (in_k && sweeps >= 2) {
    std::vector<double> v = lyapunov_values(problem, trajectory, w_star, *mats, report.xi);
    CertificateSection lyapunov;
    lyapunov.name = "lyapunov";
    double scale = std::max(1.0, v.empty() ? 1.0 : v.front());
    for (std::size_t k = 1; k < v.size(); ++k) {
      record_check(lyapunov, static_cast<long>(k), v[k], v[k - 1], v[k] - v[k - 1], 1e-9 * scale);
    }
    report.sections.push_back(std::move(lyapunov));

    CertificateSection lower;
    lower.name = "lower_bound";
    for (std::size_t k = 1; k < sweeps; ++k) {
      double block_sum = 0;
      bool count_x = config.special_case != SpecialCase::B;
      bool count_y = config.special_case != SpecialCase::A;
      if (count_x) {
        for (Index i = 0; i < problem.p(); ++i) {
          block_sum += problem.x_blocks()[i]
                           .map.apply(trajectory.points[k].x[i] - trajectory.points[k + 1].x[i])
                           .squaredNorm();
        }
      }
      if (count_y) {
        for (Index j = 0; j < problem.q(); ++j) {
          block_sum += problem.y_blocks()[j]
                           .map.apply(trajectory.points[k].y[j] - trajectory.points[k + 1].y[j])
                           .squaredNorm();
        }
      }
      double res_next = trajectory.residuals[k + 1].squaredNorm();
      double res_cur = trajectory.residuals[k].squaredNorm();
      double lhs = pred_g[k];
      double rhs = beta * report.xi1 * block_sum + report.xi.xi2 * res_next +
                   report.xi.xi3 * (res_next - res_cur) +
                   report.xi.xi4 * (dy_hy[k + 1] - dy_hy[k]);
      double slack = 1e-9 * std::max({1.0, std::abs(lhs), std::abs(rhs)});
      record_check(lower, static_cast<long>(k), lhs, rhs, rhs - lhs, slack);
    }
    report.sections.push_back(std::move(lower));

    std::vector<double> gaps = ergodic_gaps(problem, trajectory, w_star);
    CertificateSection ergodic;
    ergodic.name = "ergodic";
    double eta_scale = std::max(1.0, std::abs(report.eta));
    for (std::size_t idx = 0; idx < gaps.size(); ++idx) {
      double t = static_cast<double>(idx + 1);
      double gap = gaps[idx];
      record_check(ergodic, static_cast<long>(idx + 1), gap, 0.0, -gap, 1e-10 * eta_scale);
      record_check(ergodic, static_cast<long>(idx + 1), t * gap, 0.5 * report.eta,
                   t * gap - 0.5 * report.eta, 1e-9 * eta_scale);
    }
    report.sections.push_back(std::move(ergodic));
  }

  bool effective_case_a = config.special_case == SpecialCase::A ||
                          (problem.q() == 1 && config.params.sigma2 == 0.0);
  bool pd_required = in_k && !(effective_case_a && tau >= 1.0);
  report.ok = structural_ok && (!pd_required || report.h_pd.is_pd);
  for (const auto& section : report.sections) report.ok = report.ok && section.ok;
  return report;
}

}  // namespace gsadmm
