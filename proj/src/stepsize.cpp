#include "gsadmm/stepsize.hpp"

#include "gsadmm/csv.hpp"

#include <omp.h>

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gsadmm {

double region_quadratic(double tau, double s) {
  return -tau * tau - s * s - tau * s + tau + s + 1.0;
}

bool in_region_K(double tau, double s) {
  return tau + s > 0.0 && tau <= 1.0 && region_quadratic(tau, s) > 0.0;
}

bool in_region_Kbar(double tau, double s) {
  return tau + s > 0.0 && s <= 1.0 && region_quadratic(tau, s) > 0.0;
}

bool in_region_G(double tau, double s) {
  return tau + s > 0.0 && region_quadratic(tau, s) > 0.0;
}

bool in_region_K1(double tau, double s) {
  return tau + s > 0.0 && tau < 1.0 && region_quadratic(tau, s) > 0.0;
}

XiConstants xi_constants(double tau, double s, double beta) {
  if (tau <= -1.0) throw std::domain_error("xi_constants: tau must exceed -1");
  XiConstants xi;
  xi.xi3 = (1.0 - s) * (1.0 - s) * beta / (1.0 + tau);
  xi.xi4 = (1.0 - tau) / (1.0 + tau);
  xi.xi2 = (2.0 - tau - s) * beta - xi.xi3;
  return xi;
}

std::string ParamReport::summary() const {
  if (ok) return "ok";
  std::string out;
  for (const auto& c : checks) {
    if (c.ok) continue;
    if (!out.empty()) out += "; ";
    out += c.what + ": " + c.detail;
  }
  return out;
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

ParamReport validate_params(int p, int q, const StepsizeParams& params, SweepVariant variant,
                            SpecialCase special_case) {
  ParamReport report;
  auto add = [&](std::string what, bool ok, std::string detail) {
    report.checks.push_back({std::move(what), ok, std::move(detail)});
    report.ok = report.ok && ok;
  };

  add("beta > 0", params.beta > 0, "beta = " + fmt(params.beta));
  if (p < 1 || q < 1) add("group sizes", false, "p, q must be >= 1");

  double tau = params.tau, s = params.s;
  double quad = region_quadratic(tau, s);
  bool in_g = in_region_G(tau, s);
  add("(tau, s) admissible", in_g,
      "tau + s = " + fmt(tau + s) + ", boundary quadratic = " + fmt(quad) +
          " (both must be positive)");
  // For the mirrored sweep the roles of tau and s swap, so the K / Kbar
  // annotation is taken on the swapped pair.
  double tau_eff = variant == SweepVariant::XFirst ? tau : s;
  double s_eff = variant == SweepVariant::XFirst ? s : tau;
  report.in_K = in_region_K(tau_eff, s_eff);
  report.in_Kbar = in_region_Kbar(tau_eff, s_eff);

  bool sigma1_general = params.sigma1 > p - 1;
  bool sigma2_general = params.sigma2 > q - 1;
  bool sigma1_dropped = p == 1 && params.sigma1 == 0.0;
  bool sigma2_dropped = q == 1 && params.sigma2 == 0.0;

  switch (special_case) {
    case SpecialCase::A:
      add("case A shape", q == 1, "requires q = 1, got q = " + std::to_string(q));
      add("case A sigma2", params.sigma2 == 0.0, "requires sigma2 = 0, got " + fmt(params.sigma2));
      add("sigma1 > p - 1", sigma1_general,
          "sigma1 = " + fmt(params.sigma1) + ", p = " + std::to_string(p));
      break;
    case SpecialCase::B:
      add("case B shape", p == 1, "requires p = 1, got p = " + std::to_string(p));
      add("case B sigma1", params.sigma1 == 0.0, "requires sigma1 = 0, got " + fmt(params.sigma1));
      add("sigma2 > q - 1", sigma2_general,
          "sigma2 = " + fmt(params.sigma2) + ", q = " + std::to_string(q));
      break;
    case SpecialCase::None:
      add("sigma1 > p - 1 (or dropped on a singleton group)", sigma1_general || sigma1_dropped,
          "sigma1 = " + fmt(params.sigma1) + ", p = " + std::to_string(p));
      add("sigma2 > q - 1 (or dropped on a singleton group)", sigma2_general || sigma2_dropped,
          "sigma2 = " + fmt(params.sigma2) + ", q = " + std::to_string(q));
      break;
  }
  return report;
}

RegionGrid region_grid(std::pair<double, double> tau_range, std::pair<double, double> s_range,
                       int resolution, int threads) {
  if (resolution < 2) throw std::invalid_argument("region_grid: resolution must be >= 2");
  if (!(tau_range.first < tau_range.second) || !(s_range.first < s_range.second)) {
    throw std::invalid_argument("region_grid: ranges must be increasing");
  }
  if (threads < 1) threads = 1;

  RegionGrid grid;
  grid.resolution = resolution;
  grid.tau_lo = tau_range.first;
  grid.tau_hi = tau_range.second;
  grid.s_lo = s_range.first;
  grid.s_hi = s_range.second;
  grid.tau.resize(resolution);
  grid.s.resize(resolution);
  for (int i = 0; i < resolution; ++i) {
    double t = static_cast<double>(i) / (resolution - 1);
    grid.tau[i] = tau_range.first + t * (tau_range.second - tau_range.first);
    grid.s[i] = s_range.first + t * (s_range.second - s_range.first);
  }
  std::size_t cells = static_cast<std::size_t>(resolution) * resolution;
  grid.in_K.resize(cells);
  grid.in_Kbar.resize(cells);
  grid.in_G.resize(cells);

#pragma omp parallel for schedule(static) num_threads(threads)
  for (int r = 0; r < resolution; ++r) {
    double tau = grid.tau[r];
    std::size_t row = static_cast<std::size_t>(r) * resolution;
    for (int c = 0; c < resolution; ++c) {
      double s = grid.s[c];
      grid.in_K[row + c] = in_region_K(tau, s) ? 1 : 0;
      grid.in_Kbar[row + c] = in_region_Kbar(tau, s) ? 1 : 0;
      grid.in_G[row + c] = in_region_G(tau, s) ? 1 : 0;
    }
  }
  return grid;
}

void write_region_csv(const RegionGrid& grid, const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("write_region_csv: cannot open " + file.string());
  out << "tau,s,in_K,in_Kbar,in_G\n";
  for (int r = 0; r < grid.resolution; ++r) {
    std::size_t row = static_cast<std::size_t>(r) * grid.resolution;
    for (int c = 0; c < grid.resolution; ++c) {
      out << csv::format_double(grid.tau[r]) << ',' << csv::format_double(grid.s[c]) << ','
          << int(grid.in_K[row + c]) << ',' << int(grid.in_Kbar[row + c]) << ','
          << int(grid.in_G[row + c]) << '\n';
    }
  }
  if (!out) throw std::runtime_error("write_region_csv: write failed for " + file.string());
}

}  // namespace gsadmm
