#pragma once

#include <string>
#include <utility>
#include <vector>
#include <cstdint>
#include <filesystem>

namespace gsadmm {

struct StepsizeParams {
  double beta = 1.0;
  double tau = 0.0;
  double s = 1.0;
  double sigma1 = 0.0;
  double sigma2 = 0.0;
};

// Sweep order: XFirst solves the x group, updates the dual by tau*beta,
// solves the y group, updates by s*beta. YFirst mirrors this with the y
// group first and dual steps s then tau.
enum class SweepVariant { XFirst, YFirst };

// Reduced parameter regimes: A drops the y-group proximal term (q = 1,
// sigma2 = 0), B drops the x-group one (p = 1, sigma1 = 0).
enum class SpecialCase { None, A, B };

// The shared quadratic boundary term -tau^2 - s^2 - tau*s + tau + s + 1.
// All region predicates compare it strictly against zero in plain double
// arithmetic: boundary points are out, no epsilon.
double region_quadratic(double tau, double s);

bool in_region_K(double tau, double s);     // tau + s > 0, tau <= 1, quadratic > 0
bool in_region_Kbar(double tau, double s);  // tau + s > 0, s <= 1,  quadratic > 0
bool in_region_G(double tau, double s);     // tau + s > 0,           quadratic > 0
bool in_region_K1(double tau, double s);    // tau + s > 0, tau < 1,  quadratic > 0

struct XiConstants {
  double xi2;  // (2 - tau - s - (1-s)^2/(1+tau)) * beta
  double xi3;  // (1-s)^2 * beta / (1+tau)
  double xi4;  // (1-tau) / (1+tau)
};

// Throws std::domain_error for tau <= -1 (the 1 + tau denominator).
XiConstants xi_constants(double tau, double s, double beta);

struct ParamCheck {
  std::string what;
  bool ok;
  std::string detail;
};

struct ParamReport {
  bool ok = true;
  std::vector<ParamCheck> checks;
  bool in_K = false;    // which sub-region justified the (tau, s) acceptance
  bool in_Kbar = false;
  std::string summary() const;  // one line per failed check; "ok" when clean
};

// Admissibility of (tau, s, sigma1, sigma2, beta) for a (p, q) problem.
// General case: sigma1 > p-1, sigma2 > q-1, (tau, s) in G. Special case A:
// q = 1 and sigma2 = 0 with sigma1 > p-1; B: p = 1 and sigma1 = 0 with
// sigma2 > q-1. A sigma of exactly 0 on a singleton group is accepted under
// the matching special-case rule even when no case is requested, which also
// admits the two-block p = q = 1, sigma1 = sigma2 = 0 reduction.
ParamReport validate_params(int p, int q, const StepsizeParams& params,
                            SweepVariant variant = SweepVariant::XFirst,
                            SpecialCase special_case = SpecialCase::None);

struct RegionGrid {
  int resolution = 0;
  double tau_lo = 0, tau_hi = 0, s_lo = 0, s_hi = 0;
  // Row-major over (tau outer, s inner); cell index r * resolution + c.
  std::vector<double> tau;  // size resolution
  std::vector<double> s;    // size resolution
  std::vector<std::uint8_t> in_K, in_Kbar, in_G;  // size resolution^2
};

// Inclusive endpoints, resolution samples per axis. Throws on resolution < 2
// or inverted ranges.
RegionGrid region_grid(std::pair<double, double> tau_range,
                       std::pair<double, double> s_range, int resolution,
                       int threads = 1);

// Header `tau,s,in_K,in_Kbar,in_G`, booleans as 0/1.
void write_region_csv(const RegionGrid& grid, const std::filesystem::path& file);

}  // namespace gsadmm
