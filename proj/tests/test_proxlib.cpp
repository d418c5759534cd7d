#include <doctest.h>

#include "gsadmm/proxlib.hpp"
#include "gsadmm/rng.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

using namespace gsadmm;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

// Independent oracle: Newton on the optimality condition of
// min_{g>0} rho*g - log g + (a/2) g^2, i.e. rho - 1/g + a*g = 0.
double newton_gamma(double rho, double a) {
  double g = 1.0 / std::max(1.0, rho + a);
  for (int it = 0; it < 200; ++it) {
    double f = rho - 1.0 / g + a * g;
    double df = 1.0 / (g * g) + a;
    double step = f / df;
    double next = g - step;
    while (next <= 0) {
      step *= 0.5;
      next = g - step;
    }
    if (std::abs(next - g) <= 1e-16 * g) return next;
    g = next;
  }
  return g;
}

MatrixXd random_symmetric(int n, SplitMix64& rng, double scale) {
  MatrixXd m(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) m(r, c) = scale * rng.normal();
  return 0.5 * (m + m.transpose());
}

}  // namespace

TEST_CASE("sym_eig decomposes symmetric matrices, rejects bad input") {
  MatrixXd m(2, 2);
  m << 2, -1, -1, 2;
  SymEig eig = sym_eig(m);
  CHECK(eig.values(0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(eig.values(1) == doctest::Approx(3.0).epsilon(1e-14));
  MatrixXd rebuilt = eig.vectors * eig.values.asDiagonal() * eig.vectors.transpose();
  CHECK((rebuilt - m).cwiseAbs().maxCoeff() <= 1e-13);

  CHECK_THROWS_AS(sym_eig(MatrixXd::Zero(2, 3)), std::invalid_argument);
  MatrixXd bad = m;
  bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(sym_eig(bad), std::invalid_argument);
}

TEST_CASE("prox_logdet_gamma solves the scalar optimality condition") {
  CHECK(prox_logdet_gamma(1.0, 1.0) ==
        doctest::Approx((-1.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-15));

  const double rhos[] = {-50.0, -3.0, -1e-3, 0.0, 1e-3, 0.4, 7.0, 1e6};
  const double as[] = {1e-6, 0.06, 1.0, 18.0, 1e5};
  for (double rho : rhos) {
    for (double a : as) {
      double g = prox_logdet_gamma(rho, a);
      CHECK(g > 0.0);
      // First-principles check plus agreement with an independent solver.
      CHECK(std::abs(rho - 1.0 / g + a * g) <= 1e-9 * (std::abs(rho) + 1.0 / g + a * g));
      CHECK(g == doctest::Approx(newton_gamma(rho, a)).epsilon(1e-12));
    }
  }
}

TEST_CASE("prox_logdet satisfies its matrix stationarity condition") {
  CHECK((prox_logdet(MatrixXd::Zero(3, 3), 1.0) - MatrixXd::Identity(3, 3))
            .cwiseAbs()
            .maxCoeff() <= 1e-14);

  SplitMix64 rng(31);
  for (double a : {0.18, 1.0, 24.0}) {
    MatrixXd r = random_symmetric(5, rng, 2.0);
    MatrixXd x = prox_logdet(r, a);
    SymEig eig = sym_eig(x);
    CHECK(eig.values.minCoeff() > 0.0);
    // R - X^{-1} + a X = 0 at the solution.
    MatrixXd grad = r - x.inverse() + a * x;
    CHECK(grad.cwiseAbs().maxCoeff() <= 1e-9 * (1.0 + r.cwiseAbs().maxCoeff()));
    // Eigenvalue-wise it is the scalar prox applied to the spectrum of R.
    SymEig reig = sym_eig(r);
    MatrixXd from_spectrum = MatrixXd::Zero(5, 5);
    for (int i = 0; i < 5; ++i) {
      from_spectrum += newton_gamma(reig.values(i), a) * reig.vectors.col(i) *
                       reig.vectors.col(i).transpose();
    }
    CHECK((x - from_spectrum).cwiseAbs().maxCoeff() <= 1e-11);
  }
}

TEST_CASE("soft_shrink matches the closed form entrywise") {
  MatrixXd m(2, 2);
  m << 0.7, -0.3, 0.5, -1.25;
  MatrixXd out = soft_shrink(m, 0.5);
  CHECK(out(0, 0) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(out(0, 1) == 0.0);
  CHECK(out(1, 0) == 0.0);
  CHECK(out(1, 1) == doctest::Approx(-0.75).epsilon(1e-15));

  SplitMix64 rng(8);
  MatrixXd big(6, 6);
  for (int r = 0; r < 6; ++r)
    for (int c = 0; c < 6; ++c) big(r, c) = 3.0 * rng.normal();
  MatrixXd shrunk = soft_shrink(big, 0.8);
  for (int r = 0; r < 6; ++r) {
    for (int c = 0; c < 6; ++c) {
      double v = big(r, c);
      double expected = v > 0.8 ? v - 0.8 : (v < -0.8 ? v + 0.8 : 0.0);
      CHECK(shrunk(r, c) == doctest::Approx(expected).epsilon(1e-15));
    }
  }
}

TEST_CASE("psd_project clamps the spectrum and is the nearest psd point") {
  MatrixXd d = MatrixXd::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = -2.0;
  MatrixXd projected = psd_project(d);
  CHECK(projected(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(projected(1, 1) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(std::abs(projected(0, 1)) <= 1e-15);

  MatrixXd m(2, 2);
  m << 0.3, -1.1, -1.1, -0.4;
  MatrixXd p = psd_project(m);
  CHECK(sym_eig(p).values.minCoeff() >= -1e-13);
  double best = (p - m).squaredNorm();

  // Independent oracle: nested grid over symmetric 2x2 psd matrices.
  double lo_a = -3, hi_a = 3, lo_b = -3, hi_b = 3, lo_c = -3, hi_c = 3;
  double grid_best = std::numeric_limits<double>::infinity();
  double ba = 0, bb = 0, bc = 0;
  for (int round = 0; round < 6; ++round) {
    const int steps = 24;
    double sa = (hi_a - lo_a) / steps, sb = (hi_b - lo_b) / steps, sc = (hi_c - lo_c) / steps;
    for (int ia = 0; ia <= steps; ++ia) {
      for (int ib = 0; ib <= steps; ++ib) {
        for (int ic = 0; ic <= steps; ++ic) {
          double a = lo_a + ia * sa, b = lo_b + ib * sb, c = lo_c + ic * sc;
          if (a < 0 || c < 0 || a * c < b * b) continue;
          double cost = (a - m(0, 0)) * (a - m(0, 0)) + 2 * (b - m(0, 1)) * (b - m(0, 1)) +
                        (c - m(1, 1)) * (c - m(1, 1));
          if (cost < grid_best) {
            grid_best = cost;
            ba = a;
            bb = b;
            bc = c;
          }
        }
      }
    }
    lo_a = ba - 2 * sa;
    hi_a = ba + 2 * sa;
    lo_b = bb - 2 * sb;
    hi_b = bb + 2 * sb;
    lo_c = bc - 2 * sc;
    hi_c = bc + 2 * sc;
  }
  CHECK(best <= grid_best + 1e-6);
  CHECK(std::abs(best - grid_best) <= 1e-4);

  // Projection properties on a random matrix: psd, idempotent, variational.
  SplitMix64 rng(55);
  MatrixXd r = random_symmetric(5, rng, 1.5);
  MatrixXd pr = psd_project(r);
  CHECK(sym_eig(pr).values.minCoeff() >= -1e-12);
  CHECK((psd_project(pr) - pr).cwiseAbs().maxCoeff() <= 1e-12);
  for (int trial = 0; trial < 20; ++trial) {
    MatrixXd z = random_symmetric(5, rng, 1.0);
    MatrixXd zpsd = psd_project(z);
    double inner = ((r - pr).array() * (zpsd - pr).array()).sum();
    CHECK(inner <= 1e-10);
  }
}
