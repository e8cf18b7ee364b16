#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "slcone/errors.hpp"
#include "slcone/verify.hpp"

using namespace slcone;

namespace {

constexpr double kPi = std::numbers::pi;

// (e^{is}, e^{it}, 0) / sqrt 2: harmonic into S^5 and conformal only when hs = ht.
SurfaceGrid product_circles(int ns, int nt, double Ls, double Lt) {
  const double r = 1 / std::sqrt(2.0);
  return make_grid_from(
      [r](double s, double t) { return C3{std::polar(r, s), std::polar(r, t), 0.0}; },
      {0.0, Ls}, {0.0, Lt}, ns, nt);
}

SurfaceGrid window(const ConeParameters& p, int n) {
  const ConeImmersion im(p);
  double T = im.basic_period();
  if (!std::isfinite(T)) T = 10.0;
  return make_grid(im, {0.0, 2 * kPi}, {-T / 2, T / 2}, n, n);
}

bool converges(const ResidualReport& r) {
  return r.at_roundoff || (r.convergence_order && *r.convergence_order >= 1.9);
}

}  // namespace

TEST_CASE("finite differences on a product of circles reproduce the exact discrete values") {
  const SurfaceGrid g = product_circles(40, 60, 2.0, 3.5);
  const double hs = g.hs(), ht = g.ht();
  const double es = std::pow(std::sin(hs) / hs, 2), et = std::pow(std::sin(ht) / ht, 2);
  const double energy = 0.5 * (es + et);
  const double a1 = (2 * std::cos(hs) - 2) / (hs * hs) + energy;
  const double a2 = (2 * std::cos(ht) - 2) / (ht * ht) + energy;
  const double harm = std::sqrt(0.5 * (a1 * a1 + a2 * a2));
  CHECK(harmonic_residual(g).max_abs == doctest::Approx(harm).epsilon(1e-6));
  CHECK(hopf_differential(g).max_abs == doctest::Approx(std::abs(es - et) / 8).epsilon(1e-6));
  CHECK(legendrian_residual(g).max_abs ==
        doctest::Approx(std::max(std::sin(hs) / (2 * hs), std::sin(ht) / (2 * ht))).epsilon(1e-9));
}

TEST_CASE("residuals of family members converge at second order") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> Th(-3.0, 3.0);
  for (const ConeParameters& p :
       {ConeParameters::make(0.5, 0.0, Th(rng)), ConeParameters::make(0.3, 0.1, Th(rng)),
        ConeParameters::make(0.9, 0.15, Th(rng)), ConeParameters::make(1.0, 0.05, Th(rng)),
        ConeParameters::make(0.4, kJMax, Th(rng)), ConeParameters::make(0.0, 0.0, Th(rng))}) {
    const SurfaceGrid g = window(p, 160);
    CHECK(converges(measure_order([&](const FdOptions& o) { return harmonic_residual(g, o); })));
    CHECK(converges(measure_order([&](const FdOptions& o) { return hopf_differential(g, o); })));
    CHECK(converges(measure_order([&](const FdOptions& o) { return legendrian_residual(g, o); })));
    CHECK(converges(measure_order(
        [&](const FdOptions& o) { return calibration_defect(g, p.theta, o).im_part; })));
    CHECK(converges(measure_order(
        [&](const FdOptions& o) { return calibration_defect(g, p.theta, o).volume_part; })));
    CHECK(converges(measure_order([&](const FdOptions& o) { return curvature_fd_check(g, o); })));
    CHECK(calibration_defect(g, p.theta).orientation == -1);
  }
}

TEST_CASE("the wrong calibration phase is detected") {
  const SurfaceGrid g = window(ConeParameters::make(0.3, 0.1, 0.4), 80);
  CHECK(calibration_defect(g, 0.4).im_part.max_abs <= 1e-6);
  CHECK(calibration_defect(g, 0.9).im_part.max_abs >= 1e-2);
}

TEST_CASE("a perturbed control surface does not converge") {
  const ConeImmersion im(ConeParameters::make(0.3, 0.1));
  const double T = im.basic_period();
  const SurfaceGrid g = make_grid_from(
      [&](double s, double t) {
        C3 u = im.point(s, t);
        u[0] += 0.1 * std::sin(s) * std::cos(t);
        return (1.0 / norm(u)) * u;
      },
      {0.0, 2 * kPi}, {-T / 2, T / 2}, 120, 120);
  for (const ResidualReport& r :
       {measure_order([&](const FdOptions& o) { return harmonic_residual(g, o); }),
        measure_order([&](const FdOptions& o) { return hopf_differential(g, o); }),
        measure_order([&](const FdOptions& o) { return legendrian_residual(g, o); }),
        measure_order([&](const FdOptions& o) { return calibration_defect(g, 0.0, o).im_part; })}) {
    CHECK(r.max_abs > 1e-2);
    CHECK_FALSE(converges(r));
  }
}

TEST_CASE("grid validation") {
  const SurfaceGrid g = product_circles(4, 10, 1.0, 1.0);
  CHECK_THROWS_AS(harmonic_residual(g), InputError);
  const SurfaceGrid h = product_circles(10, 10, 1.0, 1.0);
  FdOptions o;
  o.stencil = 5;
  CHECK_THROWS_AS(harmonic_residual(h, o), InputError);
}

TEST_CASE("serial and parallel residuals are identical") {
  const SurfaceGrid g = window(ConeParameters::make(0.3, 0.1, 0.2), 90);
  FdOptions s, p;
  s.exec = Exec::serial;
  p.exec = Exec::parallel;
  CHECK(harmonic_residual(g, s).max_abs == harmonic_residual(g, p).max_abs);
  CHECK(hopf_differential(g, s).max_abs == hopf_differential(g, p).max_abs);
  CHECK(legendrian_residual(g, s).max_abs == legendrian_residual(g, p).max_abs);
  CHECK(calibration_defect(g, 0.2, s).im_part.max_abs ==
        calibration_defect(g, 0.2, p).im_part.max_abs);
}

TEST_CASE("closed form against the integrated flow") {
  const FlowCrossCheck sphere = neumann_vs_closed_form(ConeParameters::make(0.0, 0.0), -5.0, 5.0);
  CHECK(sphere.distance.max_abs <= 1e-8);
  const double T = ConeImmersion(ConeParameters::make(0.5, 0.0)).basic_period();
  const FlowCrossCheck half = neumann_vs_closed_form(ConeParameters::make(0.5, 0.0), 0.0, T);
  CHECK(half.distance.max_abs <= 1e-8);
  CHECK(half.y_spread_flow == doctest::Approx(half.y_spread_closed).epsilon(1e-6));
}
