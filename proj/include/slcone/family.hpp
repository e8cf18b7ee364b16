#pragma once

#include <cmath>
#include <numbers>

#include "slcone/cvec.hpp"
#include "slcone/elliptic.hpp"
#include "slcone/neumann.hpp"

namespace slcone {

// Largest admissible angular-momentum constant, 1 / (3 sqrt 3).
inline const double kJMax = 1.0 / (3.0 * std::sqrt(3.0));

// (alpha, J, theta) selecting the immersion u_{alpha,J} with calibration phase theta.
struct ConeParameters {
  SymmetryAxis axis = SymmetryAxis::from_alpha(0.0);
  double J = 0.0;
  double theta = 0.0;

  // Validates ranges; J within 1e-15 above kJMax is snapped to kJMax.
  static ConeParameters make(double alpha, double J, double theta = 0.0);
  double alpha() const { return axis.alpha; }
};

enum class Degeneracy {
  none,
  sphere,           // alpha = 0, J = 0: k = 1, infinite period, totally geodesic sphere
  flat_alpha_one,   // alpha = 1: mu3 = 0 and y = |Az|^2 = 2
  flat_gamma_zero,  // J = kJMax: gamma = 0 identically, R_j^2 = 1/3
};

const char* to_string(Degeneracy d);

struct GammaSolution {
  EllipticData elliptic;
  double gamma0 = 0.0;         // gamma(0) = G2 in the implemented time origin
  double C = 0.0;              // curvature constant, -C = prod lambda^2 + J^2 prod mu^2
  double basic_period_T = 0.0; // 2 K(k) / r
  // R_j^2 at the two turning points gamma = G1 and gamma = G2, each evaluated
  // without cancellation so that tiny radii keep their relative precision.
  R3 rsq_at_g1{};
  R3 rsq_at_g2{};
  Degeneracy degeneracy = Degeneracy::none;

  bool flat() const {
    return degeneracy == Degeneracy::flat_alpha_one || degeneracy == Degeneracy::flat_gamma_zero;
  }
};

// Roots of J^2 = prod_j (mu_j gamma + 1/3), sorted G2 <= 0 <= G1 <= G3, with
// r^2 = mu1 mu2 mu3 (G3 - G2) and k^2 = (G2 - G1) / (G2 - G3).
EllipticData cubic_roots(const ConeParameters& p);
GammaSolution solve_gamma(const ConeParameters& p);

// The cubic J^2 = ... written as P(gamma) = prod_j (mu_j gamma + 1/3) - J^2.
double gamma_cubic(const ConeParameters& p, double gamma);

struct GammaValue {
  double gamma = 0.0;
  double gamma_dot = 0.0;
};

// gamma(t) = G2 - (G2 - G1) sn^2(r t, k) and its derivative.
GammaValue gamma_closed_form(const EllipticData& ed, double t);

// R_j^2 = mu_j (gamma(t) - gamma_j) with gamma_j = -1 / (3 mu_j), i.e. mu_j gamma + 1/3.
// Throws ConsistencyError if some R_j^2 < -1e-12.
R3 radii(const EllipticData& ed, const SymmetryAxis& axis, double t);

struct ImmersionSample {
  double s = 0.0;
  double t = 0.0;
  C3 u{};
  double y = 0.0;  // conformal factor |Az|^2
  double K = 0.0;  // Gauss curvature 1 + 2 C y^-3
  R3 theta{};      // unwrapped phases theta_j(t)
};

struct CurvatureRange {
  double K_min = 0.0;
  double K_max = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;
  bool unbounded = false;  // alpha = 0, J = 0: y_min -> 0 along the family
};

// One member u_{alpha,J}(s, t) = e^{As} z(t) of the family with everything that
// depends only on (alpha, J, theta) precomputed: roots, modulus, turning-point
// radii and the per-period phase increments.
//
// Conventions:
//  * time origin at the minimum gamma(0) = G2, gamma'(0) = 0 (a half-period
//    shift t -> t + K/r from the origin at G1);
//  * theta_2(0) = theta_3(0) = 0, theta_1(0) = -theta for J > 0 and
//    theta_1(0) = pi/2 - theta for J = 0, so that Im(e^{i theta} det(u, u_s, u_t)) = 0;
//  * for J = 0 the radii are signed, R = (sqrt(c1) cn, sqrt(c2) sn, sqrt(c3) dn),
//    so z(t) stays smooth through the zeros of R_1, R_2.
class ConeImmersion {
 public:
  explicit ConeImmersion(const ConeParameters& p, double phase_tol = 1e-11);

  const ConeParameters& params() const { return params_; }
  const GammaSolution& gamma_solution() const { return gamma_; }
  const EllipticData& elliptic() const { return gamma_.elliptic; }
  double basic_period() const { return gamma_.basic_period_T; }
  bool is_zero_J() const { return params_.J == 0.0; }

  GammaValue gamma(double t) const;
  // R_j^2(t) evaluated without cancellation.
  R3 radii_sq(double t) const;
  // Signed radii (J = 0) or positive radii (J > 0).
  R3 radii_signed(double t) const;
  R3 initial_phases() const { return theta0_; }
  R3 phases(double t) const;
  // theta_j(T) - theta_j(0) over one basic period; for J = 0 the sign flips of the
  // signed radii under t -> t + T are folded in, giving (pi, pi, 0).
  R3 holonomy() const { return holonomy_; }

  // z(t) and zdot(t) from the closed form.
  NeumannState state(double t) const;
  ImmersionSample sample(double s, double t) const;
  C3 point(double s, double t) const;

  double y_of_gamma(double gamma) const;
  double curvature_of_y(double y) const;

 private:
  double phase_integral(int j, double t) const;  // int_0^t J mu_j / R_j^2, 0 <= t <= T/2

  ConeParameters params_;
  GammaSolution gamma_;
  double phase_tol_;
  R3 theta0_{};
  R3 half_increment_{};
  R3 holonomy_{};
  R3 signed_coeff_{};  // J = 0: R_j = sqrt(c_j) {cn, sn, dn}
};

// Convenience wrapper matching the per-point contract.
ImmersionSample immerse(const ConeParameters& p, double s, double t);

// Extreme Gauss curvatures. J = 0 uses 1 - 2/(alpha(1+alpha)) and
// 1 - 2 alpha^2/(1+alpha); J > 0 solves 4y^3 - 2 y^2 sum lambda^2 - 4C = 0 for the
// turning values of y and maps them through K = 1 + 2 C y^-3.
CurvatureRange curvature_extremes(const ConeParameters& p);

}  // namespace slcone
