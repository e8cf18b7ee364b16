#include "slcone/family.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include <boost/math/tools/toms748_solve.hpp>

#include "slcone/errors.hpp"
#include "slcone/quadrature.hpp"

namespace slcone {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kThird = 1.0 / 3.0;

template <class F>
double bracketed_root(F f, double a, double b) {
  double fa = f(a);
  double fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0) == (fb > 0)) throw ConsistencyError("root is not bracketed");
  boost::uintmax_t iters = 300;
  const auto r = boost::math::tools::toms748_solve(
      f, a, b, fa, fb, boost::math::tools::eps_tolerance<double>(52), iters);
  return 0.5 * (r.first + r.second);
}

// R_j^2 at the turning point where R_j is smallest: solve
// rho prod_{k != j} (mu_k (rho - 1/3) / mu_j + 1/3) = J^2 for rho in [0, 1/3].
double turning_radius_sq(const R3& mu, int j, double J) {
  if (J == 0.0) return 0.0;
  auto f = [&](double rho) {
    double prod = rho;
    for (int k = 0; k < 3; ++k)
      if (k != j) prod *= mu[k] * (rho - kThird) / mu[j] + kThird;
    return prod - J * J;
  };
  return bracketed_root(f, 0.0, kThird);
}

}  // namespace

const char* to_string(Degeneracy d) {
  switch (d) {
    case Degeneracy::none: return "none";
    case Degeneracy::sphere: return "sphere";
    case Degeneracy::flat_alpha_one: return "flat_alpha_one";
    case Degeneracy::flat_gamma_zero: return "flat_gamma_zero";
  }
  return "unknown";
}

ConeParameters ConeParameters::make(double alpha, double J, double theta) {
  ConeParameters p;
  p.axis = SymmetryAxis::from_alpha(alpha);
  if (!(J >= 0.0) || J > kJMax + 1e-15) {
    std::ostringstream os;
    os.precision(17);
    os << "J = " << J << " outside [0, 1/(3 sqrt 3)]";
    throw DomainError(os.str());
  }
  p.J = std::min(J, kJMax);
  if (!std::isfinite(theta)) throw DomainError("theta must be finite");
  p.theta = theta;
  return p;
}

double gamma_cubic(const ConeParameters& p, double gamma) {
  const R3& mu = p.axis.mu;
  return (mu[0] * gamma + kThird) * (mu[1] * gamma + kThird) * (mu[2] * gamma + kThird) -
         p.J * p.J;
}

GammaSolution solve_gamma(const ConeParameters& p) {
  const SymmetryAxis& ax = p.axis;
  const R3& mu = ax.mu;
  const double alpha = ax.alpha;
  const double J = p.J;
  const double p3 = ax.mu_product();
  const double e2 = mu[0] * mu[1] + mu[0] * mu[2] + mu[1] * mu[2];
  const double lam2 = ax.lambda[0] * ax.lambda[1] * ax.lambda[2];

  GammaSolution g;
  g.C = -(lam2 * lam2 + J * J * p3 * p3);
  EllipticData& ed = g.elliptic;

  if (J == kJMax) {
    g.degeneracy = Degeneracy::flat_gamma_zero;
    ed.gamma1 = ed.gamma2 = 0.0;
    ed.gamma3 = alpha == 1.0 ? kInf : -e2 / (3.0 * p3);
    ed.modulus = EllipticModulus::from_ksq(0.0, 1.0);
    ed.r = std::sqrt(-e2 / 3.0);
    ed.quarter_period = std::numbers::pi / 2.0;
    g.rsq_at_g1 = g.rsq_at_g2 = {kThird, kThird, kThird};
    g.basic_period_T = ed.basic_period();
    return g;
  }

  const double rho1 = turning_radius_sq(mu, 0, J);
  const double rho2 = turning_radius_sq(mu, 1, J);
  if (J == 0.0) {
    ed.gamma1 = 1.0 / (3.0 * (1.0 + 2.0 * alpha));
    ed.gamma2 = -1.0 / (3.0 * (2.0 + alpha));
  } else {
    ed.gamma1 = (rho1 - kThird) / mu[0];
    ed.gamma2 = (rho2 - kThird) / mu[1];
  }
  const double G1 = ed.gamma1;
  const double G2 = ed.gamma2;

  if (alpha == 1.0) {
    g.degeneracy = Degeneracy::flat_alpha_one;
    ed.gamma3 = kInf;
    ed.modulus = EllipticModulus::from_ksq(0.0, 1.0);
    ed.r = std::sqrt(-e2 / 3.0);
  } else if (J == 0.0) {
    ed.gamma3 = 1.0 / (3.0 * (1.0 - alpha));
    const double den = 1.0 + 2.0 * alpha;
    ed.modulus = EllipticModulus::from_ksq((1.0 - alpha) * (1.0 + alpha) / den,
                                           alpha * (2.0 + alpha) / den);
    ed.r = std::sqrt(den);
    if (alpha == 0.0) g.degeneracy = Degeneracy::sphere;
  } else {
    double G3 = -e2 / (3.0 * p3) - G1 - G2;
    for (int it = 0; it < 3; ++it) {
      const double f = gamma_cubic(p, G3);
      const double df = 3.0 * p3 * G3 * G3 + 2.0 * e2 * G3 / 3.0;
      if (df == 0.0) break;
      G3 -= f / df;
    }
    ed.gamma3 = G3;
    const double d = G3 - G2;
    ed.modulus = EllipticModulus::from_ksq((G1 - G2) / d, (G3 - G1) / d);
    ed.r = std::sqrt(p3 * d);
  }
  ed.quarter_period = ed.modulus.kcsq == 0.0 ? kInf : complete_K(ed.modulus);
  g.basic_period_T = ed.basic_period();
  g.gamma0 = G2;

  g.rsq_at_g1 = {rho1, mu[1] * G1 + kThird, (mu[2] / mu[0]) * rho1 + alpha / (1.0 + 2.0 * alpha)};
  g.rsq_at_g2 = {mu[0] * G2 + kThird, rho2, mu[2] * G2 + kThird};
  return g;
}

EllipticData cubic_roots(const ConeParameters& p) { return solve_gamma(p).elliptic; }

GammaValue gamma_closed_form(const EllipticData& ed, double t) {
  const double d = ed.gamma2 - ed.gamma1;
  if (d == 0.0) return {ed.gamma2, 0.0};
  const JacobiTriple j = jacobi_sn_cn_dn(ed.r * t, ed.modulus);
  return {ed.gamma2 - d * j.sn * j.sn, -2.0 * d * ed.r * j.sn * j.cn * j.dn};
}

R3 radii(const EllipticData& ed, const SymmetryAxis& axis, double t) {
  const double gamma = gamma_closed_form(ed, t).gamma;
  R3 out{};
  for (int j = 0; j < 3; ++j) {
    out[j] = axis.mu[j] * gamma + kThird;
    if (out[j] < -1e-12) {
      std::ostringstream os;
      os << "R_" << j + 1 << "^2 = " << out[j] << " < 0 at t = " << t;
      throw ConsistencyError(os.str());
    }
  }
  return out;
}

ConeImmersion::ConeImmersion(const ConeParameters& p, double phase_tol)
    : params_(p), gamma_(solve_gamma(p)), phase_tol_(phase_tol) {
  const R3& mu = p.axis.mu;
  const double J = p.J;
  const double T = gamma_.basic_period_T;
  if (J == 0.0) {
    theta0_ = {std::numbers::pi / 2.0 - p.theta, 0.0, 0.0};
    const double a = p.alpha();
    signed_coeff_ = {(1.0 + a) / (2.0 + a), (1.0 + a) / (1.0 + 2.0 * a), 1.0 / (2.0 + a)};
    holonomy_ = {std::numbers::pi, std::numbers::pi, 0.0};
    return;
  }
  theta0_ = {-p.theta, 0.0, 0.0};
  if (gamma_.degeneracy == Degeneracy::flat_gamma_zero) {
    for (int j = 0; j < 3; ++j) {
      half_increment_[j] = 1.5 * J * mu[j] * T;
      holonomy_[j] = 3.0 * J * mu[j] * T;
    }
    return;
  }
  for (int j = 0; j < 3; ++j) {
    half_increment_[j] = phase_integral(j, 0.5 * T);
    holonomy_[j] = 2.0 * half_increment_[j];
  }
}

GammaValue ConeImmersion::gamma(double t) const { return gamma_closed_form(gamma_.elliptic, t); }

R3 ConeImmersion::radii_sq(double t) const {
  const EllipticData& ed = gamma_.elliptic;
  const R3& mu = params_.axis.mu;
  if (gamma_.degeneracy == Degeneracy::flat_gamma_zero) return gamma_.rsq_at_g1;
  const JacobiTriple jt = jacobi_sn_cn_dn(ed.r * t, ed.modulus);
  const double d = ed.gamma2 - ed.gamma1;
  return {gamma_.rsq_at_g1[0] + mu[0] * d * jt.cn * jt.cn,
          gamma_.rsq_at_g2[1] - mu[1] * d * jt.sn * jt.sn,
          gamma_.rsq_at_g1[2] + mu[2] * d * jt.cn * jt.cn};
}

R3 ConeImmersion::radii_signed(double t) const {
  if (params_.J != 0.0) {
    R3 r = radii_sq(t);
    for (double& v : r) v = std::sqrt(std::max(v, 0.0));
    return r;
  }
  const EllipticData& ed = gamma_.elliptic;
  const JacobiTriple jt = jacobi_sn_cn_dn(ed.r * t, ed.modulus);
  return {std::sqrt(signed_coeff_[0]) * jt.cn, std::sqrt(signed_coeff_[1]) * jt.sn,
          std::sqrt(signed_coeff_[2]) * jt.dn};
}

double ConeImmersion::phase_integral(int j, double t) const {
  if (t == 0.0) return 0.0;
  const double c = params_.J * params_.axis.mu[j];
  auto f = [&](double x) { return c / radii_sq(x)[j]; };
  return integrate_adaptive(f, 0.0, t, phase_tol_).value;
}

R3 ConeImmersion::phases(double t) const {
  const double J = params_.J;
  if (J == 0.0) return theta0_;
  const R3& mu = params_.axis.mu;
  R3 th = theta0_;
  if (gamma_.degeneracy == Degeneracy::flat_gamma_zero) {
    for (int j = 0; j < 3; ++j) th[j] += 3.0 * J * mu[j] * t;
    return th;
  }
  const double T = gamma_.basic_period_T;
  const double n = std::floor(t / T);
  const double rem = t - n * T;
  for (int j = 0; j < 3; ++j) {
    const double partial = rem <= 0.5 * T ? phase_integral(j, rem)
                                          : holonomy_[j] - phase_integral(j, T - rem);
    th[j] += n * holonomy_[j] + partial;
  }
  return th;
}

NeumannState ConeImmersion::state(double t) const {
  const EllipticData& ed = gamma_.elliptic;
  const R3& mu = params_.axis.mu;
  const double J = params_.J;
  NeumannState s;
  s.t = t;
  const R3 th = phases(t);
  if (J == 0.0) {
    const JacobiTriple jt = jacobi_sn_cn_dn(ed.r * t, ed.modulus);
    const R3 sq{std::sqrt(signed_coeff_[0]), std::sqrt(signed_coeff_[1]),
                std::sqrt(signed_coeff_[2])};
    const R3 R{sq[0] * jt.cn, sq[1] * jt.sn, sq[2] * jt.dn};
    const R3 Rd{-sq[0] * ed.r * jt.sn * jt.dn, sq[1] * ed.r * jt.cn * jt.dn,
                -sq[2] * ed.r * ed.modulus.ksq * jt.sn * jt.cn};
    for (int j = 0; j < 3; ++j) {
      const cplx e = std::polar(1.0, th[j]);
      s.z[j] = R[j] * e;
      s.zdot[j] = Rd[j] * e;
    }
    return s;
  }
  const R3 rsq = radii_sq(t);
  const double gdot = gamma(t).gamma_dot;
  for (int j = 0; j < 3; ++j) {
    const double R = std::sqrt(rsq[j]);
    const cplx e = std::polar(1.0, th[j]);
    s.z[j] = R * e;
    s.zdot[j] = cplx(mu[j] * gdot / (2.0 * R), J * mu[j] / R) * e;
  }
  return s;
}

double ConeImmersion::y_of_gamma(double gamma) const {
  return -gamma * params_.axis.mu_product() + params_.axis.lambda_sq_sum() / 3.0;
}

double ConeImmersion::curvature_of_y(double y) const {
  return 1.0 + 2.0 * gamma_.C / (y * y * y);
}

ImmersionSample ConeImmersion::sample(double s, double t) const {
  const NeumannState st = state(t);
  const R3& lam = params_.axis.lambda;
  ImmersionSample out;
  out.s = s;
  out.t = t;
  for (int j = 0; j < 3; ++j) out.u[j] = std::polar(1.0, lam[j] * s) * st.z[j];
  out.y = az_norm2(st.z, params_.axis);
  out.K = curvature_of_y(out.y);
  out.theta = phases(t);
  return out;
}

C3 ConeImmersion::point(double s, double t) const {
  const NeumannState st = state(t);
  const R3& lam = params_.axis.lambda;
  C3 u;
  for (int j = 0; j < 3; ++j) u[j] = std::polar(1.0, lam[j] * s) * st.z[j];
  return u;
}

ImmersionSample immerse(const ConeParameters& p, double s, double t) {
  return ConeImmersion(p).sample(s, t);
}

CurvatureRange curvature_extremes(const ConeParameters& p) {
  const GammaSolution g = solve_gamma(p);
  const SymmetryAxis& ax = p.axis;
  const double S = ax.lambda_sq_sum();
  const double a = p.alpha();
  auto K_of = [&](double y) { return 1.0 + 2.0 * g.C / (y * y * y); };
  CurvatureRange out;
  if (g.flat()) {
    const double y = g.degeneracy == Degeneracy::flat_alpha_one ? 2.0 : S / 3.0;
    out.y_min = out.y_max = y;
    out.K_min = out.K_max = K_of(y);
    return out;
  }
  if (p.J == 0.0) {
    if (a == 0.0) {
      out.unbounded = true;
      out.y_min = 0.0;
      out.y_max = S / 2.0;
      out.K_min = -kInf;
      out.K_max = 1.0;
      return out;
    }
    out.K_min = 1.0 - 2.0 / (a * (1.0 + a));
    out.K_max = 1.0 - 2.0 * a * a / (1.0 + a);
    out.y_min = std::cbrt(-2.0 * g.C / (1.0 - out.K_min));
    out.y_max = std::cbrt(-2.0 * g.C / (1.0 - out.K_max));
    return out;
  }
  auto q = [&](double y) { return 4.0 * y * y * y - 2.0 * S * y * y - 4.0 * g.C; };
  out.y_min = bracketed_root(q, 0.0, S / 3.0);
  out.y_max = bracketed_root(q, S / 3.0, S / 2.0);
  out.K_min = K_of(out.y_min);
  out.K_max = K_of(out.y_max);
  return out;
}

}  // namespace slcone
