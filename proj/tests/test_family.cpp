#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "slcone/errors.hpp"
#include "slcone/family.hpp"
#include "slcone/periods.hpp"

using namespace slcone;

namespace {

constexpr double kPi = std::numbers::pi;

double cubic_ref(double alpha, double J, double g) {
  const R3 mu{-1 - 2 * alpha, 2 + alpha, alpha - 1};
  return (mu[0] * g + 1.0 / 3) * (mu[1] * g + 1.0 / 3) * (mu[2] * g + 1.0 / 3) - J * J;
}

// All sign changes of f on [a, b], refined by bisection.
std::vector<double> roots_by_bisection(const std::function<double(double)>& f, double a, double b,
                                       int n) {
  std::vector<double> out;
  double x0 = a, f0 = f(a);
  for (int i = 1; i <= n; ++i) {
    const double x1 = a + (b - a) * i / n, f1 = f(x1);
    if (f0 == 0.0) out.push_back(x0);
    else if ((f0 < 0) != (f1 < 0)) {
      double lo = x0, hi = x1, flo = f0;
      for (int it = 0; it < 200 && hi - lo > 0; ++it) {
        const double mid = 0.5 * (lo + hi), fm = f(mid);
        if (mid == lo || mid == hi) break;
        if ((fm < 0) == (flo < 0)) lo = mid, flo = fm;
        else hi = mid;
      }
      out.push_back(0.5 * (lo + hi));
    }
    x0 = x1;
    f0 = f1;
  }
  return out;
}

// Composite 8-point Gauss-Legendre rule.
double gauss_legendre(const std::function<double(double)>& f, double a, double b, int panels) {
  static const double x[4] = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                              0.9602898564975363};
  static const double w[4] = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                              0.1012285362903763};
  double sum = 0.0;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double c = a + (p + 0.5) * h, r = 0.5 * h;
    for (int i = 0; i < 4; ++i) sum += r * w[i] * (f(c - r * x[i]) + f(c + r * x[i]));
  }
  return sum;
}

C3 u_s(const ConeImmersion& im, double s, double t) {
  const C3 u = im.point(s, t);
  C3 out;
  for (int j = 0; j < 3; ++j) out[j] = cplx(0, im.params().axis.lambda[j]) * u[j];
  return out;
}

C3 u_t(const ConeImmersion& im, double s, double t) {
  const NeumannState st = im.state(t);
  C3 out;
  for (int j = 0; j < 3; ++j)
    out[j] = std::polar(1.0, im.params().axis.lambda[j] * s) * st.zdot[j];
  return out;
}

}  // namespace

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(ConeParameters::make(0.5, -0.01), DomainError);
  CHECK_THROWS_AS(ConeParameters::make(0.5, kJMax * 1.001), DomainError);
  CHECK_THROWS_AS(ConeParameters::make(1.2, 0.0), DomainError);
  CHECK(ConeParameters::make(0.5, kJMax + 5e-16).J == kJMax);
}

TEST_CASE("cubic roots agree with a bisection scan") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> A(0.05, 0.95), F(0.02, 0.98);
  for (int i = 0; i < 60; ++i) {
    const double alpha = A(rng), J = F(rng) * kJMax;
    const EllipticData ed = cubic_roots(ConeParameters::make(alpha, J));
    const double top = 1.0 / (3.0 * (1.0 - alpha)) + 1.0;
    const auto ref = roots_by_bisection([&](double g) { return cubic_ref(alpha, J, g); }, -1.0,
                                        top, 40000);
    REQUIRE(ref.size() == 3);
    CHECK(ed.gamma2 == doctest::Approx(ref[0]).epsilon(1e-11));
    CHECK(ed.gamma1 == doctest::Approx(ref[1]).epsilon(1e-11));
    CHECK(ed.gamma3 == doctest::Approx(ref[2]).epsilon(1e-11));
    CHECK(ed.gamma2 <= 0.0);
    CHECK(ed.gamma1 >= 0.0);
  }
}

TEST_CASE("modulus at J = 0 is (1 - alpha^2) / (1 + 2 alpha)") {
  for (double alpha : {0.1, 1.0 / 3, 0.5, 0.8}) {
    const EllipticData ed = cubic_roots(ConeParameters::make(alpha, 0.0));
    CHECK(ed.modulus.ksq == doctest::Approx((1 - alpha * alpha) / (1 + 2 * alpha)).epsilon(1e-14));
  }
}

TEST_CASE("turning-point radii keep relative precision for tiny J") {
  for (double J : {1e-3, 1e-6, 1e-9}) {
    const GammaSolution gs = solve_gamma(ConeParameters::make(0.4, J));
    for (const R3& r : {gs.rsq_at_g1, gs.rsq_at_g2}) {
      CHECK(r[0] * r[1] * r[2] == doctest::Approx(J * J).epsilon(1e-12));
      CHECK(r[0] + r[1] + r[2] == doctest::Approx(1.0).epsilon(1e-14));
    }
  }
}

TEST_CASE("basic period: closed form, quadrature and flow") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> A(0.05, 0.95), F(0.05, 0.95);
  for (int i = 0; i < 12; ++i) {
    const ConeParameters p = ConeParameters::make(A(rng), F(rng) * kJMax);
    const ConeImmersion im(p);
    const EllipticData& ed = im.elliptic();
    const double p3 = p.axis.mu_product();
    // gamma = G2 + (G1 - G2) sin^2 phi removes both endpoint singularities.
    const double half = gauss_legendre(
        [&](double phi) {
          const double g = ed.gamma2 + (ed.gamma1 - ed.gamma2) * std::sin(phi) * std::sin(phi);
          return 1.0 / std::sqrt(p3 * (ed.gamma3 - g));
        },
        0.0, kPi / 2, 64);
    CHECK(im.basic_period() == doctest::Approx(2 * half).epsilon(1e-12));
    CHECK(basic_period_from_flow(p) == doctest::Approx(im.basic_period()).epsilon(1e-9));
  }
}

TEST_CASE("gamma(t) solves its first-order equation") {
  const ConeParameters p = ConeParameters::make(0.3, 0.1);
  const ConeImmersion im(p);
  const EllipticData& ed = im.elliptic();
  for (double t = -3.0; t <= 3.0; t += 0.37) {
    const GammaValue g = im.gamma(t);
    const double rhs = 4 * p.axis.mu_product() * (g.gamma - ed.gamma1) * (g.gamma - ed.gamma2) *
                       (g.gamma - ed.gamma3);
    CHECK(std::abs(g.gamma_dot * g.gamma_dot - rhs) <= 1e-13);
    const double h = 1e-5;
    CHECK(std::abs((im.gamma(t + h).gamma - im.gamma(t - h).gamma) / (2 * h) - g.gamma_dot) <= 1e-9);
  }
}

TEST_CASE("alpha = 0, J = 0 is the totally geodesic sphere") {
  const ConeImmersion im(ConeParameters::make(0.0, 0.0));
  CHECK(im.gamma_solution().degeneracy == Degeneracy::sphere);
  CHECK(std::isinf(im.basic_period()));
  const cplx I(0, 1);
  for (double s : {0.0, 0.7, 2.0, 5.5})
    for (double t : {-5.0, -1.0, 0.0, 0.3, 4.0}) {
      const double sech = 1 / std::cosh(t);
      const C3 ref{I * std::exp(I * s) * sech / std::sqrt(2.0), std::tanh(t),
                   std::exp(-I * s) * sech / std::sqrt(2.0)};
      CHECK(norm(im.point(s, t) - ref) <= 1e-14);
    }
}

TEST_CASE("degenerate members are flat") {
  for (const ConeParameters& p :
       {ConeParameters::make(1.0, 0.0), ConeParameters::make(1.0, 0.1),
        ConeParameters::make(0.3, kJMax), ConeParameters::make(0.0, kJMax)}) {
    const ConeImmersion im(p);
    CHECK(im.gamma_solution().flat());
    for (double t = -4.0; t <= 4.0; t += 0.5) {
      const ImmersionSample x = im.sample(0.3, t);
      CHECK(std::abs(x.K) <= 1e-12);
    }
  }
  CHECK(solve_gamma(ConeParameters::make(1.0, 0.05)).degeneracy == Degeneracy::flat_alpha_one);
  CHECK(solve_gamma(ConeParameters::make(0.5, kJMax)).degeneracy == Degeneracy::flat_gamma_zero);
  const R3 r = ConeImmersion(ConeParameters::make(0.5, kJMax)).radii_sq(1.234);
  for (double v : r) CHECK(v == doctest::Approx(1.0 / 3).epsilon(1e-14));
}

TEST_CASE("radii, phases and the closed-form state agree") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> A(0.0, 1.0), F(0.0, 1.0), T(-8.0, 8.0);
  for (int i = 0; i < 30; ++i) {
    const ConeImmersion im(ConeParameters::make(A(rng), F(rng) * kJMax));
    const double t = T(rng);
    const R3 rsq = im.radii_sq(t);
    const NeumannState st = im.state(t);
    CHECK(rsq[0] + rsq[1] + rsq[2] == doctest::Approx(1.0).epsilon(1e-13));
    for (int j = 0; j < 3; ++j) CHECK(std::abs(std::norm(st.z[j]) - rsq[j]) <= 1e-13);
    CHECK(im.y_of_gamma(im.gamma(t).gamma) ==
          doctest::Approx(az_norm2(st.z, im.params().axis)).epsilon(1e-13));
  }
}

TEST_CASE("phase holonomy sums to a multiple of pi") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> A(0.0, 1.0), F(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const ConeImmersion im(ConeParameters::make(A(rng), F(rng) * kJMax));
    if (!std::isfinite(im.basic_period())) continue;
    const R3 h = im.holonomy();
    const double sum = (h[0] + h[1] + h[2]) / kPi;
    CHECK(std::abs(sum - std::round(sum)) <= 1e-9);
    const R3 d = im.phases(im.basic_period());
    const R3 z = im.phases(0.0);
    if (!im.is_zero_J())
      for (int j = 0; j < 3; ++j) CHECK(d[j] - z[j] == doctest::Approx(h[j]).epsilon(1e-10));
  }
}

TEST_CASE("angle-sum identity for gamma'") {
  const ConeImmersion im(ConeParameters::make(0.0, 0.1));
  const R3 th0 = im.phases(0.0);
  const double T = im.basic_period();
  for (int i = 0; i <= 50; ++i) {
    const double t = T * i / 50.0;
    const R3 th = im.phases(t);
    const double d = (th[0] + th[1] + th[2]) - (th0[0] + th0[1] + th0[2]);
    if (std::abs(std::cos(d)) < 1e-6) continue;
    CHECK(std::abs(im.gamma(t).gamma_dot - 2 * 0.1 * std::tan(d)) <= 1e-8);
  }
}

TEST_CASE("phases grow linearly for the flat J = kJMax member") {
  const ConeImmersion im(ConeParameters::make(0.4, kJMax));
  const R3 a = im.phases(0.0), b = im.phases(1.0), c = im.phases(2.0);
  for (int j = 0; j < 3; ++j) {
    CHECK((c[j] - b[j]) == doctest::Approx(b[j] - a[j]).epsilon(1e-12));
    CHECK((b[j] - a[j]) == doctest::Approx(3 * kJMax * im.params().axis.mu[j]).epsilon(1e-12));
  }
}

TEST_CASE("special Lagrangian phase convention") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> A(0.0, 1.0), F(0.0, 1.0), Th(-3.0, 3.0), S(0.0, 6.0),
      T(-2.0, 2.0);
  for (int i = 0; i < 40; ++i) {
    const double J = i % 2 == 0 ? 0.0 : F(rng) * kJMax;
    const double theta = Th(rng);
    const ConeImmersion im(ConeParameters::make(A(rng), J, theta));
    const double s = S(rng), t = T(rng);
    const cplx det = det3(im.point(s, t), u_s(im, s, t), u_t(im, s, t));
    const cplx w = std::polar(1.0, theta) * det;
    CHECK(std::abs(w.imag()) <= 1e-12 * (1 + std::abs(w)));
    CHECK(w.real() <= 1e-12);
    // det equals -y in modulus: the conformal factor of the induced metric.
    CHECK(std::abs(w) == doctest::Approx(im.sample(s, t).y).epsilon(1e-12));
  }
}

TEST_CASE("curvature extremes match dense sampling") {
  for (const auto& [alpha, J] : std::vector<std::pair<double, double>>{
           {0.5, 0.0}, {0.9, 0.0}, {0.2, 0.05}, {0.7, 0.15}, {0.0, 0.1}}) {
    const ConeImmersion im(ConeParameters::make(alpha, J));
    const CurvatureRange kr = curvature_extremes(im.params());
    double lo = 1e300, hi = -1e300;
    const double T = im.basic_period();
    for (int i = 0; i <= 20000; ++i) {
      const double K = im.sample(0.0, T * i / 20000.0).K;
      lo = std::min(lo, K);
      hi = std::max(hi, K);
    }
    CHECK(kr.K_min == doctest::Approx(lo).epsilon(1e-7));
    CHECK(kr.K_max == doctest::Approx(hi).epsilon(1e-7));
  }
  const CurvatureRange half = curvature_extremes(ConeParameters::make(0.5, 0.0));
  CHECK(half.K_min == doctest::Approx(-5.0 / 3).epsilon(1e-14));
  CHECK(half.K_max == doctest::Approx(2.0 / 3).epsilon(1e-14));
  CHECK(curvature_extremes(ConeParameters::make(0.0, 0.0)).unbounded);
}
