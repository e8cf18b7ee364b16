#include "slcone/elliptic.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "slcone/errors.hpp"

namespace slcone {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void check_modulus(double ksq, double kcsq) {
  if (!(ksq >= 0.0 && ksq <= 1.0) || !(kcsq >= 0.0 && kcsq <= 1.0)) {
    std::ostringstream os;
    os << "elliptic modulus out of range: k^2 = " << ksq << ", 1 - k^2 = " << kcsq;
    throw DomainError(os.str());
  }
  if (std::abs(ksq + kcsq - 1.0) > 8 * kEps) {
    std::ostringstream os;
    os << "inconsistent modulus: k^2 + (1 - k^2) = " << ksq + kcsq;
    throw DomainError(os.str());
  }
}

}  // namespace

EllipticModulus EllipticModulus::from_k(double k) {
  if (!(k >= 0.0 && k <= 1.0)) {
    std::ostringstream os;
    os << "elliptic modulus k = " << k << " outside [0, 1]";
    throw DomainError(os.str());
  }
  return {k, k * k, (1.0 - k) * (1.0 + k)};
}

EllipticModulus EllipticModulus::from_ksq(double ksq) { return from_ksq(ksq, 1.0 - ksq); }

EllipticModulus EllipticModulus::from_ksq(double ksq, double kcsq) {
  check_modulus(ksq, kcsq);
  return {std::sqrt(ksq), ksq, kcsq};
}

double complete_K(const EllipticModulus& m) {
  check_modulus(m.ksq, m.kcsq);
  if (m.kcsq == 0.0) throw DivergenceError("complete_K diverges at k = 1");
  double a = 1.0;
  double b = std::sqrt(m.kcsq);
  for (int it = 0; it < 64 && std::abs(a - b) > 2 * kEps * a; ++it) {
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return std::numbers::pi / (a + b);
}

JacobiTriple jacobi_sn_cn_dn(double t, const EllipticModulus& m) {
  if (m.kcsq == 0.0) {
    const double ch = std::cosh(t);
    return {std::tanh(t), 1.0 / ch, 1.0 / ch};
  }
  if (m.ksq == 0.0) return {std::sin(t), std::cos(t), 1.0};

  // Bulirsch, Numer. Math. 7 (1965) p. 89: descending Landen sequence on the
  // complementary parameter, then back-substitution for the amplitude.
  constexpr int kMaxLevels = 16;
  const double tol = std::sqrt(kEps) * 0.01;
  std::array<double, kMaxLevels> am{};
  std::array<double, kMaxLevels> bm{};
  double mc = m.kcsq;
  double c = 0.0;
  int levels = 0;
  for (double a = 1.0; levels < kMaxLevels; ++levels) {
    am[levels] = a;
    bm[levels] = mc = std::sqrt(mc);
    c = 0.5 * (a + mc);
    if (!(std::abs(a - mc) > tol * a)) {
      ++levels;
      break;
    }
    mc *= a;
    a = c;
  }
  const double x = t * c;
  double sn = std::sin(x);
  double cn = std::cos(x);
  double dn = 1.0;
  if (sn != 0.0) {
    double a = cn / sn;
    c *= a;
    while (levels--) {
      const double b = am[levels];
      a *= c;
      c *= dn;
      dn = (bm[levels] + a) / (b + a);
      a = c / b;
    }
    a = 1.0 / std::sqrt(c * c + 1.0);
    sn = sn < 0 ? -a : a;
    cn = c * sn;
  }
  return {sn, cn, dn};
}

}  // namespace slcone
