#pragma once

#include <limits>

namespace slcone {

// Modulus k together with k^2 and the complementary parameter 1 - k^2.
// Callers that know k^2 and 1 - k^2 in closed form should pass both: forming
// 1 - k*k near k = 1 throws away most of the significant digits.
struct EllipticModulus {
  double k = 0.0;
  double ksq = 0.0;
  double kcsq = 1.0;

  static EllipticModulus from_k(double k);
  static EllipticModulus from_ksq(double ksq);
  static EllipticModulus from_ksq(double ksq, double kcsq);
};

// Complete elliptic integral of the first kind, K(k) = int_0^{pi/2} dx / sqrt(1 - k^2 sin^2 x),
// by the arithmetic-geometric mean. Throws DivergenceError at k = 1.
double complete_K(const EllipticModulus& m);

struct JacobiTriple {
  double sn = 0.0;
  double cn = 1.0;
  double dn = 1.0;
};

// sn, cn, dn by Bulirsch's descending Landen / AGM scheme. k = 1 and k = 0 use
// the exact hyperbolic and trigonometric closed forms.
JacobiTriple jacobi_sn_cn_dn(double t, const EllipticModulus& m);

// Closed-form data for gamma(t) = G2 - (G2 - G1) sn^2(r t, k), the solution of
// gamma'^2 = 4 mu1 mu2 mu3 (gamma - G1)(gamma - G2)(gamma - G3).
struct EllipticData {
  EllipticModulus modulus;
  double r = 0.0;
  double quarter_period = 0.0;  // K(k); +inf when k = 1
  double gamma1 = 0.0;          // G2 <= 0 <= G1 <= G3
  double gamma2 = 0.0;
  double gamma3 = 0.0;          // +inf when mu3 = 0 (alpha = 1)

  // Period of gamma and of y = |Az|^2 in t.
  double basic_period() const {
    return quarter_period == std::numeric_limits<double>::infinity()
               ? quarter_period
               : 2.0 * quarter_period / r;
  }
};

}  // namespace slcone
