#include "slcone/rational.hpp"

#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>

#include "slcone/errors.hpp"

namespace slcone {

std::string Rational::str() const {
  std::ostringstream os;
  os << num << "/" << den;
  return os.str();
}

Rational make_rational(std::int64_t p, std::int64_t q) {
  if (q == 0) throw DomainError("zero denominator");
  if (q < 0) {
    p = -p;
    q = -q;
  }
  const std::int64_t g = std::gcd(p, q);
  return {p / g, q / g};
}

Rational parse_rational(std::string_view text) {
  auto parse_int = [&](std::string_view part) {
    std::int64_t v = 0;
    const auto res = std::from_chars(part.data(), part.data() + part.size(), v);
    if (part.empty() || res.ec != std::errc() || res.ptr != part.data() + part.size())
      throw InputError("not a rational number: '" + std::string(text) + "'");
    return v;
  };
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return make_rational(parse_int(text), 1);
  const std::int64_t q = parse_int(text.substr(slash + 1));
  if (q == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
  return make_rational(parse_int(text.substr(0, slash)), q);
}

std::optional<Rational> detect_rational(double x, double tol, std::int64_t max_den) {
  if (!std::isfinite(x)) return std::nullopt;
  // Convergents h_k / k_k of the continued fraction of x.
  double h0 = 1, h1 = std::floor(x), k0 = 0, k1 = 1;
  double rem = x - h1;
  for (int it = 0; it < 64; ++it) {
    const double err = std::abs(x - h1 / k1);
    if (err <= tol && err * k1 * k1 <= 1e-3)
      return make_rational(static_cast<std::int64_t>(h1), static_cast<std::int64_t>(k1));
    if (rem == 0.0) break;
    const double inv = 1.0 / rem;
    const double a = std::floor(inv);
    rem = inv - a;
    const double h2 = a * h1 + h0;
    const double k2 = a * k1 + k0;
    if (k2 > static_cast<double>(max_den)) break;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
  }
  return std::nullopt;
}

std::int64_t mod_inverse(std::int64_t a, std::int64_t m) {
  if (m == 1) return 0;
  std::int64_t t = 0, nt = 1, r = m, nr = ((a % m) + m) % m;
  while (nr != 0) {
    const std::int64_t q = r / nr;
    t = t - q * nt;
    std::swap(t, nt);
    r = r - q * nr;
    std::swap(r, nr);
  }
  if (r != 1) throw DomainError("no modular inverse");
  return t < 0 ? t + m : t;
}

}  // namespace slcone
