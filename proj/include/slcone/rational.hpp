#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace slcone {

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const;
  bool operator==(const Rational&) const = default;
};

// Reduced p/q with q > 0. Throws DomainError when q = 0.
Rational make_rational(std::int64_t p, std::int64_t q);

// Parses "p/q" or an integer. Throws InputError on anything else.
Rational parse_rational(std::string_view text);

// Continued-fraction search for p/q with q <= max_den and |x - p/q| <= tol.
// A convergent is accepted only if it is also unreasonably good for its size,
// |x - p/q| q^2 <= 1e-3, so that the ordinary convergents of an irrational
// number are not mistaken for closure. nullopt means "not detected at this
// tolerance", not a proof of irrationality.
std::optional<Rational> detect_rational(double x, double tol, std::int64_t max_den = 1'000'000);

std::int64_t mod_inverse(std::int64_t a, std::int64_t m);

}  // namespace slcone
