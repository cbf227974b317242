#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace csl {

// Exact arithmetic exceeded 64-bit range; callers fall back to log-space.
class ExactOverflow : public std::overflow_error {
 public:
  explicit ExactOverflow(const std::string& what) : std::overflow_error(what) {}
};

// Reduced fraction, den > 0.  All operations are overflow-checked.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;
};

Rational rat(std::int64_t num, std::int64_t den = 1);
Rational operator+(const Rational& a, const Rational& b);
Rational operator-(const Rational& a, const Rational& b);
Rational operator*(const Rational& a, const Rational& b);
Rational operator/(const Rational& a, const Rational& b);
bool operator==(const Rational& a, const Rational& b);
double to_double(const Rational& r);
std::string to_string(const Rational& r);

// q * pi^(pi_half / 2); closed under products of half-integer gamma values.
struct PiRational {
  Rational q;
  int pi_half = 0;
};

PiRational operator*(const PiRational& a, const PiRational& b);
PiRational operator/(const PiRational& a, const PiRational& b);
PiRational pow_int(const PiRational& a, int k);
double to_double(const PiRational& r);
std::string to_string(const PiRational& r);

// Gamma(twice_x / 2) for twice_x >= 1: exact rational times a power of
// sqrt(pi) when twice_x is odd.
PiRational gamma_half(int twice_x);

// B(twice_a / 2, twice_b / 2), exact.
PiRational beta_half(int twice_a, int twice_b);

// C(n, k) in 64 bits, overflow-checked.
std::uint64_t binomial_u64(int n, int k);

}  // namespace csl
