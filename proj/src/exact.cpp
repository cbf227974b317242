#include "csl/exact.hpp"

#include <cmath>
#include <numeric>

namespace csl {

namespace {

using i128 = __int128;

std::int64_t checked_cast(i128 v) {
  if (v > INT64_MAX || v < INT64_MIN)
    throw ExactOverflow("rational arithmetic exceeded 64-bit range");
  return static_cast<std::int64_t>(v);
}

Rational make(i128 num, i128 den) {
  if (den == 0) throw std::domain_error("rational: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  i128 a = num < 0 ? -num : num, b = den;
  while (b) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  if (a == 0) a = 1;
  return Rational{checked_cast(num / a), checked_cast(den / a)};
}

}  // namespace

Rational rat(std::int64_t num, std::int64_t den) { return make(num, den); }

Rational operator+(const Rational& a, const Rational& b) {
  return make(i128(a.num) * b.den + i128(b.num) * a.den, i128(a.den) * b.den);
}

Rational operator-(const Rational& a, const Rational& b) {
  return make(i128(a.num) * b.den - i128(b.num) * a.den, i128(a.den) * b.den);
}

Rational operator*(const Rational& a, const Rational& b) {
  return make(i128(a.num) * b.num, i128(a.den) * b.den);
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num == 0) throw std::domain_error("rational: division by zero");
  return make(i128(a.num) * b.den, i128(a.den) * b.num);
}

bool operator==(const Rational& a, const Rational& b) {
  return a.num == b.num && a.den == b.den;
}

double to_double(const Rational& r) {
  return static_cast<double>(r.num) / static_cast<double>(r.den);
}

std::string to_string(const Rational& r) {
  if (r.den == 1) return std::to_string(r.num);
  return std::to_string(r.num) + "/" + std::to_string(r.den);
}

PiRational operator*(const PiRational& a, const PiRational& b) {
  return PiRational{a.q * b.q, a.pi_half + b.pi_half};
}

PiRational operator/(const PiRational& a, const PiRational& b) {
  return PiRational{a.q / b.q, a.pi_half - b.pi_half};
}

PiRational pow_int(const PiRational& a, int k) {
  PiRational r{rat(1), 0};
  PiRational base = a;
  int e = k;
  if (e < 0) {
    base = PiRational{rat(1), 0} / base;
    e = -e;
  }
  while (e) {
    if (e & 1) r = r * base;
    base = base * base;
    e >>= 1;
  }
  return r;
}

double to_double(const PiRational& r) {
  return to_double(r.q) * std::pow(M_PI, 0.5 * r.pi_half);
}

std::string to_string(const PiRational& r) {
  if (r.pi_half == 0) return to_string(r.q);
  std::string pi_part;
  if (r.pi_half == 2)
    pi_part = "pi";
  else if (r.pi_half % 2 == 0)
    pi_part = "pi^" + std::to_string(r.pi_half / 2);
  else
    pi_part = "pi^(" + std::to_string(r.pi_half) + "/2)";
  std::string s = std::to_string(r.q.num) + "*" + pi_part;
  if (r.q.den != 1) s += "/" + std::to_string(r.q.den);
  return s;
}

PiRational gamma_half(int twice_x) {
  if (twice_x < 1) throw std::domain_error("gamma_half: requires argument >= 1/2");
  if (twice_x % 2 == 0) {
    Rational f = rat(1);
    for (int k = 2; k < twice_x / 2; ++k) f = f * rat(k);
    return PiRational{f, 0};
  }
  // Gamma(k + 1/2) = (2k-1)!! sqrt(pi) / 2^k
  const int k = (twice_x - 1) / 2;
  Rational f = rat(1);
  for (int j = 1; j <= k; ++j) f = f * rat(2 * j - 1, 2);
  return PiRational{f, 1};
}

PiRational beta_half(int twice_a, int twice_b) {
  return gamma_half(twice_a) * gamma_half(twice_b) / gamma_half(twice_a + twice_b);
}

std::uint64_t binomial_u64(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  unsigned __int128 r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<unsigned>(n - k + i);
    r /= static_cast<unsigned>(i);
    if (r > UINT64_MAX) throw ExactOverflow("binomial exceeded 64-bit range");
  }
  return static_cast<std::uint64_t>(r);
}

}  // namespace csl
