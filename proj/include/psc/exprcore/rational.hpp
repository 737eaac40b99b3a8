#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace psc {

/// Arbitrary-precision exact rational.
using Rational = mpq_class;
using Integer = mpz_class;

inline Rational make_rational(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& r);
std::size_t hash_value(const Rational& r);
bool is_integer(const Rational& r);

/// Exact integer k-th root if it exists (n >= 0 for even k).
bool exact_root(const Integer& n, unsigned long k, Integer& root);

/// Small exact rational used for monomial exponents. Arithmetic throws
/// std::overflow_error instead of wrapping.
class SmallRational {
 public:
  constexpr SmallRational() = default;
  constexpr SmallRational(std::int64_t n) : num_(n), den_(1) {}  // NOLINT
  SmallRational(std::int64_t n, std::int64_t d);
  static SmallRational from(const Rational& r);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  bool is_integer() const { return den_ == 1; }
  bool is_zero() const { return num_ == 0; }
  Rational to_rational() const { return Rational(num_, den_); }
  std::int64_t floor() const;

  SmallRational operator-() const { return SmallRational(-num_, den_); }
  friend SmallRational operator+(SmallRational a, SmallRational b);
  friend SmallRational operator-(SmallRational a, SmallRational b) { return a + (-b); }
  friend SmallRational operator*(SmallRational a, SmallRational b);
  SmallRational& operator+=(SmallRational b) { return *this = *this + b; }

  friend bool operator==(SmallRational a, SmallRational b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(SmallRational a, SmallRational b) { return !(a == b); }
  friend int compare(SmallRational a, SmallRational b);
  friend bool operator<(SmallRational a, SmallRational b) { return compare(a, b) < 0; }
  friend bool operator>(SmallRational a, SmallRational b) { return compare(a, b) > 0; }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

inline std::size_t hash_combine(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace psc
