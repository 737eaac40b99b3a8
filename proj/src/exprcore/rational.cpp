#include "psc/exprcore/rational.hpp"

#include <numeric>

namespace psc {

std::string to_string(const Rational& r) { return r.get_str(); }

std::size_t hash_value(const Rational& r) {
  const mpz_srcptr n = r.get_num_mpz_t();
  const mpz_srcptr d = r.get_den_mpz_t();
  std::size_t h = static_cast<std::size_t>(mpz_sgn(n)) * 31u;
  for (std::size_t i = 0; i < mpz_size(n); ++i) h = hash_combine(h, mpz_getlimbn(n, i));
  for (std::size_t i = 0; i < mpz_size(d); ++i) h = hash_combine(h, mpz_getlimbn(d, i));
  return h;
}

bool is_integer(const Rational& r) { return r.get_den() == 1; }

bool exact_root(const Integer& n, unsigned long k, Integer& root) {
  if (n < 0) {
    if (k % 2 == 0) return false;
    Integer pos = -n;
    if (!exact_root(pos, k, root)) return false;
    root = -root;
    return true;
  }
  return mpz_root(root.get_mpz_t(), n.get_mpz_t(), k) != 0;
}

namespace {

__int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    const __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::int64_t checked(__int128 v) {
  if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error("exponent overflow");
  return static_cast<std::int64_t>(v);
}

}  // namespace

SmallRational::SmallRational(std::int64_t n, std::int64_t d) {
  if (d == 0) throw std::domain_error("zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  const std::int64_t g = std::gcd(n, d);
  num_ = g ? n / g : 0;
  den_ = g ? d / g : 1;
}

SmallRational SmallRational::from(const Rational& r) {
  if (!r.get_num().fits_slong_p() || !r.get_den().fits_slong_p())
    throw std::overflow_error("exponent does not fit a machine rational");
  return SmallRational(r.get_num().get_si(), r.get_den().get_si());
}

std::int64_t SmallRational::floor() const {
  std::int64_t q = num_ / den_;
  if (num_ % den_ != 0 && num_ < 0) --q;
  return q;
}

SmallRational operator+(SmallRational a, SmallRational b) {
  if (a.den_ == 1 && b.den_ == 1) return SmallRational(checked(__int128(a.num_) + b.num_));
  const __int128 n = __int128(a.num_) * b.den_ + __int128(b.num_) * a.den_;
  const __int128 d = __int128(a.den_) * b.den_;
  const __int128 g = gcd128(n, d);
  return SmallRational(checked(g ? n / g : 0), checked(g ? d / g : 1));
}

SmallRational operator*(SmallRational a, SmallRational b) {
  const __int128 n = __int128(a.num_) * b.num_;
  const __int128 d = __int128(a.den_) * b.den_;
  const __int128 g = gcd128(n, d);
  return SmallRational(checked(g ? n / g : 0), checked(g ? d / g : 1));
}

int compare(SmallRational a, SmallRational b) {
  const __int128 l = __int128(a.num_) * b.den_;
  const __int128 r = __int128(b.num_) * a.den_;
  return l < r ? -1 : (l > r ? 1 : 0);
}

}  // namespace psc
