#include "toral/bigint.hpp"

#include <stdexcept>

namespace toral {

Int mod_floor(const Int& a, const Int& m) {
  Int r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

Int centered(const Int& a, const Int& m) {
  Int r = mod_floor(a, m);
  if (2 * r > m) r -= m;
  return r;
}

Int pow_int(const Int& base, unsigned long exponent) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exponent);
  return r;
}

Int pow_mod(const Int& base, const Int& exponent, const Int& m) {
  if (exponent < 0) throw std::invalid_argument("pow_mod: negative exponent");
  Int r;
  mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exponent.get_mpz_t(), m.get_mpz_t());
  return r;
}

bool fits_i64(const Int& v) {
  static const Int lo("-9223372036854775808");
  static const Int hi("9223372036854775807");
  return v >= lo && v <= hi;
}

std::int64_t to_i64(const Int& v) {
  if (!fits_i64(v)) throw std::overflow_error("integer does not fit in 64 bits: " + v.get_str());
  // mpz_get_si is long; long is 64-bit on the supported platforms.
  static_assert(sizeof(long) == 8);
  return mpz_get_si(v.get_mpz_t());
}

std::uint64_t to_u64(const Int& v) {
  if (v < 0 || mpz_sizeinbase(v.get_mpz_t(), 2) > 64)
    throw std::overflow_error("integer does not fit in unsigned 64 bits: " + v.get_str());
  static_assert(sizeof(unsigned long) == 8);
  return mpz_get_ui(v.get_mpz_t());
}

Int from_i128(__int128 v) {
  bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
  Int hi(static_cast<unsigned long>(u >> 64));
  Int lo(static_cast<unsigned long>(u & 0xffffffffffffffffULL));
  Int r = (hi << 64) + lo;
  return neg ? Int(-r) : r;
}

Int gcd(const Int& a, const Int& b) {
  Int r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

Int lcm(const Int& a, const Int& b) {
  Int r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

std::string to_string(const Int& v) { return v.get_str(); }

std::string to_string(const Rat& v) { return v.get_str(); }

Rat make_rat(const Int& num, const Int& den) {
  if (den == 0) throw std::domain_error("zero denominator");
  Rat r(num, den);
  r.canonicalize();
  return r;
}

}  // namespace toral
