#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

namespace toral {

using Int = mpz_class;
using Rat = mpq_class;

/// Representative of a in [0, m). m > 0.
Int mod_floor(const Int& a, const Int& m);

/// Representative of a in (-m/2, m/2].
Int centered(const Int& a, const Int& m);

Int pow_int(const Int& base, unsigned long exponent);

/// base^exponent mod m, result in [0, m).
Int pow_mod(const Int& base, const Int& exponent, const Int& m);

bool fits_i64(const Int& v);
std::int64_t to_i64(const Int& v);  // throws std::overflow_error
std::uint64_t to_u64(const Int& v);
Int from_i128(__int128 v);

Int gcd(const Int& a, const Int& b);
Int lcm(const Int& a, const Int& b);

std::string to_string(const Int& v);
std::string to_string(const Rat& v);

/// Canonical rational (num/den reduced, den > 0).
Rat make_rat(const Int& num, const Int& den);

}  // namespace toral
