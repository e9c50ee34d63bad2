#pragma once

#include <cstdint>
#include <vector>

#include "toral/bigint.hpp"
#include "toral/intlinalg.hpp"
#include "toral/intpoly.hpp"

namespace toral {

/// u_{k+n} = c_{n-1} u_{k+n-1} + ... + c_0 u_k with initial state (0,...,0,1).
struct LrsSpec {
  std::vector<Int> coeffs;  // c_0 .. c_{n-1}
  std::vector<Int> initial;

  std::size_t order() const { return coeffs.size(); }
  IntPoly associated_poly() const { return IntPoly::from_recurrence(coeffs); }
};

LrsSpec induced_lrs(const IntMatrix& A);
LrsSpec induced_lrs(const IntPoly& f);

/// First `count` terms reduced into [0, m).
std::vector<Int> lrs_terms_mod(const LrsSpec& spec, const Int& m, std::size_t count);

inline constexpr std::uint64_t kLrsBruteModulusCap = 1'000'000;

/// Least T > 0 returning the state vector to its initial value mod m.
/// Requires gcd(m, c_0) = 1 and m <= kLrsBruteModulusCap.
std::uint64_t lrs_period_bruteforce(const LrsSpec& spec, std::uint64_t m);

/// Period law for the induced sequence mod p^k: T_k = T1 for k <= t and
/// T1 * p^(k-t) beyond, where x^T1 = 1 + p^t r(x) mod f with p not dividing r.
struct LrsProfile {
  IntPoly f;
  std::uint64_t p = 0;
  Int T1;
  unsigned t = 0;
  unsigned k = 0;
  Int Tk;
};

LrsProfile lrs_period_profile(const IntPoly& f, std::uint64_t p, unsigned k);

/// x^T == 1 mod (p^k, f). Throws InputError for T < 1.
bool lrs_certificate(const IntPoly& f, std::uint64_t p, unsigned k, const Int& T);

}  // namespace toral
