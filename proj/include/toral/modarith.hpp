#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "toral/bigint.hpp"
#include "toral/intpoly.hpp"

namespace toral {

using u64 = std::uint64_t;

/// p-adic valuation of a nonzero integer. Throws InputError for m = 0.
unsigned vp(const Int& m, u64 p);

/// Deterministic primality for 64-bit inputs (Miller-Rabin, fixed bases).
bool is_prime(u64 n);
/// Smallest prime >= n.
u64 next_prime(u64 n);
/// Prime factorization in increasing prime order.
std::vector<std::pair<u64, unsigned>> factorize(u64 n);
std::vector<std::pair<Int, unsigned>> factorize(const Int& n);

/// Order data of a modulo an odd prime p: d = ord_p(a), t = v_p(a^d - 1).
struct OrderProfile {
  Int a;
  u64 p = 0;
  u64 d = 0;
  unsigned t = 0;
};

/// Requires p odd prime, p does not divide a, and a^d != 1 as an integer
/// (which excludes a = 1 and a = -1, whose t would be infinite).
OrderProfile order_profile(const Int& a, u64 p);

/// Multiplicative order of a modulo p^k as d * p^max(0, k - t).
Int mult_order(const Int& a, u64 p, unsigned k);

inline constexpr u64 kRootScanCap = u64{1} << 20;

/// All x in [0, p) with f(x) = 0 mod p, by exhaustive Horner evaluation.
std::vector<u64> roots_mod_p(const IntPoly& f, u64 p);

/// A prime modulo which f splits into distinct nonzero linear factors.
struct SplitPrimeCert {
  u64 p = 0;
  std::vector<u64> roots;  // sorted, in (0, p)
  Int disc;
  Int f0;
  friend bool operator==(const SplitPrimeCert&, const SplitPrimeCert&) = default;
};

inline constexpr u64 kDefaultScanCap = 1'000'000;

/// The first `count` odd primes p >= p_min, p <= scan_cap, not in `exclude`,
/// with p not dividing disc(f)*f(0) and f having deg f distinct nonzero roots
/// mod p. Throws CapExceeded when the scan runs past scan_cap.
std::vector<SplitPrimeCert> find_split_primes(const IntPoly& f, std::size_t count, u64 p_min = 3,
                                              u64 scan_cap = kDefaultScanCap, std::span<const u64> exclude = {});

/// Checks every SplitPrimeCert invariant, including f = prod (x - a_i) mod p.
bool verify_split_cert(const IntPoly& f, const SplitPrimeCert& cert);

/// Lifts a simple nonzero root of f mod p to a root mod p^k, one digit at a
/// time: write f(x_j) = p^l r, solve f'(x_j) s + r = 0 mod p, x += p^l s.
/// Result in [0, p^k).
Int hensel_lift(const IntPoly& f, u64 p, const Int& root, unsigned k);

}  // namespace toral
