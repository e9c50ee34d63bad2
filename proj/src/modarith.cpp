#include "toral/modarith.hpp"

#include <algorithm>
#include <numeric>

#include "toral/errors.hpp"

namespace toral {
namespace {

using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod(u64 a, u64 e, u64 m) {
  u64 r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

bool miller_rabin_witness(u64 n, u64 a, u64 d, unsigned s) {
  u64 x = powmod(a, d, n);
  if (x == 1 || x == n - 1) return false;
  for (unsigned i = 1; i < s; ++i) {
    x = mulmod(x, x, n);
    if (x == n - 1) return false;
  }
  return true;
}

u64 pollard_brent(u64 n) {
  if (n % 2 == 0) return 2;
  for (u64 c = 1;; ++c) {
    u64 y = 2, x = 2, g = 1, q = 1, ys = 0;
    u64 r = 1;
    const u64 m = 128;
    auto f = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
    do {
      x = y;
      for (u64 i = 0; i < r; ++i) y = f(y);
      u64 k = 0;
      do {
        ys = y;
        for (u64 i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = mulmod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
        k += m;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_into(u64 n, std::vector<u64>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  u64 d = pollard_brent(n);
  factor_into(d, out);
  factor_into(n / d, out);
}

void require_odd_prime(u64 p, const char* who) {
  if (p < 3 || !is_prime(p)) throw InputError(std::string(who) + ": modulus " + std::to_string(p) + " is not an odd prime");
}

Int to_int(u64 v) { return Int(static_cast<unsigned long>(v)); }

// Valuation of a^d - 1 at p, computed modulo growing powers of p so the
// (possibly huge) integer a^d is never formed.
unsigned valuation_of_power_minus_one(const Int& a, u64 d, u64 p) {
  const Int P = to_int(p);
  unsigned L = 8;
  while (true) {
    Int mod = pow_int(P, L);
    Int r = mod_floor(pow_mod(a, to_int(d), mod) - 1, mod);
    if (r != 0) return vp(r, p);
    L *= 2;
  }
}

}  // namespace

unsigned vp(const Int& m, u64 p) {
  if (m == 0) throw InputError("vp: valuation of zero is undefined");
  if (p < 2) throw InputError("vp: base must be a prime");
  Int x = abs(m);
  const Int P = to_int(p);
  unsigned v = 0;
  while (mpz_divisible_p(x.get_mpz_t(), P.get_mpz_t())) {
    x /= P;
    ++v;
  }
  return v;
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  unsigned s = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++s;
  }
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (miller_rabin_witness(n, a, d, s)) return false;
  }
  return true;
}

u64 next_prime(u64 n) {
  if (n <= 2) return 2;
  if (n % 2 == 0) ++n;
  while (!is_prime(n)) n += 2;
  return n;
}

std::vector<std::pair<u64, unsigned>> factorize(u64 n) {
  std::vector<std::pair<u64, unsigned>> out;
  if (n < 2) return out;
  std::vector<u64> primes;
  for (u64 p = 2; p < 1000 && p * p <= n; ++p) {
    while (n % p == 0) {
      primes.push_back(p);
      n /= p;
    }
  }
  factor_into(n, primes);
  std::sort(primes.begin(), primes.end());
  for (u64 p : primes) {
    if (!out.empty() && out.back().first == p)
      ++out.back().second;
    else
      out.emplace_back(p, 1);
  }
  return out;
}

std::vector<std::pair<Int, unsigned>> factorize(const Int& n) {
  if (n < 1) throw InputError("factorize: needs a positive integer");
  std::vector<std::pair<Int, unsigned>> out;
  Int x = n;
  for (unsigned long p = 2; p < 1'000'000 && x > 1 && mpz_sizeinbase(x.get_mpz_t(), 2) > 64; ++p) {
    unsigned e = 0;
    while (mpz_divisible_ui_p(x.get_mpz_t(), p)) {
      x /= p;
      ++e;
    }
    if (e) out.emplace_back(Int(p), e);
  }
  if (mpz_sizeinbase(x.get_mpz_t(), 2) > 64) throw CapExceeded("factorize: cofactor too large: " + x.get_str());
  for (auto [p, e] : factorize(to_u64(x))) {
    Int P = to_int(p);
    auto it = std::find_if(out.begin(), out.end(), [&](const auto& pe) { return pe.first == P; });
    if (it != out.end())
      it->second += e;
    else
      out.emplace_back(P, e);
  }
  std::sort(out.begin(), out.end());
  return out;
}

OrderProfile order_profile(const Int& a, u64 p) {
  require_odd_prime(p, "order_profile");
  const Int P = to_int(p);
  if (mod_floor(a, P) == 0) throw InputError("order_profile: p divides a");
  if (a == 1 || a == -1) throw InputError("order_profile: |a| = 1 has no finite lifting exponent");
  // Divisors of p - 1 in increasing order.
  std::vector<u64> divisors = {1};
  for (auto [q, e] : factorize(p - 1)) {
    std::size_t sz = divisors.size();
    u64 qe = 1;
    for (unsigned i = 1; i <= e; ++i) {
      qe *= q;
      for (std::size_t j = 0; j < sz; ++j) divisors.push_back(divisors[j] * qe);
    }
  }
  std::sort(divisors.begin(), divisors.end());
  const u64 ar = to_u64(mod_floor(a, P));
  OrderProfile prof{a, p, 0, 0};
  for (u64 d : divisors) {
    if (powmod(ar, d, p) == 1) {
      prof.d = d;
      break;
    }
  }
  prof.t = valuation_of_power_minus_one(a, prof.d, p);
  return prof;
}

Int mult_order(const Int& a, u64 p, unsigned k) {
  if (k < 1) throw InputError("mult_order: k must be positive");
  OrderProfile prof = order_profile(a, p);
  unsigned extra = k > prof.t ? k - prof.t : 0;
  return to_int(prof.d) * pow_int(to_int(p), extra);
}

std::vector<u64> roots_mod_p(const IntPoly& f, u64 p) {
  if (p >= kRootScanCap) throw CapExceeded("roots_mod_p: p exceeds the exhaustive-search cap 2^20");
  if (p < 2) throw InputError("roots_mod_p: p must be prime");
  const Int P = to_int(p);
  std::vector<u64> c;
  for (const auto& x : f.coeffs()) c.push_back(to_u64(mod_floor(x, P)));
  std::vector<u64> roots;
  for (u64 x = 0; x < p; ++x) {
    u64 acc = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = (acc * x + *it) % p;
    if (acc == 0) roots.push_back(x);
  }
  return roots;
}

namespace {

// x^p == x mod (p, f) with f monic of degree n and square-free mod p means f
// splits into distinct linear factors. Used as a cheap filter before the
// exhaustive root scan.
bool splits_completely(const IntPoly& f, u64 p) {
  const Int P = to_int(p);
  IntPoly monic_f = f;
  if (!f.is_monic()) {
    Int inv;
    Int lc = mod_floor(f.leading(), P);
    mpz_invert(inv.get_mpz_t(), lc.get_mpz_t(), P.get_mpz_t());
    monic_f = reduce_coeffs(f * inv, P);
  }
  if (monic_f.degree() == 1) return true;
  IntPoly xp = powmod_quotient(IntPoly::x(), P, monic_f, P);
  return xp == reduce_mod(IntPoly::x(), monic_f, P);
}

}  // namespace

std::vector<SplitPrimeCert> find_split_primes(const IntPoly& f, std::size_t count, u64 p_min, u64 scan_cap,
                                              std::span<const u64> exclude) {
  if (f.degree() < 1) throw InputError("find_split_primes: needs deg f >= 1");
  if (count == 0) throw InputError("find_split_primes: count must be positive");
  if (scan_cap >= kRootScanCap) throw InputError("find_split_primes: scan cap must stay below 2^20");
  const auto n = static_cast<std::size_t>(f.degree());
  const Int disc = discriminant(f);
  const Int f0 = f[0];
  const Int bad = disc * f0 * f.leading();
  std::vector<SplitPrimeCert> out;
  for (u64 p = next_prime(std::max<u64>(3, p_min)); p <= scan_cap; p = next_prime(p + 1)) {
    if (std::find(exclude.begin(), exclude.end(), p) != exclude.end()) continue;
    if (mpz_divisible_ui_p(bad.get_mpz_t(), p)) continue;
    if (!splits_completely(f, p)) continue;
    auto roots = roots_mod_p(f, p);
    if (roots.size() != n) continue;
    out.push_back({p, std::move(roots), disc, f0});
    if (out.size() == count) return out;
  }
  throw CapExceeded("find_split_primes: only " + std::to_string(out.size()) + " of " + std::to_string(count) +
                    " split primes found below scan cap " + std::to_string(scan_cap));
}

bool verify_split_cert(const IntPoly& f, const SplitPrimeCert& cert) {
  if (cert.p < 3 || !is_prime(cert.p)) return false;
  if (static_cast<int>(cert.roots.size()) != f.degree()) return false;
  const Int P = to_int(cert.p);
  if (mpz_divisible_ui_p(discriminant(f).get_mpz_t(), cert.p)) return false;
  if (mpz_divisible_ui_p(Int(f[0]).get_mpz_t(), cert.p)) return false;
  IntPoly prod = IntPoly::constant(f.leading());
  for (std::size_t i = 0; i < cert.roots.size(); ++i) {
    u64 a = cert.roots[i];
    if (a == 0 || a >= cert.p) return false;
    for (std::size_t j = 0; j < i; ++j)
      if (cert.roots[j] == a) return false;
    if (f.eval_mod(to_int(a), P) != 0) return false;
    prod *= IntPoly{-static_cast<long>(a), 1};
  }
  return reduce_coeffs(prod, P) == reduce_coeffs(f, P);
}

Int hensel_lift(const IntPoly& f, u64 p, const Int& root, unsigned k) {
  require_odd_prime(p, "hensel_lift");
  if (k < 1) throw InputError("hensel_lift: k must be positive");
  const Int P = to_int(p);
  Int x = mod_floor(root, P);
  if (x == 0) throw InputError("hensel_lift: root is divisible by p");
  if (f.eval_mod(x, P) != 0) throw InputError("hensel_lift: not a root mod p");
  const IntPoly df = derivative(f);
  const Int dfx = df.eval_mod(x, P);
  if (dfx == 0) throw InputError("hensel_lift: derivative vanishes mod p (root is not simple)");
  Int dinv;
  mpz_invert(dinv.get_mpz_t(), dfx.get_mpz_t(), P.get_mpz_t());
  Int pl = P;  // p^j at level j
  for (unsigned j = 1; j < k; ++j) {
    Int next = pl * P;
    Int fx = f.eval_mod(x, next);
    if (fx != 0) {
      // f(x_j) = p^j r with p not dividing r (mod p^{j+1} only the digit r mod p matters)
      Int r = fx / pl;
      // f'(x_j) = f'(root) mod p, so its inverse mod p is fixed along the tower.
      Int s = mod_floor(-r * dinv, P);
      x = mod_floor(x + pl * s, next);
    }
    pl = next;
  }
  return x;
}

}  // namespace toral
