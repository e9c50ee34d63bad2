// Factorization over Q for small-degree integer polynomials: square-free
// split, Berlekamp factorization modulo a good prime, multifactor Hensel
// lifting and exhaustive recombination under a Mignotte-type bound.

#include <algorithm>
#include <cstdint>
#include <stdexcept>

#include "toral/errors.hpp"
#include "toral/intpoly.hpp"
#include "toral/modarith.hpp"

namespace toral {
namespace {

using u64 = std::uint64_t;
using Fp = std::vector<u64>;  // polynomial over F_p, constant first

struct Field {
  u64 p;
  u64 add(u64 a, u64 b) const { return (a + b) % p; }
  u64 sub(u64 a, u64 b) const { return (a + p - b) % p; }
  u64 mul(u64 a, u64 b) const { return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % p); }
  u64 pow(u64 a, u64 e) const {
    u64 r = 1 % p;
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }
  u64 inv(u64 a) const { return pow(a, p - 2); }

  static void trim(Fp& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
  }

  Fp from(const IntPoly& f) const {
    Fp r;
    for (const auto& c : f.coeffs()) r.push_back(to_u64(mod_floor(c, Int(static_cast<unsigned long>(p)))));
    trim(r);
    return r;
  }

  Fp sub(const Fp& a, const Fp& b) const {
    Fp r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = sub(i < a.size() ? a[i] : 0, i < b.size() ? b[i] : 0);
    trim(r);
    return r;
  }

  Fp mul(const Fp& a, const Fp& b) const {
    if (a.empty() || b.empty()) return {};
    Fp r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = add(r[i + j], mul(a[i], b[j]));
    trim(r);
    return r;
  }

  // Returns (q, r) with a = q*b + r.
  std::pair<Fp, Fp> divmod(Fp a, const Fp& b) const {
    if (b.empty()) throw std::domain_error("F_p division by zero");
    const std::size_t n = b.size() - 1;
    u64 lc_inv = inv(b.back());
    Fp q(a.size() >= b.size() ? a.size() - n : 0, 0);
    while (a.size() > n && !a.empty()) {
      u64 c = mul(a.back(), lc_inv);
      std::size_t shift = a.size() - 1 - n;
      q[shift] = c;
      for (std::size_t j = 0; j <= n; ++j) a[shift + j] = sub(a[shift + j], mul(c, b[j]));
      a.pop_back();
      trim(a);
    }
    trim(q);
    return {q, a};
  }

  Fp rem(const Fp& a, const Fp& b) const { return divmod(a, b).second; }

  Fp monic(Fp f) const {
    if (f.empty()) return f;
    u64 c = inv(f.back());
    for (auto& x : f) x = mul(x, c);
    return f;
  }

  Fp gcd(Fp a, Fp b) const {
    while (!b.empty()) {
      Fp r = rem(a, b);
      a = std::move(b);
      b = std::move(r);
    }
    return monic(a);
  }

  // s*a + t*b = 1 for coprime a, b.
  std::pair<Fp, Fp> bezout(const Fp& a, const Fp& b) const {
    Fp r0 = a, r1 = b, s0 = {1}, s1 = {}, t0 = {}, t1 = {1};
    while (!r1.empty()) {
      auto [q, r] = divmod(r0, r1);
      Fp s2 = sub(s0, mul(q, s1));
      Fp t2 = sub(t0, mul(q, t1));
      r0 = std::move(r1);
      r1 = std::move(r);
      s0 = std::move(s1);
      s1 = std::move(s2);
      t0 = std::move(t1);
      t1 = std::move(t2);
    }
    if (r0.size() != 1) throw ContractViolation("bezout: inputs are not coprime mod p");
    u64 c = inv(r0[0]);
    for (auto& x : s0) x = mul(x, c);
    for (auto& x : t0) x = mul(x, c);
    return {s0, t0};
  }

  Fp derivative(const Fp& f) const {
    Fp d;
    for (std::size_t i = 1; i < f.size(); ++i) d.push_back(mul(f[i], i % p));
    trim(d);
    return d;
  }
};

// Berlekamp: monic square-free f over F_p into monic irreducible factors.
std::vector<Fp> berlekamp(const Field& F, const Fp& f) {
  const std::size_t n = f.size() - 1;
  if (n <= 1) return {f};
  // Rows of Q: x^{p*i} mod f.
  std::vector<std::vector<u64>> Q(n, std::vector<u64>(n, 0));
  Fp xp = {0, 1};
  {
    // x^p mod f by square-and-multiply
    Fp base = {0, 1};
    Fp acc = {1};
    u64 e = F.p;
    while (e) {
      if (e & 1) acc = F.rem(F.mul(acc, base), f);
      base = F.rem(F.mul(base, base), f);
      e >>= 1;
    }
    xp = acc;
  }
  Fp row = {1};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < row.size(); ++j) Q[i][j] = row[j];
    row = F.rem(F.mul(row, xp), f);
  }
  for (std::size_t i = 0; i < n; ++i) Q[i][i] = F.sub(Q[i][i], 1);
  // Left kernel of (Q - I): solve v * M = 0, i.e. kernel of M^T.
  std::vector<std::vector<u64>> M(n, std::vector<u64>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) M[j][i] = Q[i][j];
  std::vector<int> where(n, -1);
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < n; ++c) {
    std::size_t piv = r;
    while (piv < n && M[piv][c] == 0) ++piv;
    if (piv == n) continue;
    std::swap(M[piv], M[r]);
    u64 iv = F.inv(M[r][c]);
    for (auto& x : M[r]) x = F.mul(x, iv);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == r || M[i][c] == 0) continue;
      u64 factor = M[i][c];
      for (std::size_t j = 0; j < n; ++j) M[i][j] = F.sub(M[i][j], F.mul(factor, M[r][j]));
    }
    where[c] = static_cast<int>(r);
    ++r;
  }
  std::vector<Fp> basis;
  for (std::size_t free = 0; free < n; ++free) {
    if (where[free] != -1) continue;
    Fp v(n, 0);
    v[free] = 1;
    for (std::size_t c = 0; c < n; ++c)
      if (where[c] != -1) v[c] = F.sub(0, M[static_cast<std::size_t>(where[c])][free]);
    Field::trim(v);
    basis.push_back(v);
  }
  const std::size_t k = basis.size();
  std::vector<Fp> factors = {f};
  for (const auto& v : basis) {
    if (factors.size() == k) break;
    if (v.size() <= 1) continue;  // constant vector
    std::vector<Fp> next;
    for (const auto& g : factors) {
      if (g.size() <= 2) {
        next.push_back(g);
        continue;
      }
      Fp rest = g;
      for (u64 s = 0; s < F.p && rest.size() > 1; ++s) {
        Fp shifted = v;
        shifted[0] = F.sub(shifted[0], s);
        Fp h = F.gcd(rest, shifted);
        if (h.size() > 1 && h.size() < rest.size()) {
          next.push_back(h);
          rest = F.divmod(rest, h).first;
        }
      }
      next.push_back(F.monic(rest));
    }
    factors = std::move(next);
  }
  if (factors.size() != k) throw ContractViolation("berlekamp: factor count mismatch");
  return factors;
}

IntPoly lift_to_int(const Fp& f) {
  std::vector<Int> v;
  for (u64 c : f) v.emplace_back(static_cast<unsigned long>(c));
  return IntPoly(std::move(v));
}

IntPoly symmetric(const IntPoly& f, const Int& m) {
  std::vector<Int> v = f.coeffs();
  for (auto& c : v) c = centered(c, m);
  return IntPoly(std::move(v));
}

// Lifts F = g*h (mod p), g,h monic and coprime mod p, to F = G*H mod p^a.
std::pair<IntPoly, IntPoly> hensel_pair(const Field& F, const IntPoly& target, const Fp& g, const Fp& h,
                                        unsigned a) {
  auto [s, t] = F.bezout(g, h);
  const Int p(static_cast<unsigned long>(F.p));
  IntPoly G = lift_to_int(g);
  IntPoly H = lift_to_int(h);
  Int pj = p;
  for (unsigned j = 1; j < a; ++j) {
    IntPoly diff = target - G * H;
    std::vector<Int> e_coeffs = diff.coeffs();
    for (auto& c : e_coeffs) {
      if (!mpz_divisible_p(c.get_mpz_t(), pj.get_mpz_t())) throw ContractViolation("hensel_pair: lift invariant broken");
      c /= pj;
    }
    Fp e = F.from(IntPoly(std::move(e_coeffs)));
    Fp dG = F.rem(F.mul(t, e), g);
    Fp dH = F.rem(F.mul(s, e), h);
    G += lift_to_int(dG) * pj;
    H += lift_to_int(dH) * pj;
    pj *= p;
  }
  return {reduce_coeffs(G, pj), reduce_coeffs(H, pj)};
}

std::vector<IntPoly> hensel_multi(const Field& F, const IntPoly& target, const std::vector<Fp>& factors, unsigned a) {
  const Int pa = pow_int(Int(static_cast<unsigned long>(F.p)), a);
  if (factors.size() == 1) return {reduce_coeffs(target, pa)};
  Fp rest = {1};
  for (std::size_t i = 1; i < factors.size(); ++i) rest = F.mul(rest, factors[i]);
  auto [G, H] = hensel_pair(F, target, factors[0], rest, a);
  std::vector<Fp> tail(factors.begin() + 1, factors.end());
  auto lifted_tail = hensel_multi(F, H, tail, a);
  std::vector<IntPoly> out = {G};
  out.insert(out.end(), lifted_tail.begin(), lifted_tail.end());
  return out;
}

// Factors a monic square-free integer polynomial of degree >= 1.
std::vector<IntPoly> factor_monic_squarefree(const IntPoly& f) {
  const int n = f.degree();
  if (n <= 1) return {f};
  // Choose among the first few good primes the one with fewest modular factors.
  std::vector<Fp> best;
  Field bestF{0};
  int good = 0;
  for (u64 p = 3; good < 5 && p < 10000; p = next_prime(p + 1)) {
    Field F{p};
    Fp fp = F.from(f);
    if (static_cast<int>(fp.size()) - 1 != n) continue;
    if (F.gcd(fp, F.derivative(fp)).size() != 1) continue;
    auto facs = berlekamp(F, fp);
    ++good;
    if (bestF.p == 0 || facs.size() < best.size()) {
      best = std::move(facs);
      bestF = F;
    }
    if (best.size() == 1) return {f};
  }
  if (bestF.p == 0) throw ContractViolation("factor: no good prime found");

  // Coefficient bound for any monic factor: 2^n * ||f||_2 (Mignotte).
  Int norm_sq = 0;
  for (const auto& c : f.coeffs()) norm_sq += c * c;
  Int norm = sqrt(norm_sq) + 1;
  Int bound = (Int(1) << n) * norm;
  const Int p(static_cast<unsigned long>(bestF.p));
  unsigned a = 1;
  Int pa = p;
  while (pa <= 2 * bound) {
    pa *= p;
    ++a;
  }
  std::vector<IntPoly> lifted = hensel_multi(bestF, f, best, a);

  std::vector<IntPoly> result;
  IntPoly remaining = f;
  std::vector<IntPoly> pool = lifted;
  std::size_t s = 1;
  while (2 * s <= pool.size()) {
    bool found = false;
    std::vector<std::size_t> idx(s);
    for (std::size_t i = 0; i < s; ++i) idx[i] = i;
    while (true) {
      IntPoly cand = IntPoly::constant(1);
      for (auto i : idx) cand = reduce_coeffs(cand * pool[i], pa);
      cand = symmetric(cand, pa);
      if (auto q = divide_exact(remaining, cand)) {
        result.push_back(cand);
        remaining = *q;
        std::vector<IntPoly> next;
        for (std::size_t i = 0, j = 0; i < pool.size(); ++i) {
          if (j < s && idx[j] == i) {
            ++j;
            continue;
          }
          next.push_back(pool[i]);
        }
        pool = std::move(next);
        found = true;
        break;
      }
      // next combination
      std::size_t k = s;
      while (k > 0 && idx[k - 1] == pool.size() - s + k - 1) --k;
      if (k == 0) break;
      ++idx[k - 1];
      for (std::size_t j = k; j < s; ++j) idx[j] = idx[j - 1] + 1;
    }
    if (!found) ++s;
  }
  if (remaining.degree() >= 1) result.push_back(remaining);
  return result;
}

}  // namespace

std::vector<PolyFactor> factor_rational(const IntPoly& f) {
  if (f.is_zero()) throw InputError("factor_rational: zero polynomial");
  if (f.degree() > kMaxFactorDegree)
    throw InputError("factor_rational: degree " + std::to_string(f.degree()) + " exceeds cap " +
                     std::to_string(kMaxFactorDegree));
  std::vector<PolyFactor> out;
  if (f.degree() < 1) return out;
  const IntPoly prim = primitive_part(f);
  const IntPoly sqfree = primitive_part(pseudo_divmod(prim, gcd(prim, derivative(prim))).quotient);
  // Monic transform y = lc * x: F(y) = lc^{n-1} f(y / lc).
  const Int lc = sqfree.leading();
  const int n = sqfree.degree();
  std::vector<Int> mono(static_cast<std::size_t>(n + 1));
  for (int i = 0; i < n; ++i) mono[static_cast<std::size_t>(i)] = sqfree[static_cast<std::size_t>(i)] * pow_int(lc, static_cast<unsigned long>(n - 1 - i));
  mono[static_cast<std::size_t>(n)] = 1;
  std::vector<IntPoly> monic_factors = factor_monic_squarefree(IntPoly(std::move(mono)));
  const IntPoly scaled_x = IntPoly::monomial(lc, 1);
  for (const auto& g : monic_factors) {
    IntPoly back = primitive_part(compose(g, scaled_x));
    PolyFactor pf{back, 0};
    IntPoly rest = prim;
    while (auto q = divide_exact(rest, back)) {
      rest = *q;
      ++pf.multiplicity;
    }
    if (pf.multiplicity == 0) throw ContractViolation("factor_rational: factor does not divide input");
    out.push_back(pf);
  }
  std::sort(out.begin(), out.end(), [](const PolyFactor& a, const PolyFactor& b) { return poly_less(a.poly, b.poly); });
  return out;
}

bool is_irreducible(const IntPoly& f) {
  if (f.degree() < 1) return false;
  auto fs = factor_rational(f);
  return fs.size() == 1 && fs[0].multiplicity == 1;
}

}  // namespace toral
