#include "toral/lrs.hpp"

#include "toral/errors.hpp"
#include "toral/modarith.hpp"

namespace toral {

LrsSpec induced_lrs(const IntPoly& f) {
  if (f.degree() < 1 || !f.is_monic()) throw InputError("induced_lrs: needs a monic polynomial of degree >= 1");
  LrsSpec s;
  s.coeffs = f.recurrence_coeffs();
  s.initial.assign(s.coeffs.size(), Int(0));
  s.initial.back() = 1;
  return s;
}

LrsSpec induced_lrs(const IntMatrix& A) { return induced_lrs(char_poly(A)); }

std::vector<Int> lrs_terms_mod(const LrsSpec& spec, const Int& m, std::size_t count) {
  const std::size_t n = spec.order();
  if (count < n) throw InputError("lrs_terms_mod: count must be at least the recurrence order");
  if (m < 1) throw InputError("lrs_terms_mod: modulus must be positive");
  std::vector<Int> u;
  u.reserve(count);
  for (const auto& x : spec.initial) u.push_back(mod_floor(x, m));
  while (u.size() < count) {
    Int next = 0;
    const std::size_t k = u.size() - n;
    for (std::size_t j = 0; j < n; ++j) next += spec.coeffs[j] * u[k + j];
    u.push_back(mod_floor(next, m));
  }
  return u;
}

std::uint64_t lrs_period_bruteforce(const LrsSpec& spec, std::uint64_t m) {
  const std::size_t n = spec.order();
  if (m < 1) throw InputError("lrs_period_bruteforce: modulus must be positive");
  if (m > kLrsBruteModulusCap) throw CapExceeded("lrs_period_bruteforce: modulus above cap");
  const Int M(static_cast<unsigned long>(m));
  if (gcd(spec.coeffs.front(), M) != 1)
    throw InputError("lrs_period_bruteforce: modulus shares a factor with c_0; sequence is only eventually periodic");
  std::vector<std::uint64_t> c(n), state(n), start(n);
  for (std::size_t j = 0; j < n; ++j) {
    c[j] = to_u64(mod_floor(spec.coeffs[j], M));
    start[j] = to_u64(mod_floor(spec.initial[j], M));
  }
  state = start;
  // The state map is invertible mod m, so the orbit of the initial state is a
  // pure cycle of length at most m^n.
  std::uint64_t T = 0;
  std::vector<std::uint64_t> next(n);
  while (true) {
    unsigned __int128 acc = 0;
    for (std::size_t j = 0; j < n; ++j) acc += static_cast<unsigned __int128>(c[j]) * state[j];
    for (std::size_t j = 0; j + 1 < n; ++j) next[j] = state[j + 1];
    next[n - 1] = static_cast<std::uint64_t>(acc % m);
    state.swap(next);
    ++T;
    if (state == start) return T;
  }
}

namespace {

bool is_one(const IntPoly& r) { return r.degree() == 0 && r[0] == 1; }

}  // namespace

LrsProfile lrs_period_profile(const IntPoly& f, std::uint64_t p, unsigned k) {
  if (f.degree() < 1 || !f.is_monic()) throw InputError("lrs_period_profile: needs monic f with deg >= 1");
  if (p < 3 || !is_prime(p)) throw InputError("lrs_period_profile: p must be an odd prime");
  if (k < 1) throw InputError("lrs_period_profile: k must be positive");
  const Int P(static_cast<unsigned long>(p));
  if (mpz_divisible_p(Int(f[0]).get_mpz_t(), P.get_mpz_t())) throw InputError("lrs_period_profile: p divides f(0)");
  if (auto m = root_of_unity_factor(f))
    throw InputError("lrs_period_profile: f has the cyclotomic factor Phi_" + std::to_string(*m));

  LrsProfile prof;
  prof.f = f;
  prof.p = p;
  prof.k = k;

  // T1: step x -> x*x mod (p, f) until reaching 1; bounded by p^n - 1.
  const IntPoly x = reduce_mod(IntPoly::x(), f, P);
  const Int cap = pow_int(P, static_cast<unsigned long>(f.degree()));
  IntPoly cur = x;
  Int T = 1;
  while (!is_one(cur)) {
    cur = mulmod_quotient(cur, x, f, P);
    ++T;
    if (T > cap) throw ContractViolation("lrs_period_profile: no return to 1 within p^n steps");
  }
  prof.T1 = T;

  // t: valuation of x^T1 - 1 mod f, detected modulo p^(k+margin).
  unsigned margin = 4;
  while (true) {
    const unsigned L = k + margin;
    const Int PL = pow_int(P, L);
    IntPoly r = powmod_quotient(IntPoly::x(), prof.T1, f, PL) - IntPoly::constant(1);
    r = reduce_coeffs(r, PL);
    if (!r.is_zero()) {
      unsigned t = L;
      for (const auto& c : r.coeffs())
        if (c != 0) t = std::min(t, vp(c, p));
      prof.t = t;
      break;
    }
    margin *= 2;
  }
  const unsigned extra = k > prof.t ? k - prof.t : 0;
  prof.Tk = prof.T1 * pow_int(P, extra);
  return prof;
}

bool lrs_certificate(const IntPoly& f, std::uint64_t p, unsigned k, const Int& T) {
  if (T < 1) throw InputError("lrs_certificate: T must be positive");
  if (f.degree() < 1 || !f.is_monic()) throw InputError("lrs_certificate: needs monic f with deg >= 1");
  const Int PK = pow_int(Int(static_cast<unsigned long>(p)), k);
  return is_one(powmod_quotient(IntPoly::x(), T, f, PK));
}

}  // namespace toral
