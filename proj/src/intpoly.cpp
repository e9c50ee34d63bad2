#include "toral/intpoly.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "toral/errors.hpp"

namespace toral {

IntPoly::IntPoly(std::vector<Int> coeffs) : coeffs_(std::move(coeffs)) { normalize(); }

IntPoly::IntPoly(std::initializer_list<long> coeffs) {
  coeffs_.reserve(coeffs.size());
  for (long c : coeffs) coeffs_.emplace_back(c);
  normalize();
}

IntPoly IntPoly::constant(const Int& c) { return IntPoly(std::vector<Int>{c}); }

IntPoly IntPoly::monomial(const Int& c, std::size_t k) {
  std::vector<Int> v(k + 1);
  v[k] = c;
  return IntPoly(std::move(v));
}

IntPoly IntPoly::from_recurrence(const std::vector<Int>& c) {
  std::vector<Int> v(c.size() + 1);
  for (std::size_t i = 0; i < c.size(); ++i) v[i] = -c[i];
  v.back() = 1;
  return IntPoly(std::move(v));
}

void IntPoly::normalize() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

const Int& IntPoly::operator[](std::size_t i) const {
  static const Int zero(0);
  return i < coeffs_.size() ? coeffs_[i] : zero;
}

const Int& IntPoly::leading() const {
  if (coeffs_.empty()) throw std::domain_error("leading coefficient of the zero polynomial");
  return coeffs_.back();
}

Int IntPoly::recurrence_coeff(std::size_t i) const {
  if (!is_monic()) throw InputError("recurrence coefficients need a monic polynomial");
  return -(*this)[i];
}

std::vector<Int> IntPoly::recurrence_coeffs() const {
  std::vector<Int> c;
  for (int i = 0; i < degree(); ++i) c.push_back(recurrence_coeff(static_cast<std::size_t>(i)));
  return c;
}

Int IntPoly::eval(const Int& x) const {
  Int acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Int IntPoly::eval_mod(const Int& x, const Int& m) const {
  Int acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = mod_floor(acc * x + *it, m);
  return acc;
}

std::string IntPoly::to_string(char var) const {
  if (coeffs_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    const Int& c = coeffs_[static_cast<std::size_t>(i)];
    if (c == 0) continue;
    Int mag = abs(c);
    if (first) {
      if (c < 0) out << "-";
    } else {
      out << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (i == 0 || mag != 1) out << mag;
    if (i >= 1) out << var;
    if (i >= 2) out << "^" << i;
  }
  return out.str();
}

IntPoly IntPoly::operator-() const {
  IntPoly r = *this;
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

IntPoly& IntPoly::operator+=(const IntPoly& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  normalize();
  return *this;
}

IntPoly& IntPoly::operator-=(const IntPoly& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  normalize();
  return *this;
}

IntPoly& IntPoly::operator*=(const IntPoly& o) {
  if (is_zero() || o.is_zero()) {
    coeffs_.clear();
    return *this;
  }
  std::vector<Int> r(coeffs_.size() + o.coeffs_.size() - 1);
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    for (std::size_t j = 0; j < o.coeffs_.size(); ++j) r[i + j] += coeffs_[i] * o.coeffs_[j];
  coeffs_ = std::move(r);
  normalize();
  return *this;
}

IntPoly& IntPoly::operator*=(const Int& c) {
  for (auto& a : coeffs_) a *= c;
  normalize();
  return *this;
}

bool poly_less(const IntPoly& a, const IntPoly& b) {
  if (a.degree() != b.degree()) return a.degree() > b.degree();
  for (int i = a.degree(); i >= 0; --i) {
    auto k = static_cast<std::size_t>(i);
    if (a[k] != b[k]) return a[k] < b[k];
  }
  return false;
}

PolyDivMod pseudo_divmod(const IntPoly& a, const IntPoly& b) {
  if (b.is_zero()) throw InputError("polynomial division by zero");
  if (a.degree() < b.degree()) return {IntPoly(), a};
  const int n = b.degree();
  const Int& lc = b.leading();
  std::vector<Int> r = a.coeffs();
  std::vector<Int> q(static_cast<std::size_t>(a.degree() - n + 1));
  // Multiply through by lc at every step so all arithmetic stays integral.
  for (int i = a.degree(); i >= n; --i) {
    auto top = static_cast<std::size_t>(i);
    Int c = r[top];
    for (auto& qq : q) qq *= lc;
    for (auto& rr : r) rr *= lc;
    q[static_cast<std::size_t>(i - n)] += c;
    for (int j = 0; j <= n; ++j) r[static_cast<std::size_t>(i - n + j)] -= c * b[static_cast<std::size_t>(j)];
  }
  return {IntPoly(std::move(q)), IntPoly(std::move(r))};
}

std::optional<IntPoly> divide_exact(const IntPoly& a, const IntPoly& b) {
  if (b.is_zero()) throw InputError("polynomial division by zero");
  if (a.is_zero()) return IntPoly();
  if (a.degree() < b.degree()) return std::nullopt;
  const int n = b.degree();
  const Int& lc = b.leading();
  std::vector<Int> r = a.coeffs();
  std::vector<Int> q(static_cast<std::size_t>(a.degree() - n + 1));
  for (int i = a.degree(); i >= n; --i) {
    auto top = static_cast<std::size_t>(i);
    if (r[top] == 0) continue;
    if (!mpz_divisible_p(r[top].get_mpz_t(), lc.get_mpz_t())) return std::nullopt;
    Int c = r[top] / lc;
    q[static_cast<std::size_t>(i - n)] = c;
    for (int j = 0; j <= n; ++j) r[static_cast<std::size_t>(i - n + j)] -= c * b[static_cast<std::size_t>(j)];
  }
  for (const auto& c : r)
    if (c != 0) return std::nullopt;
  return IntPoly(std::move(q));
}

IntPoly derivative(const IntPoly& f) {
  if (f.degree() < 1) return IntPoly();
  std::vector<Int> d(static_cast<std::size_t>(f.degree()));
  for (std::size_t i = 1; i < f.coeffs().size(); ++i) d[i - 1] = f.coeffs()[i] * static_cast<unsigned long>(i);
  return IntPoly(std::move(d));
}

Int content(const IntPoly& f) {
  Int g = 0;
  for (const auto& c : f.coeffs()) g = gcd(g, c);
  return g;
}

IntPoly primitive_part(const IntPoly& f) {
  if (f.is_zero()) return f;
  Int c = content(f);
  if (f.leading() < 0) c = -c;
  std::vector<Int> v = f.coeffs();
  for (auto& a : v) a /= c;
  return IntPoly(std::move(v));
}

IntPoly gcd(const IntPoly& a, const IntPoly& b) {
  IntPoly x = primitive_part(a);
  IntPoly y = primitive_part(b);
  if (x.degree() < y.degree()) std::swap(x, y);
  while (!y.is_zero()) {
    IntPoly r = pseudo_divmod(x, y).remainder;
    x = std::move(y);
    y = primitive_part(r);
  }
  return primitive_part(x);
}

IntPoly reduce_coeffs(const IntPoly& f, const Int& m) {
  std::vector<Int> v = f.coeffs();
  for (auto& c : v) c = mod_floor(c, m);
  return IntPoly(std::move(v));
}

IntPoly reduce_mod(const IntPoly& f, const IntPoly& modulus, const Int& m) {
  if (!modulus.is_monic()) throw InputError("reduce_mod: modulus polynomial must be monic");
  const int n = modulus.degree();
  std::vector<Int> r = f.coeffs();
  for (auto& c : r) c = mod_floor(c, m);
  for (int i = f.degree(); i >= n && n >= 0; --i) {
    auto top = static_cast<std::size_t>(i);
    Int c = r[top];
    if (c == 0) continue;
    for (int j = 0; j <= n; ++j) {
      auto k = static_cast<std::size_t>(i - n + j);
      r[k] = mod_floor(r[k] - c * modulus[static_cast<std::size_t>(j)], m);
    }
  }
  if (static_cast<int>(r.size()) > n) r.resize(static_cast<std::size_t>(std::max(n, 0)));
  return IntPoly(std::move(r));
}

IntPoly compose(const IntPoly& f, const IntPoly& g) {
  IntPoly acc;
  for (int i = f.degree(); i >= 0; --i) acc = acc * g + IntPoly::constant(f[static_cast<std::size_t>(i)]);
  return acc;
}

namespace {

// Rational polynomial helpers for the resultant; kept local since nothing
// else needs arithmetic over Q[x].
using QPoly = std::vector<Rat>;

void trim(QPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

QPoly to_q(const IntPoly& f) {
  QPoly q;
  for (const auto& c : f.coeffs()) q.emplace_back(c);
  return q;
}

QPoly q_mod(QPoly a, const QPoly& b) {
  const std::size_t n = b.size() - 1;
  while (a.size() > n && !a.empty()) {
    Rat c = a.back() / b.back();
    std::size_t shift = a.size() - 1 - n;
    for (std::size_t j = 0; j <= n; ++j) a[shift + j] -= c * b[j];
    a.pop_back();
    trim(a);
  }
  return a;
}

Rat q_pow(const Rat& b, long e) {
  Rat r = 1;
  for (long i = 0; i < e; ++i) r *= b;
  return r;
}

}  // namespace

Int resultant(const IntPoly& a, const IntPoly& b) {
  if (a.is_zero() || b.is_zero()) return 0;
  QPoly x = to_q(a);
  QPoly y = to_q(b);
  Rat res = 1;
  while (y.size() > 1) {
    QPoly r = q_mod(x, y);
    if (r.empty()) return 0;
    long dx = static_cast<long>(x.size()) - 1;
    long dy = static_cast<long>(y.size()) - 1;
    long dr = static_cast<long>(r.size()) - 1;
    if ((dx * dy) % 2 != 0) res = -res;
    res *= q_pow(y.back(), dx - dr);
    x = std::move(y);
    y = std::move(r);
  }
  res *= q_pow(y.back(), static_cast<long>(x.size()) - 1);
  res.canonicalize();
  if (res.get_den() != 1) throw ContractViolation("resultant is not integral");
  return res.get_num();
}

Int discriminant(const IntPoly& f) {
  if (f.degree() < 1) throw InputError("discriminant needs degree >= 1");
  const long n = f.degree();
  Int r = resultant(f, derivative(f));
  if ((n * (n - 1) / 2) % 2 != 0) r = -r;
  if (!mpz_divisible_p(r.get_mpz_t(), f.leading().get_mpz_t()))
    throw ContractViolation("discriminant: resultant not divisible by leading coefficient");
  return r / f.leading();
}

unsigned euler_phi(unsigned m) {
  unsigned result = m;
  unsigned x = m;
  for (unsigned p = 2; p * p <= x; ++p) {
    if (x % p != 0) continue;
    while (x % p == 0) x /= p;
    result -= result / p;
  }
  if (x > 1) result -= result / x;
  return result;
}

IntPoly cyclotomic(unsigned m) {
  if (m == 0) throw InputError("cyclotomic index must be positive");
  static std::mutex mu;
  static std::map<unsigned, IntPoly> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(m); it != cache.end()) return it->second;
  }
  IntPoly acc = IntPoly::monomial(1, m) - IntPoly::constant(1);
  for (unsigned d = 1; d < m; ++d) {
    if (m % d != 0) continue;
    auto q = divide_exact(acc, cyclotomic(d));
    if (!q) throw ContractViolation("cyclotomic recursion failed");
    acc = *q;
  }
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(m, acc);
  return acc;
}

std::optional<unsigned> root_of_unity_factor(const IntPoly& f) {
  if (f.degree() < 1) return std::nullopt;
  const auto n = static_cast<unsigned>(f.degree());
  for (unsigned m = 1; m <= 2 * n * n; ++m) {
    if (euler_phi(m) > n) continue;
    if (pseudo_divmod(f, cyclotomic(m)).remainder.is_zero()) return m;
  }
  return std::nullopt;
}

IntPoly mulmod_quotient(const IntPoly& a, const IntPoly& b, const IntPoly& modulus, const Int& m) {
  return reduce_mod(a * b, modulus, m);
}

IntPoly powmod_quotient(const IntPoly& base, const Int& exponent, const IntPoly& modulus_poly,
                        const Int& modulus_int) {
  if (modulus_poly.degree() < 1) throw InputError("powmod_quotient: modulus polynomial needs degree >= 1");
  if (modulus_int < 1) throw InputError("powmod_quotient: modulus must be positive");
  if (exponent < 0) throw InputError("powmod_quotient: negative exponent");
  IntPoly result = reduce_mod(IntPoly::constant(1), modulus_poly, modulus_int);
  IntPoly b = reduce_mod(base, modulus_poly, modulus_int);
  const std::size_t bits = exponent == 0 ? 0 : mpz_sizeinbase(exponent.get_mpz_t(), 2);
  for (std::size_t i = bits; i-- > 0;) {
    result = mulmod_quotient(result, result, modulus_poly, modulus_int);
    if (mpz_tstbit(exponent.get_mpz_t(), i)) result = mulmod_quotient(result, b, modulus_poly, modulus_int);
  }
  return result;
}

}  // namespace toral
