#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include "toral/bigint.hpp"

namespace toral {

/// Dense integer polynomial, constant term first. The zero polynomial has
/// no stored coefficients and degree -1.
///
/// Coefficients are stored in the ordinary sense (f = sum a_i x^i). The
/// recurrence convention f(x) = x^n - c_{n-1}x^{n-1} - ... - c_0 used by the
/// dynamics code is obtained through recurrence_coeff(), so c_i = -a_i.
class IntPoly {
 public:
  IntPoly() = default;
  explicit IntPoly(std::vector<Int> coeffs);
  IntPoly(std::initializer_list<long> coeffs);

  static IntPoly constant(const Int& c);
  static IntPoly monomial(const Int& c, std::size_t k);
  static IntPoly x() { return monomial(1, 1); }
  /// Builds x^n - c_{n-1}x^{n-1} - ... - c_0 from (c_0, ..., c_{n-1}).
  static IntPoly from_recurrence(const std::vector<Int>& c);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  bool is_constant() const { return coeffs_.size() <= 1; }
  bool is_monic() const { return !coeffs_.empty() && coeffs_.back() == 1; }

  /// Coefficient of x^i; zero past the degree.
  const Int& operator[](std::size_t i) const;
  const Int& leading() const;
  const std::vector<Int>& coeffs() const { return coeffs_; }

  /// c_i in the recurrence convention (requires monic).
  Int recurrence_coeff(std::size_t i) const;
  std::vector<Int> recurrence_coeffs() const;

  Int eval(const Int& x) const;
  Int eval_mod(const Int& x, const Int& m) const;

  std::string to_string(char var = 'x') const;

  IntPoly operator-() const;
  IntPoly& operator+=(const IntPoly& o);
  IntPoly& operator-=(const IntPoly& o);
  IntPoly& operator*=(const IntPoly& o);
  IntPoly& operator*=(const Int& c);

  friend IntPoly operator+(IntPoly a, const IntPoly& b) { return a += b; }
  friend IntPoly operator-(IntPoly a, const IntPoly& b) { return a -= b; }
  friend IntPoly operator*(IntPoly a, const IntPoly& b) { return a *= b; }
  friend IntPoly operator*(IntPoly a, const Int& c) { return a *= c; }
  friend IntPoly operator*(const Int& c, IntPoly a) { return a *= c; }
  friend bool operator==(const IntPoly& a, const IntPoly& b) { return a.coeffs_ == b.coeffs_; }
  friend bool operator!=(const IntPoly& a, const IntPoly& b) { return !(a == b); }

 private:
  void normalize();
  std::vector<Int> coeffs_;
};

/// Total order used to sort factor lists deterministically.
bool poly_less(const IntPoly& a, const IntPoly& b);

struct PolyDivMod {
  IntPoly quotient;
  IntPoly remainder;
};

/// lc(b)^(deg a - deg b + 1) * a = q*b + r with deg r < deg b.
/// For monic b this is ordinary long division.
PolyDivMod pseudo_divmod(const IntPoly& a, const IntPoly& b);

/// q with a = q*b over Z, or nullopt if b does not divide a in Z[x].
std::optional<IntPoly> divide_exact(const IntPoly& a, const IntPoly& b);

IntPoly derivative(const IntPoly& f);
Int content(const IntPoly& f);
/// f / content(f), normalized to a positive leading coefficient.
IntPoly primitive_part(const IntPoly& f);
/// gcd over Q, returned as a primitive integer polynomial with positive
/// leading coefficient. gcd(0, 0) = 0.
IntPoly gcd(const IntPoly& a, const IntPoly& b);

/// Reduces coefficients into [0, m).
IntPoly reduce_coeffs(const IntPoly& f, const Int& m);
/// Reduces f modulo (m, modulus) with modulus monic; coefficients in [0, m).
IntPoly reduce_mod(const IntPoly& f, const IntPoly& modulus, const Int& m);
/// Composition f(g(x)).
IntPoly compose(const IntPoly& f, const IntPoly& g);

Int resultant(const IntPoly& a, const IntPoly& b);
/// (-1)^{n(n-1)/2} Res(f, f') / lc(f). Requires deg f >= 1.
Int discriminant(const IntPoly& f);

/// m-th cyclotomic polynomial.
IntPoly cyclotomic(unsigned m);
unsigned euler_phi(unsigned m);
/// Smallest m such that the m-th cyclotomic polynomial divides f over Q,
/// or nullopt. Enumerates m = 1..2n^2.
std::optional<unsigned> root_of_unity_factor(const IntPoly& f);

/// base^exponent mod (modulus_int, modulus_poly); coefficients in [0, modulus_int).
IntPoly powmod_quotient(const IntPoly& base, const Int& exponent, const IntPoly& modulus_poly,
                        const Int& modulus_int);
/// a*b mod (m, modulus) for already-reduced operands.
IntPoly mulmod_quotient(const IntPoly& a, const IntPoly& b, const IntPoly& modulus, const Int& m);

struct PolyFactor {
  IntPoly poly;
  int multiplicity = 1;
  friend bool operator==(const PolyFactor&, const PolyFactor&) = default;
};

inline constexpr int kMaxFactorDegree = 8;

/// Factorization over Q into primitive irreducible integer polynomials with
/// positive leading coefficient, sorted by (degree desc, coefficients).
/// The product of factors^multiplicity equals f up to its content.
/// Throws InputError for f = 0 or deg f > kMaxFactorDegree.
std::vector<PolyFactor> factor_rational(const IntPoly& f);
bool is_irreducible(const IntPoly& f);

}  // namespace toral
