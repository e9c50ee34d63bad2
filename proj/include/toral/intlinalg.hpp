#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include "toral/bigint.hpp"
#include "toral/intpoly.hpp"

namespace toral {

using IntVector = std::vector<Int>;
using RatVector = std::vector<Rat>;

/// Dense row-major matrix over an exact ring (Int or Rat).
template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  Matrix(std::initializer_list<std::initializer_list<long>> rows);
  static Matrix from_rows(const std::vector<std::vector<T>>& rows);
  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<T> row(std::size_t i) const;
  std::vector<T> col(std::size_t j) const;
  Matrix transpose() const;

  Matrix& operator+=(const Matrix& o);
  Matrix& operator-=(const Matrix& o);
  Matrix& operator*=(const T& c);

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, const T& c) { return a *= c; }
  friend Matrix operator*(const Matrix& a, const Matrix& b) { return multiply(a, b); }
  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  static Matrix multiply(const Matrix& a, const Matrix& b);

  std::string to_string() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using IntMatrix = Matrix<Int>;
using RatMatrix = Matrix<Rat>;

/// Row vector times matrix.
IntVector row_times(const IntVector& v, const IntMatrix& A);
/// Matrix times column vector.
IntVector times_col(const IntMatrix& A, const IntVector& v);
IntMatrix matrix_power(const IntMatrix& A, unsigned long e);
IntMatrix block_diagonal(const std::vector<IntMatrix>& blocks);
/// Evaluates p(A) by Horner.
IntMatrix poly_eval(const IntPoly& p, const IntMatrix& A);

RatMatrix to_rat(const IntMatrix& A);

/// Fraction-free (Bareiss) determinant.
Int determinant(const IntMatrix& A);
std::size_t rank(const RatMatrix& A);
/// Basis of {x : A x = 0}.
std::vector<RatVector> nullspace(const RatMatrix& A);
/// Basis of {v : v A = 0}, each vector scaled to a primitive integer vector.
std::vector<IntVector> left_kernel(const IntMatrix& A);
std::optional<RatMatrix> inverse(const RatMatrix& A);
/// det(A) * A^{-1}, integral for integral A.
IntMatrix adjugate(const IntMatrix& A);
/// Scales a rational vector by the lcm of denominators and divides out the
/// content, giving a primitive integer vector.
IntVector clear_denominators(const RatVector& v);

/// det(xI - A) by Faddeev-LeVerrier; every division is exact over Z.
IntPoly char_poly(const IntMatrix& A);

/// Superdiagonal of ones and last row (c_0, ..., c_{n-1}) with
/// f = x^n - c_{n-1} x^{n-1} - ... - c_0. Requires f monic, deg >= 1.
IntMatrix companion(const IntPoly& f);

/// Rows e, eA, ..., eA^{n-1}. Throws InputError for e = 0.
IntMatrix krylov(const IntVector& e, const IntMatrix& A);
/// Rows v, vA, ..., vA^{count-1}.
IntMatrix krylov_rows(const IntVector& v, const IntMatrix& A, std::size_t count);

/// Least-degree monic annihilator of A over Q (integral, monic).
IntPoly minimal_poly(const IntMatrix& A);

struct ErgodicityVerdict {
  bool ergodic = false;
  bool singular = false;
  std::optional<unsigned> unity_witness;  // m with Phi_m | charpoly
  std::string reason;
};

/// Ergodic iff det A != 0 and no eigenvalue is a root of unity.
ErgodicityVerdict is_ergodic(const IntMatrix& A);

/// One cyclic summand: rows generator * A^j, j < deg(annihilator).
struct CyclicBlock {
  IntVector generator;
  IntPoly irreducible;  // g
  unsigned exponent = 1;  // annihilator = g^exponent
  IntPoly annihilator;
  IntMatrix block;  // companion(annihilator)
};

/// P * A = J * P with J = diag(blocks), det P != 0, prod annihilators = charpoly.
struct PrimaryDecomposition {
  IntMatrix P;
  IntMatrix J;
  std::vector<CyclicBlock> blocks;
};

PrimaryDecomposition primary_decomposition(const IntMatrix& A);

/// Throws ContractViolation unless every PrimaryDecomposition invariant holds.
void check_decomposition(const IntMatrix& A, const PrimaryDecomposition& dec);

/// Sum of squared entries.
Int frobenius_norm_sq(const IntMatrix& M);

}  // namespace toral
