#include "toral/intlinalg.hpp"

#include <algorithm>
#include <sstream>

#include "toral/errors.hpp"

namespace toral {

template <typename T>
Matrix<T>::Matrix(std::initializer_list<std::initializer_list<long>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw InputError("ragged matrix literal");
    for (long v : r) data_.emplace_back(v);
  }
}

template <typename T>
Matrix<T> Matrix<T>::from_rows(const std::vector<std::vector<T>>& rows) {
  Matrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols_) throw InputError("ragged matrix rows");
    for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

template <typename T>
Matrix<T> Matrix<T>::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

template <typename T>
std::vector<T> Matrix<T>::row(std::size_t i) const {
  return std::vector<T>(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                        data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
}

template <typename T>
std::vector<T> Matrix<T>::col(std::size_t j) const {
  std::vector<T> c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

template <typename T>
Matrix<T> Matrix<T>::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

template <typename T>
Matrix<T>& Matrix<T>::operator+=(const Matrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw InputError("matrix shape mismatch in +");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

template <typename T>
Matrix<T>& Matrix<T>::operator-=(const Matrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw InputError("matrix shape mismatch in -");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

template <typename T>
Matrix<T>& Matrix<T>::operator*=(const T& c) {
  for (auto& v : data_) v *= c;
  return *this;
}

template <typename T>
Matrix<T> Matrix<T>::multiply(const Matrix& a, const Matrix& b) {
  if (a.cols_ != b.rows_) throw InputError("matrix shape mismatch in *");
  Matrix r(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const T& aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) r(i, j) += aik * b(k, j);
    }
  return r;
}

template <typename T>
std::string Matrix<T>::to_string() const {
  std::ostringstream out;
  out << "[";
  for (std::size_t i = 0; i < rows_; ++i) {
    out << (i ? ", [" : "[");
    for (std::size_t j = 0; j < cols_; ++j) out << (j ? ", " : "") << (*this)(i, j).get_str();
    out << "]";
  }
  out << "]";
  return out.str();
}

template class Matrix<Int>;
template class Matrix<Rat>;

IntVector row_times(const IntVector& v, const IntMatrix& A) {
  if (v.size() != A.rows()) throw InputError("row_times: shape mismatch");
  IntVector r(A.cols());
  for (std::size_t i = 0; i < A.rows(); ++i) {
    if (v[i] == 0) continue;
    for (std::size_t j = 0; j < A.cols(); ++j) r[j] += v[i] * A(i, j);
  }
  return r;
}

IntVector times_col(const IntMatrix& A, const IntVector& v) {
  if (v.size() != A.cols()) throw InputError("times_col: shape mismatch");
  IntVector r(A.rows());
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) r[i] += A(i, j) * v[j];
  return r;
}

IntMatrix matrix_power(const IntMatrix& A, unsigned long e) {
  IntMatrix result = IntMatrix::identity(A.rows());
  IntMatrix base = A;
  while (e) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return result;
}

IntMatrix block_diagonal(const std::vector<IntMatrix>& blocks) {
  std::size_t n = 0;
  for (const auto& b : blocks) n += b.rows();
  IntMatrix r(n, n);
  std::size_t off = 0;
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) r(off + i, off + j) = b(i, j);
    off += b.rows();
  }
  return r;
}

IntMatrix poly_eval(const IntPoly& p, const IntMatrix& A) {
  const std::size_t n = A.rows();
  IntMatrix acc(n, n);
  for (int i = p.degree(); i >= 0; --i) {
    acc = acc * A;
    const Int& c = p[static_cast<std::size_t>(i)];
    for (std::size_t d = 0; d < n; ++d) acc(d, d) += c;
  }
  return acc;
}

RatMatrix to_rat(const IntMatrix& A) {
  RatMatrix r(A.rows(), A.cols());
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) r(i, j) = Rat(A(i, j));
  return r;
}

Int determinant(const IntMatrix& A) {
  if (!A.is_square()) throw InputError("determinant of a non-square matrix");
  const std::size_t n = A.rows();
  if (n == 0) return 1;
  IntMatrix M = A;
  Int sign = 1;
  Int prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (M(k, k) == 0) {
      std::size_t piv = k + 1;
      while (piv < n && M(piv, k) == 0) ++piv;
      if (piv == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(M(k, j), M(piv, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        M(i, j) = (M(i, j) * M(k, k) - M(i, k) * M(k, j));
        mpz_divexact(M(i, j).get_mpz_t(), M(i, j).get_mpz_t(), prev.get_mpz_t());
      }
      M(i, k) = 0;
    }
    prev = M(k, k);
  }
  return sign * M(n - 1, n - 1);
}

namespace {

// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(RatMatrix& M) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < M.cols() && r < M.rows(); ++c) {
    std::size_t piv = r;
    while (piv < M.rows() && M(piv, c) == 0) ++piv;
    if (piv == M.rows()) continue;
    if (piv != r)
      for (std::size_t j = 0; j < M.cols(); ++j) std::swap(M(piv, j), M(r, j));
    Rat inv = 1 / M(r, c);
    for (std::size_t j = 0; j < M.cols(); ++j) M(r, j) *= inv;
    for (std::size_t i = 0; i < M.rows(); ++i) {
      if (i == r || M(i, c) == 0) continue;
      Rat f = M(i, c);
      for (std::size_t j = 0; j < M.cols(); ++j) M(i, j) -= f * M(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

std::size_t rank(const RatMatrix& A) {
  RatMatrix M = A;
  return rref(M).size();
}

std::vector<RatVector> nullspace(const RatMatrix& A) {
  RatMatrix M = A;
  auto pivots = rref(M);
  std::vector<int> where(A.cols(), -1);
  for (std::size_t i = 0; i < pivots.size(); ++i) where[pivots[i]] = static_cast<int>(i);
  std::vector<RatVector> basis;
  for (std::size_t free = 0; free < A.cols(); ++free) {
    if (where[free] != -1) continue;
    RatVector v(A.cols(), Rat(0));
    v[free] = 1;
    for (std::size_t c = 0; c < A.cols(); ++c)
      if (where[c] != -1) v[c] = -M(static_cast<std::size_t>(where[c]), free);
    basis.push_back(std::move(v));
  }
  return basis;
}

IntVector clear_denominators(const RatVector& v) {
  Int den = 1;
  for (const auto& x : v) den = lcm(den, x.get_den());
  IntVector r;
  Int g = 0;
  for (const auto& x : v) {
    Int e = x.get_num() * (den / x.get_den());
    g = gcd(g, e);
    r.push_back(e);
  }
  if (g > 1)
    for (auto& e : r) e /= g;
  return r;
}

std::vector<IntVector> left_kernel(const IntMatrix& A) {
  std::vector<IntVector> out;
  for (const auto& v : nullspace(to_rat(A.transpose()))) out.push_back(clear_denominators(v));
  return out;
}

std::optional<RatMatrix> inverse(const RatMatrix& A) {
  if (!A.is_square()) throw InputError("inverse of a non-square matrix");
  const std::size_t n = A.rows();
  RatMatrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = A(i, j);
    aug(i, n + i) = 1;
  }
  auto pivots = rref(aug);
  if (pivots.size() < n || pivots[n - 1] != n - 1) return std::nullopt;
  RatMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
  return inv;
}

IntMatrix adjugate(const IntMatrix& A) {
  const Int det = determinant(A);
  if (det == 0) throw InputError("adjugate: singular matrix");
  RatMatrix inv = *inverse(to_rat(A));
  IntMatrix adj(A.rows(), A.cols());
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) {
      Rat v = inv(i, j) * det;
      v.canonicalize();
      if (v.get_den() != 1) throw ContractViolation("adjugate is not integral");
      adj(i, j) = v.get_num();
    }
  return adj;
}

IntPoly char_poly(const IntMatrix& A) {
  if (!A.is_square()) throw InputError("char_poly of a non-square matrix");
  const std::size_t n = A.rows();
  std::vector<Int> c(n + 1);
  c[n] = 1;
  IntMatrix M(n, n);
  for (std::size_t k = 1; k <= n; ++k) {
    M = A * M;
    for (std::size_t d = 0; d < n; ++d) M(d, d) += c[n - k + 1];
    IntMatrix AM = A * M;
    Int tr = 0;
    for (std::size_t d = 0; d < n; ++d) tr += AM(d, d);
    if (!mpz_divisible_ui_p(tr.get_mpz_t(), k)) throw ContractViolation("Faddeev-LeVerrier: inexact division");
    c[n - k] = -tr / static_cast<unsigned long>(k);
  }
  return IntPoly(std::move(c));
}

IntMatrix companion(const IntPoly& f) {
  if (f.degree() < 1) throw InputError("companion: needs deg f >= 1");
  if (!f.is_monic()) throw InputError("companion: polynomial must be monic");
  const auto n = static_cast<std::size_t>(f.degree());
  IntMatrix B(n, n);
  for (std::size_t i = 0; i + 1 < n; ++i) B(i, i + 1) = 1;
  for (std::size_t j = 0; j < n; ++j) B(n - 1, j) = f.recurrence_coeff(j);
  return B;
}

IntMatrix krylov_rows(const IntVector& v, const IntMatrix& A, std::size_t count) {
  IntMatrix P(count, v.size());
  IntVector cur = v;
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = 0; j < v.size(); ++j) P(i, j) = cur[j];
    if (i + 1 < count) cur = row_times(cur, A);
  }
  return P;
}

IntMatrix krylov(const IntVector& e, const IntMatrix& A) {
  if (!A.is_square() || e.size() != A.rows()) throw InputError("krylov: shape mismatch");
  if (std::all_of(e.begin(), e.end(), [](const Int& x) { return x == 0; }))
    throw InputError("krylov: zero vector");
  return krylov_rows(e, A, A.rows());
}

IntPoly minimal_poly(const IntMatrix& A) {
  if (!A.is_square()) throw InputError("minimal_poly of a non-square matrix");
  const std::size_t n = A.rows();
  if (n == 0) return IntPoly::constant(1);
  std::vector<IntMatrix> powers = {IntMatrix::identity(n)};
  for (std::size_t d = 1; d <= n; ++d) {
    powers.push_back(powers.back() * A);
    RatMatrix cols(n * n, d + 1);
    for (std::size_t k = 0; k <= d; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) cols(i * n + j, k) = Rat(powers[k](i, j));
    auto ns = nullspace(cols);
    if (ns.empty()) continue;
    RatVector v = ns.front();
    Rat lead = v[d];
    std::vector<Int> coeffs;
    for (auto& x : v) {
      x /= lead;
      x.canonicalize();
      if (x.get_den() != 1) throw ContractViolation("minimal polynomial is not integral");
      coeffs.push_back(x.get_num());
    }
    return IntPoly(std::move(coeffs));
  }
  throw ContractViolation("minimal_poly: no annihilator up to degree n");
}

ErgodicityVerdict is_ergodic(const IntMatrix& A) {
  if (!A.is_square() || A.rows() == 0) throw InputError("is_ergodic: needs a non-empty square matrix");
  ErgodicityVerdict v;
  v.singular = determinant(A) == 0;
  v.unity_witness = root_of_unity_factor(char_poly(A));
  if (v.singular) {
    v.reason = "det(A) = 0: not an endomorphism";
  } else if (v.unity_witness) {
    v.reason = "characteristic polynomial has cyclotomic factor Phi_" + std::to_string(*v.unity_witness);
  } else {
    v.ergodic = true;
    v.reason = "det(A) != 0 and no eigenvalue is a root of unity";
  }
  return v;
}

PrimaryDecomposition primary_decomposition(const IntMatrix& A) {
  if (!A.is_square() || A.rows() == 0) throw InputError("primary_decomposition: needs a non-empty square matrix");
  const std::size_t n = A.rows();
  const IntPoly f = char_poly(A);
  PrimaryDecomposition dec;
  std::vector<IntMatrix> P_parts;
  for (const auto& [g, alpha] : factor_rational(f)) {
    const auto dg = static_cast<std::size_t>(g.degree());
    const auto a = static_cast<unsigned>(alpha);
    const IntMatrix G = poly_eval(g, A);
    std::vector<IntMatrix> Gp = {IntMatrix::identity(n)};
    for (unsigned j = 1; j <= a; ++j) Gp.push_back(Gp.back() * G);
    std::vector<std::size_t> kdim(a + 1);
    for (unsigned j = 0; j <= a; ++j) kdim[j] = n - rank(to_rat(Gp[j]));
    if (kdim[a] != dg * a) throw ContractViolation("primary component has the wrong dimension");
    // at_least[e] = number of cyclic summands with exponent >= e.
    std::vector<std::size_t> at_least(a + 2, 0);
    for (unsigned e = 1; e <= a; ++e) at_least[e] = (kdim[e] - kdim[e - 1]) / dg;

    // Span of the socle parts u = v g(A)^{e-1} of the generators chosen so far.
    std::vector<IntVector> socle;
    for (unsigned e = a; e >= 1; --e) {
      std::size_t need = at_least[e] - at_least[e + 1];
      if (need == 0) continue;
      std::vector<IntVector> candidates;
      for (std::size_t j = 0; j < n; ++j) {
        IntVector ej(n);
        ej[j] = 1;
        IntVector img = row_times(ej, Gp[e]);
        if (std::all_of(img.begin(), img.end(), [](const Int& x) { return x == 0; })) candidates.push_back(ej);
      }
      for (auto& v : left_kernel(Gp[e])) candidates.push_back(std::move(v));
      for (const auto& v : candidates) {
        if (need == 0) break;
        IntVector u = row_times(v, Gp[e - 1]);
        if (std::all_of(u.begin(), u.end(), [](const Int& x) { return x == 0; })) continue;
        std::vector<IntVector> trial = socle;
        trial.push_back(u);
        RatMatrix S(trial.size(), n);
        for (std::size_t i = 0; i < trial.size(); ++i)
          for (std::size_t j = 0; j < n; ++j) S(i, j) = Rat(trial[i][j]);
        if (rank(S) != trial.size()) continue;
        IntMatrix Zu = krylov_rows(u, A, dg);
        for (std::size_t i = 0; i < dg; ++i) socle.push_back(Zu.row(i));
        CyclicBlock blk;
        blk.generator = v;
        blk.irreducible = g;
        blk.exponent = e;
        blk.annihilator = IntPoly::constant(1);
        for (unsigned i = 0; i < e; ++i) blk.annihilator *= g;
        blk.block = companion(blk.annihilator);
        P_parts.push_back(krylov_rows(v, A, dg * e));
        dec.blocks.push_back(std::move(blk));
        --need;
      }
      if (need != 0) throw ContractViolation("primary_decomposition: generator search exhausted");
    }
  }
  dec.P = IntMatrix(n, n);
  std::size_t r = 0;
  std::vector<IntMatrix> Js;
  for (std::size_t b = 0; b < P_parts.size(); ++b) {
    for (std::size_t i = 0; i < P_parts[b].rows(); ++i, ++r)
      for (std::size_t j = 0; j < n; ++j) dec.P(r, j) = P_parts[b](i, j);
    Js.push_back(dec.blocks[b].block);
  }
  dec.J = block_diagonal(Js);
  check_decomposition(A, dec);
  return dec;
}

void check_decomposition(const IntMatrix& A, const PrimaryDecomposition& dec) {
  if (determinant(dec.P) == 0) throw ContractViolation("decomposition: P is singular");
  if (dec.P * A != dec.J * dec.P) throw ContractViolation("decomposition: P*A != J*P");
  IntPoly prod = IntPoly::constant(1);
  for (const auto& b : dec.blocks) {
    prod *= b.annihilator;
    if (char_poly(b.block) != b.annihilator || minimal_poly(b.block) != b.annihilator)
      throw ContractViolation("decomposition: block polynomial mismatch");
  }
  if (prod != char_poly(A)) throw ContractViolation("decomposition: product of blocks != charpoly");
}

Int frobenius_norm_sq(const IntMatrix& M) {
  Int s = 0;
  for (std::size_t i = 0; i < M.rows(); ++i)
    for (std::size_t j = 0; j < M.cols(); ++j) s += M(i, j) * M(i, j);
  return s;
}

}  // namespace toral
