#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "toral/bigint.hpp"
#include "toral/intlinalg.hpp"

namespace toral {

/// Rational point u/m of the n-torus, 0 <= u_i < m. The denominator is the
/// working modulus and is not forced to be reduced.
struct TorusPoint {
  std::vector<std::int64_t> u;
  std::int64_t m = 1;

  TorusPoint() = default;
  TorusPoint(std::vector<std::int64_t> coords, std::int64_t denom);

  std::size_t dim() const { return u.size(); }
  /// Same point over the smallest denominator.
  TorusPoint reduced() const;
  /// Same point over denominator m * factor.
  TorusPoint rescaled(std::int64_t factor) const;

  friend bool operator==(const TorusPoint&, const TorusPoint&) = default;
};

/// Denominators above this bound are rejected by the fixed-width orbit engine.
inline constexpr std::int64_t kMaxDenominator = std::int64_t{1} << 60;

/// Builds a canonical point from rationals over their common denominator.
TorusPoint torus_point(const std::vector<Rat>& coords);

/// Exact squared torus distance sum_i min(d_i, m - d_i)^2 / m^2. Points over
/// different denominators are compared over the lcm.
Rat torus_dist_sq(const TorusPoint& x, const TorusPoint& y);

/// Orbit points over a shared denominator, stored flat.
class PointSet {
 public:
  PointSet() = default;
  PointSet(std::size_t dim, std::int64_t m) : dim_(dim), m_(m) {}

  std::size_t dim() const { return dim_; }
  std::int64_t modulus() const { return m_; }
  std::size_t size() const { return dim_ ? coords_.size() / dim_ : 0; }
  bool empty() const { return coords_.empty(); }

  void push_back(std::span<const std::int64_t> u);
  void push_back(const TorusPoint& p) { push_back(std::span<const std::int64_t>(p.u)); }
  std::span<const std::int64_t> operator[](std::size_t i) const {
    return {coords_.data() + i * dim_, dim_};
  }
  TorusPoint point(std::size_t i) const;
  void reserve(std::size_t n) { coords_.reserve(n * dim_); }

 private:
  std::size_t dim_ = 0;
  std::int64_t m_ = 1;
  std::vector<std::int64_t> coords_;
};

/// Squared distance in units of 1/m (numerator over m^2).
unsigned __int128 dist_sq_units(std::span<const std::int64_t> a, std::span<const std::int64_t> b, std::int64_t m);

inline constexpr std::size_t kAllPairsThreshold = 20'000;

struct MinGapOptions {
  /// Grid cells per axis for the bucketed search; derived from the point
  /// count when unset. Affects speed only.
  std::optional<std::int64_t> cells_per_axis;
  bool force_bucketing = false;
  unsigned jobs = 1;
};

/// Exact minimum squared distance over pairs of distinct indices. Duplicate
/// points give 0. Throws InputError for fewer than two points.
Rat min_gap(const PointSet& pts, const MinGapOptions& opt = {});

/// Integer matrix reduced mod m, applied to points in fixed width.
class ModMatrix {
 public:
  ModMatrix(const IntMatrix& A, std::int64_t m);
  std::int64_t modulus() const { return m_; }
  std::size_t dim() const { return n_; }
  void apply(std::span<const std::int64_t> in, std::span<std::int64_t> out) const;
  TorusPoint apply(const TorusPoint& x) const;
  ModMatrix operator*(const ModMatrix& o) const;
  ModMatrix pow(const Int& e) const;

 private:
  ModMatrix(std::size_t n, std::int64_t m) : n_(n), m_(m), a_(n * n, 0) {}
  std::size_t n_;
  std::int64_t m_;
  std::vector<std::int64_t> a_;
};

}  // namespace toral
