#include "toral/equidist.hpp"

#include <cmath>
#include <set>

#include "toral/errors.hpp"

namespace toral {
namespace {

std::int64_t cell(std::int64_t u, std::int64_t g, std::int64_t m) {
  return static_cast<std::int64_t>(static_cast<__int128>(u) * g / m);
}

Rat rat_pow(const Rat& x, std::size_t e) {
  Rat r = 1;
  for (std::size_t i = 0; i < e; ++i) r *= x;
  return r;
}

}  // namespace

BoxMeasureReport box_counts(const OrbitRecord& O, unsigned g) {
  if (g < 1) throw InputError("box_counts: grid side must be positive");
  if (!O.materialized()) throw InputError("box_counts: orbit points are not materialized");
  const std::size_t n = O.dim();
  std::size_t boxes = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (boxes > (std::size_t{1} << 26) / g) throw InputError("box_counts: too many boxes");
    boxes *= g;
  }
  BoxMeasureReport rep;
  rep.grid = g;
  rep.T = O.T;
  rep.level = O.level;
  rep.counts.assign(boxes, 0);
  const std::int64_t m = O.points.modulus();
  for (std::size_t i = 0; i < O.points.size(); ++i) {
    auto p = O.points[i];
    std::size_t idx = 0;
    for (std::size_t d = 0; d < n; ++d) idx = idx * g + static_cast<std::size_t>(cell(p[d], g, m));
    ++rep.counts[idx];
  }
  const double T = static_cast<double>(O.points.size());
  const double leb = 1.0 / static_cast<double>(boxes);
  for (auto c : rep.counts) rep.max_dev = std::max(rep.max_dev, std::abs(static_cast<double>(c) / T - leb));
  return rep;
}

bool cell_occupancy_check(const OrbitRecord& O) {
  if (O.T < 2) return true;
  if (!O.d_sq || !O.d_exact) throw InputError("cell_occupancy_check: needs an exact d_sq");
  if (!O.materialized()) throw InputError("cell_occupancy_check: orbit points are not materialized");
  const Rat n(static_cast<long>(O.dim()));
  // Smallest G with G^2 d_sq > n.
  Rat ratio = n / *O.d_sq;
  Int G;
  mpz_sqrt(G.get_mpz_t(), Int(ratio.get_num() / ratio.get_den()).get_mpz_t());
  while (Rat(G * G) * *O.d_sq <= n) ++G;
  const std::int64_t m = O.points.modulus();
  if (G > Int(static_cast<long>(m))) G = Int(static_cast<long>(m));  // finer cells than 1/m separate everything
  const std::int64_t g = to_i64(G);
  std::set<std::vector<std::int64_t>> seen;
  std::vector<std::int64_t> key(O.dim());
  for (std::size_t i = 0; i < O.points.size(); ++i) {
    auto p = O.points[i];
    for (std::size_t d = 0; d < O.dim(); ++d) key[d] = cell(p[d], g, m);
    if (!seen.insert(key).second) return false;
  }
  return true;
}

bool packing_bound_check(const OrbitRecord& O) {
  if (O.T < 2 || !O.d_sq) throw InputError("packing_bound_check: needs T >= 2 and d_sq");
  const long double n = static_cast<long double>(O.dim());
  const long double pi = std::acos(-1.0L);
  const long double omega = std::pow(pi, n / 2) / std::tgamma(n / 2 + 1);
  const long double d = std::sqrt(static_cast<long double>(O.d_sq->get_d()));
  const long double lhs = static_cast<long double>(O.T.get_d()) * std::pow(d / 2, n) * omega;
  return lhs <= 1.0L + 1e-12L;
}

bool density_bound_check(const OrbitRecord& O, unsigned g) {
  if (O.T < 2) return true;
  if (!O.d_sq) throw InputError("density_bound_check: needs d_sq");
  const auto rep = box_counts(O, g);
  const std::size_t n = O.dim();
  const Rat rhs = rat_pow(Rat(16 * static_cast<long>(n)), n);
  const Rat scale = rat_pow(*O.d_sq, n) * rat_pow(Rat(static_cast<long>(g) * static_cast<long>(g)), n);
  std::uint64_t worst = 0;
  for (auto c : rep.counts) worst = std::max(worst, c);
  const Int w(static_cast<unsigned long>(worst));
  return Rat(w * w) * scale <= rhs;
}

ConvergenceReport convergence_report(const std::vector<OrbitRecord>& records, unsigned g) {
  if (records.size() < 2) throw InputError("convergence_report: needs at least two records");
  ConvergenceReport rep;
  for (const auto& r : records) rep.rows.push_back(box_counts(r, g));
  rep.last_below_first = rep.rows.back().max_dev < rep.rows.front().max_dev;
  return rep;
}

OrbitScanReport small_orbit_scan(const IntMatrix& A, unsigned max_den, unsigned g) {
  if (max_den < 2) throw InputError("small_orbit_scan: max_den must be at least 2");
  const std::size_t n = A.rows();
  OrbitScanReport rep;
  rep.max_den = max_den;
  rep.grid = g;
  rep.max_period = 0;
  double best_full = 1, best_any = 1;
  bool have_full = false;
  std::size_t boxes = 1;
  for (std::size_t i = 0; i < n; ++i) boxes *= g;
  for (unsigned m = 2; m <= max_den; ++m) {
    std::vector<std::int64_t> u(n, 0);
    while (true) {
      const BruteOrbit bo = orbit_bruteforce(A, TorusPoint(u, m));
      ++rep.orbits;
      if (bo.cycle.T > rep.max_period) rep.max_period = bo.cycle.T;
      const double dev = box_counts(bo.cycle, g).max_dev;
      best_any = std::min(best_any, dev);
      if (bo.cycle.T >= Int(static_cast<unsigned long>(boxes))) {
        have_full = true;
        best_full = std::min(best_full, dev);
      }
      std::size_t d = 0;
      while (d < n && ++u[d] == static_cast<std::int64_t>(m)) u[d++] = 0;
      if (d == n) break;
    }
  }
  rep.min_max_dev = have_full ? best_full : best_any;
  return rep;
}

}  // namespace toral
