#pragma once

#include <cstdint>
#include <vector>

#include "toral/intlinalg.hpp"
#include "toral/orbits.hpp"

namespace toral {

/// Orbit counts in the g^n half-open boxes [i/g, (i+1)/g), row-major with the
/// first coordinate slowest.
struct BoxMeasureReport {
  unsigned grid = 1;
  std::vector<std::uint64_t> counts;
  Int T;
  double max_dev = 0;  // max |count/T - g^{-n}|
  unsigned level = 0;
};

/// Throws InputError if the record's points are not materialized.
BoxMeasureReport box_counts(const OrbitRecord& O, unsigned g);

/// Every cube of side 1/G with n/G^2 < d_sq holds at most one point, for the
/// smallest such G. Vacuously true for T = 1. Requires an exact d_sq.
bool cell_occupancy_check(const OrbitRecord& O);

/// T (d/2)^n omega_n <= 1 in long double with 1e-12 relative slack.
bool packing_bound_check(const OrbitRecord& O);

/// count <= 4^n n^{n/2} d^{-n} g^{-n} for every box, checked exactly as
/// count^2 d_sq^n g^{2n} <= 16^n n^n.
bool density_bound_check(const OrbitRecord& O, unsigned g);

struct ConvergenceReport {
  std::vector<BoxMeasureReport> rows;
  bool last_below_first = false;  // the only asserted trend
};

/// Needs at least two records.
ConvergenceReport convergence_report(const std::vector<OrbitRecord>& records, unsigned g);

/// Every orbit with denominator 2..max_den of a (typically non-ergodic)
/// matrix, summarized by its longest period and best box deviation.
struct OrbitScanReport {
  unsigned max_den = 0;
  unsigned grid = 1;
  std::size_t orbits = 0;
  Int max_period;
  double min_max_dev = 1;  // over orbits with at least g^n points, else over all
};

OrbitScanReport small_orbit_scan(const IntMatrix& A, unsigned max_den, unsigned g);

}  // namespace toral
