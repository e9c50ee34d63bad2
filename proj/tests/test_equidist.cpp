#include <doctest.h>

#include "toral/equidist.hpp"
#include "toral/errors.hpp"

using namespace toral;

namespace {

const IntMatrix cat{{2, 1}, {1, 1}};
const IntPoly catf{1, -3, 1};

OrbitRecord level(unsigned k) { return construct_irreducible(catf, find_split_primes(catf, 1)[0], k); }

// Points of a square lattice with spacing 1/s, given an exact gap.
OrbitRecord lattice(std::int64_t s) {
  OrbitRecord r;
  r.points = PointSet(2, s);
  for (std::int64_t i = 0; i < s; ++i)
    for (std::int64_t j = 0; j < s; ++j) r.points.push_back(std::vector<std::int64_t>{i, j});
  r.base = r.points.point(0);
  r.T = s * s;
  r.d_sq = Rat(1, s * s);
  return r;
}

}  // namespace

TEST_CASE("box counts") {
  auto r = level(1);
  auto one = box_counts(r, 1);
  CHECK(one.counts == std::vector<std::uint64_t>{5});
  CHECK(one.max_dev == 0);

  auto two = box_counts(r, 2);
  // points (1,5),(5,3),(3,4),(4,9),(9,1) over 11: 2u < 11 decides the lower half
  CHECK(two.counts == std::vector<std::uint64_t>{3, 1, 1, 0});

  auto fixed = orbit_bruteforce(cat, TorusPoint({0, 0}, 1)).cycle;
  auto f2 = box_counts(fixed, 2);
  CHECK(f2.counts == std::vector<std::uint64_t>{1, 0, 0, 0});
  CHECK(f2.max_dev == doctest::Approx(0.75));

  OrbitRecord bare = r;
  bare.points = PointSet();
  CHECK_THROWS_AS(box_counts(bare, 2), InputError);
}

TEST_CASE("cell occupancy") {
  for (unsigned k = 1; k <= 3; ++k) CHECK(cell_occupancy_check(level(k)));
  CHECK(cell_occupancy_check(orbit_bruteforce(cat, TorusPoint({0, 0}, 1)).cycle));
  CHECK(cell_occupancy_check(lattice(8)));
  // A diagonal pair at squared gap 1/50: doubling the gap coarsens the cells
  // until both points share one.
  OrbitRecord pair;
  pair.points = PointSet(2, 100);
  pair.points.push_back(std::vector<std::int64_t>{0, 0});
  pair.points.push_back(std::vector<std::int64_t>{10, 10});
  pair.base = pair.points.point(0);
  pair.T = 2;
  pair.d_sq = Rat(1, 50);
  CHECK(cell_occupancy_check(pair));
  pair.d_sq = Rat(1, 25);
  CHECK_FALSE(cell_occupancy_check(pair));
}

TEST_CASE("packing bound") {
  CHECK(packing_bound_check(orbit_bruteforce(cat, TorusPoint({1, 0}, 2)).cycle));
  CHECK(packing_bound_check(level(1)));
  // A lattice with spacing 1/8 has 64 (1/16)^2 pi = pi/4 <= 1.
  auto lat = lattice(8);
  CHECK(packing_bound_check(lat));
  lat.d_sq = Rat(1, 16);  // claims spacing 1/4 for 64 points: 64 pi/64 > 1
  CHECK_FALSE(packing_bound_check(lat));
}

TEST_CASE("density bound") {
  CHECK(density_bound_check(level(1), 2));
  CHECK(density_bound_check(lattice(8), 4));
  auto bad = level(1);
  bad.d_sq = Rat(100);
  CHECK_FALSE(density_bound_check(bad, 1));
}

TEST_CASE("convergence report") {
  std::vector<OrbitRecord> recs;
  for (unsigned k = 1; k <= 4; ++k) recs.push_back(level(k));
  auto rep = convergence_report(recs, 4);
  REQUIRE(rep.rows.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    std::uint64_t s = 0;
    for (auto c : rep.rows[i].counts) s += c;
    CHECK(Int(static_cast<unsigned long>(s)) == recs[i].T);
  }
  CHECK(rep.last_below_first);
  CHECK_THROWS_AS(convergence_report({recs[0]}, 4), InputError);
}

TEST_CASE("non-ergodic orbits stay lumpy") {
  auto rep = small_orbit_scan(IntMatrix{{0, -1}, {1, 0}}, 12, 4);
  CHECK(rep.max_period == 4);
  CHECK(rep.min_max_dev > 0.1);
  // the cat map spreads out already at small denominators
  auto ergodic = small_orbit_scan(cat, 12, 4);
  CHECK(ergodic.max_period > 4);
  CHECK(ergodic.min_max_dev < rep.min_max_dev);
}
