#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "toral/errors.hpp"
#include "toral/orbits.hpp"

using namespace toral;

namespace {

const IntMatrix cat{{2, 1}, {1, 1}};
const IntPoly catf{1, -3, 1};

oracle::ZMat zmat(const IntMatrix& A) {
  oracle::ZMat M(A.rows(), std::vector<long>(A.cols()));
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) M[i][j] = A(i, j).get_si();
  return M;
}

oracle::QVec qvec(const TorusPoint& x) {
  oracle::QVec v;
  for (auto u : x.u) v.push_back(make_rat(Int(static_cast<long>(u)), Int(static_cast<long>(x.m))));
  return v;
}

std::vector<oracle::QVec> qpoints(const OrbitRecord& r) {
  std::vector<oracle::QVec> out;
  for (std::size_t i = 0; i < r.points.size(); ++i) out.push_back(qvec(r.points.point(i)));
  return out;
}

PointSet pointset(std::int64_t m, std::initializer_list<std::vector<std::int64_t>> pts) {
  PointSet s(pts.begin()->size(), m);
  for (const auto& p : pts) s.push_back(p);
  return s;
}

}  // namespace

TEST_CASE("torus distance") {
  CHECK(torus_dist_sq(TorusPoint({1, 5}, 11), TorusPoint({3, 4}, 11)) == Rat(5, 121));
  CHECK(torus_dist_sq(TorusPoint({1, 5}, 11), TorusPoint({1, 5}, 11)) == 0);
  CHECK(torus_dist_sq(TorusPoint({0, 0}, 2), TorusPoint({1, 1}, 2)) == Rat(1, 2));
  // mixed denominators compare over the lcm
  CHECK(torus_dist_sq(TorusPoint({1}, 2), TorusPoint({1}, 3)) == Rat(1, 36));
  CHECK(TorusPoint({-1, 13}, 11).u == std::vector<std::int64_t>{10, 2});
  CHECK(TorusPoint({2, 4}, 6).reduced() == TorusPoint({1, 2}, 3));
  CHECK(torus_point({Rat(1, 2), Rat(-1, 3)}) == TorusPoint({3, 4}, 6));
  CHECK_THROWS_AS(TorusPoint({1}, 0), InputError);
}

TEST_CASE("min_gap") {
  const auto five = pointset(11, {{1, 5}, {5, 3}, {3, 4}, {4, 9}, {9, 1}});
  CHECK(min_gap(five) == Rat(5, 121));
  MinGapOptions forced;
  forced.force_bucketing = true;
  CHECK(min_gap(five, forced) == Rat(5, 121));
  CHECK(min_gap(pointset(2, {{0, 0}, {1, 1}})) == Rat(1, 2));
  CHECK(min_gap(pointset(11, {{1, 5}, {1, 5}})) == 0);
  CHECK_THROWS_AS(min_gap(pointset(11, {{1, 5}})), InputError);
}

TEST_CASE("property: bucketed and all-pairs gaps agree") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + trial % 3;
    const std::int64_t m = 50 + static_cast<std::int64_t>(rng() % 5000);
    PointSet s(n, m);
    const std::size_t N = 2 + rng() % 400;
    std::vector<std::int64_t> p(n);
    for (std::size_t i = 0; i < N; ++i) {
      for (auto& x : p) x = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(m));
      s.push_back(p);
    }
    MinGapOptions b;
    b.force_bucketing = true;
    MinGapOptions j;
    j.jobs = 3;
    const Rat ref = min_gap(s);
    CHECK(min_gap(s, b) == ref);
    CHECK(min_gap(s, j) == ref);
    for (std::int64_t g : {1, 2, 7, 64}) {
      b.cells_per_axis = g;
      CHECK(min_gap(s, b) == ref);
    }
  }
}

TEST_CASE("brute-force orbits") {
  auto a = orbit_bruteforce(cat, TorusPoint({1, 0}, 2));
  CHECK(a.preperiod == 0);
  CHECK(a.cycle.T == 3);
  CHECK(a.cycle.d_sq == Rat(1, 4));
  CHECK(a.cycle.metric_exact() == Rat(3, 4));

  auto fixed = orbit_bruteforce(cat, TorusPoint({0, 0}, 1));
  CHECK(fixed.cycle.T == 1);
  CHECK_FALSE(fixed.cycle.d_sq.has_value());

  auto pre = orbit_bruteforce(IntMatrix{{2, 0}, {0, 3}}, TorusPoint({1, 0}, 2));
  CHECK(pre.preperiod == 1);
  CHECK(pre.cycle.T == 1);
  CHECK(pre.cycle.base == TorusPoint({0, 0}, 2));

  CHECK_THROWS_AS(orbit_bruteforce(cat, TorusPoint({1, 0}, 1000), 10), CapExceeded);
}

TEST_CASE("eigen points and wedge invariant") {
  CHECK(eigen_point(catf, 11, 1, 5) == TorusPoint({1, 5}, 11));
  CHECK(eigen_point(catf, 11, 1, 9) == TorusPoint({1, 9}, 11));
  CHECK(eigen_point(IntPoly{-2, 1}, 5, 2, 2) == TorusPoint({1}, 25));
  CHECK(eigen_point(catf, 11, 2, 38) == TorusPoint({1, 38}, 121));
  CHECK_THROWS_AS(eigen_point(catf, 11, 2, 5), InputError);  // 5 is not a root mod 121

  const IntMatrix B = companion(catf);
  CHECK(wedge_invariant({Int(1), Int(5)}, B) == -11);
  CHECK(wedge_invariant({Int(0), Int(0)}, B) == 0);
  CHECK(wedge_invariant({Int(3)}, IntMatrix{{7}}) == 3);
  CHECK(wedge_invariant({Int(4), Int(-2)}, B) == -44);
}

TEST_CASE("irreducible construction") {
  const auto cert = find_split_primes(catf, 1)[0];
  auto r1 = construct_irreducible(catf, cert, 1);
  CHECK(r1.T == 5);
  CHECK(r1.base == TorusPoint({1, 5}, 11));
  CHECK(r1.d_sq == Rat(5, 121));
  CHECK(r1.metric_exact() == Rat(25, 121));
  CHECK(r1.points.size() == 5);

  // The orbit equals the one found by rational iteration.
  auto oc = oracle::orbit(zmat(companion(catf)), qvec(r1.base));
  CHECK(oc.points == qpoints(r1));

  auto r2 = construct_irreducible(catf, cert, 2);
  CHECK(r2.T == 55);
  CHECK(r2.prime_data[0].root == 38);

  auto lin = construct_irreducible(IntPoly{-2, 1}, SplitPrimeCert{5, {2}, 1, -2}, 2);
  CHECK(lin.base == TorusPoint({1}, 25));
  CHECK(lin.T == 20);
  CHECK(lin.d_sq == Rat(1, 625));

  CHECK_THROWS_AS(construct_irreducible(IntPoly{1, 0, 1}, SplitPrimeCert{5, {2, 3}, -4, 1}, 1), NonErgodicError);
  CHECK_THROWS_AS(construct_irreducible(IntPoly{2, -3, 1}, SplitPrimeCert{5, {1, 2}, 1, 2}, 1), InputError);
}

TEST_CASE("distance certificate") {
  const auto cert = find_split_primes(catf, 1)[0];
  const IntMatrix B = companion(catf);
  for (unsigned k = 1; k <= 3; ++k) {
    auto rec = construct_irreducible(catf, cert, k);
    auto dc = certify_distance_bound(rec, B, 11, k);
    CHECK(dc.pairs_checked > 0);
    CHECK(dc.bound_holds);
    CHECK(dc.frob_product == frobenius_norm_sq(B));
  }
  // A corrupted gap below the wedge bound is caught.
  auto rec = construct_irreducible(catf, cert, 1);
  rec.d_sq = Rat(1, 100000);
  CHECK_THROWS_AS(certify_distance_bound(rec, B, 11, 1), ContractViolation);
}

TEST_CASE("period certificates") {
  CHECK(certify_period(cat, TorusPoint({1, 0}, 2), 3));
  CHECK_FALSE(certify_period(cat, TorusPoint({1, 0}, 2), 6));
  CHECK_FALSE(certify_period(cat, TorusPoint({1, 0}, 2), 2));
  CHECK(period_from_multiple(cat, TorusPoint({1, 0}, 2), 36) == 3);
}

TEST_CASE("prime-power construction") {
  CHECK(prime_power_block(IntPoly{-2, 1}, 2) == IntMatrix{{2, 1}, {0, 2}});
  const u64 ps[] = {5, 3};
  CHECK(balanced_exponents(ps, 2) == std::vector<unsigned>{2, 2});
  CHECK(balanced_exponents(ps, 3) == std::vector<unsigned>{3, 4});
  const u64 bad[] = {3, 5};
  CHECK_THROWS_AS(balanced_exponents(bad, 1), InputError);

  SUBCASE("r = 1 is the irreducible construction") {
    auto a = construct_prime_power(catf, 1, 1);
    CHECK(a.T == 5);
    CHECK(a.d_sq == Rat(5, 121));
  }
  SUBCASE("(x - 2)^2 agrees with iteration") {
    const IntMatrix B{{2, 1}, {0, 2}};
    for (unsigned k = 1; k <= 2; ++k) {
      auto r = construct_prime_power(IntPoly{-2, 1}, 2, k);
      CHECK(r.prime_data[0].p == 5);
      CHECK(r.prime_data[1].p == 3);
      auto oc = oracle::orbit(zmat(B), qvec(r.base));
      CHECK(oc.preperiod == 0);
      CHECK(Int(static_cast<unsigned long>(oc.points.size())) == r.T);
      CHECK(oracle::min_dist_sq(oc.points) == *r.d_sq);
    }
  }
  SUBCASE("(x^2 - 3x + 1)^2 on a 4x4 block") {
    auto r = construct_prime_power(catf, 2, 1);
    CHECK(r.dim() == 4);
    CHECK(r.prime_data[0].p == 19);
    CHECK(r.prime_data[1].p == 11);
    auto bo = orbit_bruteforce(prime_power_block(catf, 2), r.base);
    CHECK(bo.preperiod == 0);
    CHECK(bo.cycle.T == r.T);
    CHECK(bo.cycle.d_sq == r.d_sq);
  }
}

TEST_CASE("pull-back through a conjugacy") {
  const auto cert = find_split_primes(catf, 1)[0];
  auto O = construct_irreducible(catf, cert, 1);
  const IntMatrix B = companion(catf);

  auto same = pull_back_orbit(IntMatrix::identity(2), O, B);
  CHECK(same.T == O.T);
  CHECK(same.d_sq == O.d_sq);

  const IntMatrix P = krylov({Int(1), Int(0)}, cat);  // P cat = B P
  REQUIRE(P * cat == B * P);
  auto pulled = pull_back_orbit(P, O, cat);
  CHECK(pulled.T % 5 == 0);
  CHECK(pulled.T <= 5 * abs(determinant(P)));

  // P = 2I conjugates B to itself; periods grow by at most det P = 4.
  const IntMatrix P2 = IntMatrix::identity(2) * Int(2);
  auto doubled = pull_back_orbit(P2, O, B);
  CHECK(doubled.T % O.T == 0);
  CHECK(doubled.T <= 4 * O.T);

  // Without points the period comes from powers of A instead of iteration.
  for (unsigned k = 1; k <= 3; ++k) {
    auto Ok = construct_irreducible(catf, cert, k);
    const auto iterated = pull_back_orbit(P2, Ok, B);
    Ok.points = PointSet();
    const auto analytic = pull_back_orbit(P2, Ok, B);
    CHECK(analytic.T == iterated.T);
    CHECK(analytic.base == iterated.base);
    CHECK_FALSE(analytic.materialized());
    REQUIRE(analytic.d_sq_lower);
    CHECK(*analytic.d_sq_lower <= *iterated.d_sq);
  }
}

TEST_CASE("general construction") {
  SUBCASE("cat map matches the direct pipeline") {
    auto lr = construct_general(cat, 1);
    CHECK(lr.frame.T == 5);
    CHECK(lr.frame.d_sq == Rat(5, 121));
    CHECK(lr.conjugator * cat == lr.frame_matrix * lr.conjugator);
    CHECK(lr.orbit.T % 5 == 0);
    auto oc = oracle::orbit(zmat(cat), qvec(lr.orbit.base));
    CHECK(Int(static_cast<unsigned long>(oc.points.size())) == lr.orbit.T);
    CHECK(oracle::min_dist_sq(oc.points) == *lr.orbit.d_sq);
  }
  SUBCASE("diag(cat, 2) uses coprime primes per block") {
    const IntMatrix A{{2, 1, 0}, {1, 1, 0}, {0, 0, 2}};
    for (unsigned k = 1; k <= 3; ++k) {
      auto lr = construct_general(A, k);
      REQUIRE(lr.frame.prime_data.size() == 2);
      CHECK(lr.frame.prime_data[0].p == 11);
      CHECK(lr.frame.prime_data[1].p == 3);
      CHECK(lr.frame.prime_data[0].k == k);
      CHECK(lr.frame.prime_data[1].k == k);  // 3^(2k) <= 11^k < 3^(2k+2)
      auto bo = orbit_bruteforce(lr.frame_matrix, lr.frame.base);
      CHECK(bo.cycle.T == lr.frame.T);
    }
  }
  SUBCASE("prime override") {
    GeneralOptions opt;
    opt.prime = 5;
    auto lr = construct_general(IntMatrix{{2}}, 3, opt);
    CHECK(lr.frame.T == 100);
    opt.prime = 7;  // x^2 - 3x + 1 does not split mod 7
    CHECK_THROWS_AS(construct_general(cat, 1, opt), InputError);
  }
  SUBCASE("non-ergodic input") {
    try {
      construct_general(IntMatrix{{0, -1}, {1, 0}}, 1);
      FAIL("expected rejection");
    } catch (const NonErgodicError& e) {
      CHECK(e.witness() == 4u);
    }
  }
}

TEST_CASE("uniform sequences") {
  auto seq = uniform_sequence(cat, 3);
  REQUIRE(seq.levels.size() == 3);
  CHECK(seq.levels[0].frame.T == 5);
  CHECK(seq.levels[1].frame.T == 55);
  CHECK(seq.levels[2].frame.T == 605);
  CHECK(seq.periods_increasing);
  CHECK(seq.packing_ok);
  CHECK(seq.C_frame > 0.1);

  GeneralOptions opt;
  opt.prime = 5;
  auto circle = uniform_sequence(IntMatrix{{2}}, 3, opt);
  const long expect[] = {4, 20, 100};
  for (unsigned k = 0; k < 3; ++k) {
    CHECK(circle.levels[k].frame.T == expect[k]);
    // d = 5^-k on the circle, so d T >= 4/5
    CHECK(*circle.levels[k].frame.metric_float() >= 0.8 - 1e-12);
  }
  CHECK_THROWS_AS(uniform_sequence(IntMatrix::identity(2), 2), NonErgodicError);
}
