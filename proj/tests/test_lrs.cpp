#include <doctest.h>

#include "oracle.hpp"
#include "toral/errors.hpp"
#include "toral/lrs.hpp"
#include "toral/modarith.hpp"

using namespace toral;

namespace {
const IntPoly cat{1, -3, 1};

std::vector<Int> ints(std::initializer_list<long> v) { return {v.begin(), v.end()}; }
}  // namespace

TEST_CASE("induced recurrences") {
  auto s = induced_lrs(IntMatrix{{2, 1}, {1, 1}});
  CHECK(s.coeffs == ints({-1, 3}));
  CHECK(s.initial == ints({0, 1}));
  auto one = induced_lrs(IntMatrix{{2}});
  CHECK(one.coeffs == ints({2}));
  CHECK(one.initial == ints({1}));
  auto cub = induced_lrs(IntPoly{-1, -1, 0, 1});
  CHECK(cub.coeffs == ints({1, 1, 0}));
  CHECK(cub.initial == ints({0, 0, 1}));
}

TEST_CASE("terms") {
  auto s = induced_lrs(cat);
  CHECK(lrs_terms_mod(s, 11, 7) == ints({0, 1, 3, 8, 10, 0, 1}));
  CHECK(lrs_terms_mod(s, 1, 4) == ints({0, 0, 0, 0}));
  CHECK(lrs_terms_mod(s, 1'000'000, 5) == ints({0, 1, 3, 8, 21}));
}

TEST_CASE("brute-force periods") {
  auto s = induced_lrs(cat);
  CHECK(lrs_period_bruteforce(s, 11) == 5);
  CHECK(lrs_period_bruteforce(s, 121) == 55);
  CHECK(lrs_period_bruteforce(induced_lrs(IntPoly{-1, 1}), 7) == 1);
  CHECK_THROWS_AS(lrs_period_bruteforce(induced_lrs(IntPoly{-2, 1}), 8), InputError);
  CHECK_THROWS_AS(lrs_period_bruteforce(s, kLrsBruteModulusCap + 1), CapExceeded);
}

TEST_CASE("period profile") {
  auto p1 = lrs_period_profile(cat, 11, 1);
  CHECK(p1.T1 == 5);
  CHECK(p1.t == 1);
  CHECK(p1.Tk == 5);
  CHECK(lrs_period_profile(cat, 11, 3).Tk == 605);
  // t = 2 fixture: 3^5 = 1 + 2 * 11^2
  auto p2 = lrs_period_profile(IntPoly{-3, 1}, 11, 2);
  CHECK(p2.t == 2);
  CHECK(p2.Tk == p2.T1);
  CHECK(p2.Tk == lrs_period_bruteforce(induced_lrs(IntPoly{-3, 1}), 121));
  CHECK_THROWS_AS(lrs_period_profile(IntPoly{-11, 1}, 11, 1), InputError);
  CHECK_THROWS_AS(lrs_period_profile(IntPoly{1, 0, 1}, 5, 1), InputError);
}

TEST_CASE("certificates") {
  CHECK(lrs_certificate(cat, 11, 1, 5));
  CHECK_FALSE(lrs_certificate(cat, 11, 1, 4));
  CHECK(lrs_certificate(cat, 11, 2, 5 * 121));
  CHECK_THROWS_AS(lrs_certificate(cat, 11, 1, 0), InputError);
}

TEST_CASE("property: profile agrees with an independent iteration") {
  const std::vector<IntPoly> fixtures = {cat, IntPoly{-2, 1}, IntPoly{-3, 1}, IntPoly{-1, -1, 0, 1},
                                         IntPoly{-2, 0, 1}, IntPoly{1, -1, -2, 1}};
  for (const auto& f : fixtures) {
    if (root_of_unity_factor(f)) continue;
    std::vector<long> c;
    for (const auto& x : f.recurrence_coeffs()) c.push_back(x.get_si());
    for (u64 p = 3; p <= 31; p = next_prime(p + 1)) {
      if (mpz_divisible_ui_p(Int(f[0]).get_mpz_t(), p)) continue;
      u64 pk = 1;
      for (unsigned k = 1; k <= 3; ++k) {
        pk *= p;
        CHECK(lrs_period_profile(f, p, k).Tk == oracle::lrs_period(c, pk));
      }
    }
  }
}
