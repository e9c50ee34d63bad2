// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.
// Tolerances: exact equality everywhere except the packing bound (1e-12
// absolute slack on d^2 T <= 4/pi) and the empirical constants noted inline.

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include "toral/equidist.hpp"
#include "toral/errors.hpp"
#include "toral/intlinalg.hpp"
#include "toral/lrs.hpp"
#include "toral/modarith.hpp"
#include "toral/orbits.hpp"

using namespace toral;

namespace {

const IntMatrix kCat{{2, 1}, {1, 1}};
const IntPoly kCatPoly{1, -3, 1};

struct Outcome {
  bool pass = true;
  std::ostringstream note;
  void require(bool cond, const std::string& what) {
    if (!cond) {
      if (pass) note << "failed: ";
      else note << "; ";
      note << what;
      pass = false;
    }
  }
};

int failures = 0;

void criterion(int id, const std::string& name, double limit_s, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.require(false, std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (limit_s > 0) o.require(secs <= limit_s, "runtime over " + std::to_string(limit_s) + " s");
  if (!o.pass) ++failures;
  std::cout << (o.pass ? "PASS" : "FAIL") << " [" << id << "] " << name << " -- " << o.note.str() << " ("
            << std::fixed << std::setprecision(2) << secs << " s)" << std::endl;
}

std::uint64_t brute_order(std::uint64_t a, std::uint64_t m) {
  std::uint64_t x = a % m, k = 1;
  while (x != 1) {
    x = x * a % m;
    ++k;
  }
  return k;
}

template <typename E, typename F>
bool throws(F&& f) {
  try {
    f();
  } catch (const E&) {
    return true;
  } catch (...) {
    return false;
  }
  return false;
}

bool equidist_ok(const OrbitRecord& r, unsigned g) {
  if (!r.materialized() || !r.d_sq) return false;
  const auto box = box_counts(r, g);
  std::uint64_t s = 0;
  for (auto c : box.counts) s += c;
  return Int(static_cast<unsigned long>(s)) == r.T && cell_occupancy_check(r) && packing_bound_check(r) &&
         density_bound_check(r, g);
}

}  // namespace

int main() {
  criterion(1, "cat-map flagship", 60, [](Outcome& o) {
    const auto seq = uniform_sequence(kCat, 4);
    const long expect[] = {5, 55, 605, 6655};
    double cmin = 1e300;
    const long double bound = 4.0L / std::acos(-1.0L) + 1e-12L;
    for (std::size_t i = 0; i < 4; ++i) {
      const auto& f = seq.levels[i].frame;
      o.require(f.T == expect[i], "T at level " + std::to_string(i + 1));
      o.require(f.d_exact && f.d_sq.has_value(), "exact d at level " + std::to_string(i + 1));
      o.require(f.prime_data.size() == 1 && f.prime_data[0].p == 11, "p = 11");
      const double m = *f.metric_float();
      cmin = std::min(cmin, m);
      o.require(static_cast<long double>(m) <= bound, "d^2 T <= 4/pi");
    }
    o.require(seq.levels[0].frame.d_sq == Rat(5, 121), "level-1 d^2 = 5/121");
    o.require(seq.levels[0].frame.metric_exact() == Rat(25, 121), "level-1 d^2 T = 25/121");
    o.require(cmin > 0.1, "min d^2 T > 0.1");
    o.note << "T=(5,55,605,6655) d2(1)=" << to_string(*seq.levels[0].frame.d_sq) << " min d2T=" << cmin;
  });

  criterion(2, "period law T_k = p^(k-t) T_1", 30, [](Outcome& o) {
    const std::vector<IntPoly> fixtures = {kCatPoly,         IntPoly{-2, 1},     IntPoly{-3, 1},
                                           IntPoly{-1, -1, 1}, IntPoly{-2, 0, 1}, IntPoly{-1, -1, 0, 1},
                                           IntPoly{1, -1, -2, 1}, IntPoly{1, 1, 0, 1}};
    std::size_t cases = 0;
    for (const auto& f : fixtures) {
      if (root_of_unity_factor(f)) continue;
      const LrsSpec spec = induced_lrs(f);
      for (u64 p = 3; p <= 31; p = next_prime(p + 1)) {
        if (mpz_divisible_ui_p(Int(f[0]).get_mpz_t(), p)) continue;
        u64 pk = 1;
        for (unsigned k = 1; k <= 3; ++k) {
          pk *= p;
          const auto prof = lrs_period_profile(f, p, k);
          o.require(prof.Tk == Int(static_cast<unsigned long>(lrs_period_bruteforce(spec, pk))),
                    f.to_string() + " p=" + std::to_string(p) + " k=" + std::to_string(k));
          ++cases;
        }
      }
    }
    const auto cat1 = lrs_period_profile(kCatPoly, 11, 2);
    o.require(cat1.T1 == 5 && cat1.t == 1 && cat1.Tk == 55, "cat map (T1, t, T2) = (5, 1, 55)");
    o.note << cases << " (f, p, k) cases; cat map T1=5 t=1 T2=55";
  });

  criterion(3, "orders and lifting the exponent", 30, [](Outcome& o) {
    std::size_t cases = 0;
    for (u64 p = 3; p < 50; p = next_prime(p + 1)) {
      for (u64 a = 2; a <= p - 1; ++a) {
        u64 pk = 1;
        for (unsigned k = 1; k <= 3; ++k) {
          pk *= p;
          o.require(mult_order(Int(static_cast<unsigned long>(a)), p, k) == Int(static_cast<unsigned long>(brute_order(a, pk))),
                    "order of " + std::to_string(a) + " mod " + std::to_string(p) + "^" + std::to_string(k));
          ++cases;
        }
      }
    }
    std::mt19937_64 rng(20240611);
    const u64 primes[] = {3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47};
    std::size_t lte = 0;
    while (lte < 1000) {
      const u64 p = primes[rng() % 14];
      const Int x = Int(static_cast<unsigned long>(1 + rng() % 100000));
      const Int y = x + Int(static_cast<unsigned long>(p)) * Int(static_cast<long>(rng() % 2000)) - Int(static_cast<unsigned long>(p)) * 1000;
      const unsigned long k = 1 + rng() % 60;
      if (y <= 0 || x == y) continue;
      if (mpz_divisible_ui_p(x.get_mpz_t(), p) || mpz_divisible_ui_p(y.get_mpz_t(), p)) continue;
      const Int lhs = pow_int(x, k) - pow_int(y, k);
      o.require(vp(lhs, p) == vp(x - y, p) + vp(Int(k), p), "LTE identity");
      ++lte;
    }
    o.note << cases << " orders vs brute force, " << lte << " LTE triples";
  });

  criterion(4, "Hensel lifting tower", 0, [](Outcome& o) {
    const Int P = 11;
    std::vector<Int> top;
    for (u64 r : {5ULL, 9ULL}) {
      Int prev = r;
      for (unsigned k = 1; k <= 10; ++k) {
        const Int pk = pow_int(P, k);
        const Int x = hensel_lift(kCatPoly, 11, r, k);
        o.require(kCatPoly.eval_mod(x, pk) == 0, "f(lift) = 0 mod 11^" + std::to_string(k));
        o.require(mod_floor(x, pk / P) == mod_floor(prev, pk / P), "tower consistency");
        o.require(mod_floor(x, P) == r, "lift reduces to its root");
        prev = x;
      }
      top.push_back(prev);
    }
    o.require(mod_floor(top[0], P) != mod_floor(top[1], P), "distinct mod p");
    o.require(hensel_lift(kCatPoly, 11, 5, 2) == 38, "lift(5, 2) = 38");
    o.note << "roots {5,9} to 11^10; lift(5,2)=38";
  });

  criterion(5, "Krylov invertibility and conjugation", 0, [](Outcome& o) {
    const std::vector<IntMatrix> irreducible = {kCat, IntMatrix{{1, 1}, {1, 0}}, companion(IntPoly{-1, -1, 0, 1}),
                                                IntMatrix{{0, 1, 0}, {0, 0, 1}, {1, 1, 0}},
                                                companion(IntPoly{-1, -1, 0, 0, 1}),
                                                IntMatrix{{1, 2, 0}, {0, 1, 3}, {1, 0, 2}}};
    std::mt19937 rng(1);
    std::uniform_int_distribution<int> d(-9, 9);
    std::size_t fixtures = 0;
    for (const auto& A : irreducible) {
      const IntPoly f = char_poly(A);
      if (!is_irreducible(f)) {
        o.require(false, "fixture charpoly not irreducible: " + f.to_string());
        continue;
      }
      ++fixtures;
      const IntMatrix C = companion(f);
      for (int t = 0; t < 100; ++t) {
        IntVector e(A.rows());
        bool nz = false;
        while (!nz) {
          for (auto& x : e) {
            x = d(rng);
            nz = nz || x != 0;
          }
        }
        const IntMatrix P = krylov(e, A);
        o.require(determinant(P) != 0, "det krylov != 0");
        o.require(P * A == C * P, "P A = B P");
      }
    }
    const std::vector<IntMatrix> decomp = {kCat, IntMatrix{{2, 1, 0}, {1, 1, 0}, {0, 0, 2}}, IntMatrix{{2, 1}, {0, 2}},
                                           IntMatrix{{3, 1, 0}, {0, 3, 0}, {0, 0, 3}}};
    for (const auto& A : decomp) {
      const auto dec = primary_decomposition(A);
      o.require(determinant(dec.P) != 0, "det P != 0");
      o.require(dec.P * A == dec.J * dec.P, "P A = J P");
      IntPoly prod = IntPoly::constant(1);
      for (const auto& b : dec.blocks) prod *= b.annihilator;
      o.require(prod == char_poly(A), "prod d_i = charpoly");
    }
    o.note << fixtures << " irreducible fixtures x 100 vectors; " << decomp.size() << " decompositions";
  });

  criterion(6, "wedge certificate", 0, [](Outcome& o) {
    const std::vector<IntPoly> fs = {kCatPoly, IntPoly{-1, -1, 1}, IntPoly{-1, -1, 0, 1}, IntPoly{-2, 1}};
    std::size_t pairs = 0;
    for (const auto& f : fs) {
      const auto cert = find_split_primes(f, 1)[0];
      for (unsigned k = 1; k <= 3; ++k) {
        const auto rec = construct_irreducible(f, cert, k);
        pairs += certify_distance_bound(rec, companion(f), cert.p, k).pairs_checked;
      }
    }
    const auto r1 = construct_irreducible(kCatPoly, find_split_primes(kCatPoly, 1)[0], 1);
    IntVector a;
    for (std::size_t c = 0; c < 2; ++c)
      a.push_back(centered(Int(static_cast<long>(r1.points[1][c] - r1.points[0][c])), 11));
    o.require(a == IntVector{4, -2}, "level-1 centered difference (4,-2)");
    o.require(wedge_invariant(a, companion(kCatPoly)) == -44, "I((4,-2)) = -44");
    o.note << pairs << " pairs certified; I((4,-2))=-44";
  });

  criterion(7, "equidistribution trend", 0, [](Outcome& o) {
    const auto seq = uniform_sequence(kCat, 4);
    std::vector<OrbitRecord> frames;
    for (const auto& lr : seq.levels) {
      frames.push_back(lr.frame);
      o.require(equidist_ok(lr.frame, 4), "checks at level " + std::to_string(lr.level));
    }
    const auto rep = convergence_report(frames, 4);
    o.require(rep.last_below_first, "max_dev(4) < max_dev(1)");
    o.note << "max_dev by level:";
    for (const auto& r : rep.rows) o.note << " " << std::setprecision(4) << r.max_dev;
  });

  criterion(8, "general and reducible case", 120, [](Outcome& o) {
    const std::vector<IntMatrix> mats = {IntMatrix{{2, 1, 0}, {1, 1, 0}, {0, 0, 2}}, IntMatrix{{2, 1}, {0, 2}}};
    for (const auto& A : mats) {
      std::optional<double> c1;
      Int prevT = 0;
      for (unsigned k = 1; k <= 3; ++k) {
        const auto lr = construct_general(A, k);
        const auto& r = lr.orbit;
        const std::string at = "level " + std::to_string(k);
        o.require(r.T > prevT, "strictly increasing T at " + at);
        prevT = r.T;
        const auto m = r.metric_float();
        o.require(m && *m > 0, "positive d^n T at " + at);
        if (!c1) c1 = m;
        if (m) o.require(*m >= 0.5 * *c1, "d^n T >= 0.5 x level-1 constant at " + at);
        o.require(equidist_ok(r, 4) && equidist_ok(lr.frame, 4), "equidist checks at " + at);
        if (lr.frame.base.m <= 100000) {
          const auto bo = orbit_bruteforce(lr.frame_matrix, lr.frame.base);
          o.require(bo.preperiod == 0 && bo.cycle.T == lr.frame.T, "frame period vs iteration at " + at);
        }
        if (r.base.m <= 100000) o.require(certify_period(A, r.base, r.T), "orbit period certificate at " + at);
        if (k == 3) o.note << "n=" << A.rows() << ": T3=" << to_string(r.T) << " C1=" << *c1 << "; ";
      }
    }
  });

  criterion(9, "negative controls", 0, [](Outcome& o) {
    auto witness = [](const IntMatrix& A) -> std::optional<unsigned> {
      try {
        construct_general(A, 1);
      } catch (const NonErgodicError& e) {
        return e.witness();
      }
      return std::nullopt;
    };
    o.require(witness(IntMatrix{{0, -1}, {1, 0}}) == 4u, "rotation rejected with witness 4");
    o.require(witness(IntMatrix::identity(2)) == 1u, "identity rejected with witness 1");
    o.require(throws<NonErgodicError>([] { uniform_sequence(IntMatrix{{0, -1}, {1, 0}}, 2); }), "verify rejects rotation");
    const auto x4 = factor_rational(IntPoly{1, 0, 0, 0, 1});
    o.require(x4.size() == 1 && x4[0].multiplicity == 1, "x^4 + 1 irreducible");
    o.require(throws<InputError>([] { vp(0, 11); }), "vp(0) rejected");
    o.require(throws<InputError>([] { mult_order(22, 11, 1); }), "order of a multiple of p rejected");
    o.require(throws<InputError>([] { mult_order(2, 15, 1); }), "order mod a composite rejected");
    o.require(throws<CapExceeded>([] { roots_mod_p(kCatPoly, kRootScanCap + 1); }), "root scan cap");
    o.require(throws<InputError>([] { hensel_lift(IntPoly{1, -2, 1}, 3, 1, 2); }), "non-simple root rejected");
    o.note << "unity witnesses 4 and 1; x^4+1 irreducible; error contracts hold";
  });

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
