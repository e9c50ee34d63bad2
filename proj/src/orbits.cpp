#include "toral/orbits.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <unordered_map>

#include "toral/equidist.hpp"
#include "toral/errors.hpp"

namespace toral {

std::string to_string(Construction c) {
  switch (c) {
    case Construction::irreducible: return "irreducible";
    case Construction::prime_power: return "prime-power";
    case Construction::general: return "general";
    case Construction::bruteforce: return "bruteforce";
    case Construction::pulled_back: return "pulled-back";
  }
  return "unknown";
}

std::optional<double> OrbitRecord::metric_float() const {
  const std::optional<Rat>& d = d_sq ? d_sq : d_sq_lower;
  if (!d || T < 2) return std::nullopt;
  const double n = static_cast<double>(dim());
  return std::pow(d->get_d(), n / 2.0) * T.get_d();
}

std::optional<Rat> OrbitRecord::metric_exact() const {
  if (!d_sq || dim() % 2 != 0) return std::nullopt;
  Rat r(T);
  for (std::size_t i = 0; i < dim() / 2; ++i) r *= *d_sq;
  r.canonicalize();
  return r;
}

namespace {

struct VecHash {
  std::size_t operator()(const std::vector<std::int64_t>& v) const {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (auto x : v) {
      h ^= static_cast<std::uint64_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

Int to_int(u64 v) { return Int(static_cast<unsigned long>(v)); }

std::int64_t checked_modulus(const Int& M) {
  if (M > Int(static_cast<long>(kMaxDenominator))) throw InputError("working denominator exceeds 2^60");
  return to_i64(M);
}

using Factorization = std::vector<std::pair<Int, unsigned>>;

void merge_factor(std::map<Int, unsigned>& acc, const Int& q, unsigned e) {
  auto& slot = acc[q];
  slot = std::max(slot, e);
}

// Shrinks a known multiple N of the period of x by stripping primes.
Int reduce_period(const ModMatrix& A, const TorusPoint& x, Int N, const Factorization& fac) {
  if (A.pow(N).apply(x) != x) throw ContractViolation("period reduction: x is not fixed by A^N");
  for (const auto& [q, e] : fac) {
    for (unsigned i = 0; i < e; ++i) {
      if (!mpz_divisible_p(N.get_mpz_t(), q.get_mpz_t())) break;
      Int cand = N / q;
      if (A.pow(cand).apply(x) != x) break;
      N = cand;
    }
  }
  return N;
}

PointSet materialize(const ModMatrix& A, const TorusPoint& x, const Int& T) {
  PointSet pts(x.dim(), x.m);
  if (T > Int(static_cast<unsigned long>(kMaxMaterialize))) return pts;
  const auto count = to_u64(T);
  pts.reserve(count);
  std::vector<std::int64_t> cur = x.u, next(x.dim());
  for (u64 i = 0; i < count; ++i) {
    pts.push_back(cur);
    A.apply(cur, next);
    cur.swap(next);
  }
  if (cur != x.u) throw ContractViolation("materialize: orbit did not close after T steps");
  return pts;
}

void fill_gap(OrbitRecord& rec, unsigned jobs = 1) {
  if (rec.T < 2) {
    rec.d_sq.reset();
    rec.d_exact = true;
    return;
  }
  if (!rec.materialized()) {
    rec.d_exact = false;
    return;
  }
  MinGapOptions opt;
  opt.jobs = jobs;
  rec.d_sq = min_gap(rec.points, opt);
  rec.d_exact = true;
  if (*rec.d_sq <= 0) throw ContractViolation("orbit with T >= 2 has a repeated point");
}

// Order bound for a matrix whose characteristic polynomial splits into
// nonzero linear factors mod p: (p - 1) p^c with p^c >= dim, times p^(k-1).
void add_split_order_bound(std::map<Int, unsigned>& acc, u64 p, unsigned k, std::size_t dim) {
  unsigned c = 0;
  for (u64 pc = 1; pc < dim; pc *= p) ++c;
  merge_factor(acc, to_int(p), k - 1 + c);
  for (const auto& [q, e] : factorize(p - 1)) merge_factor(acc, to_int(q), e);
}

Int from_factors(const std::map<Int, unsigned>& acc) {
  Int N = 1;
  for (const auto& [q, e] : acc) N *= pow_int(q, e);
  return N;
}

struct ChosenRoot {
  Int b;  // lifted
  Int order;
};

// Largest p-valuation of the order wins; ties go to the smallest root mod p
// so that one root tower is followed across levels.
ChosenRoot choose_root(const IntPoly& f, const SplitPrimeCert& cert, unsigned k) {
  std::optional<ChosenRoot> best;
  unsigned best_v = 0;
  for (u64 r : cert.roots) {
    Int b = hensel_lift(f, cert.p, to_int(r), k);
    Int ord = mult_order(b, cert.p, k);
    unsigned v = vp(ord, cert.p);
    if (!best || v > best_v) {
      best = ChosenRoot{b, ord};
      best_v = v;
    }
  }
  if (!best) throw InputError("split prime certificate has no roots");
  return *best;
}

void require_construction_poly(const IntPoly& f, const char* who) {
  if (f.degree() < 1 || !f.is_monic()) throw InputError(std::string(who) + ": needs a monic polynomial of degree >= 1");
  if (!is_irreducible(f)) throw InputError(std::string(who) + ": polynomial is not irreducible over Q");
  if (auto m = root_of_unity_factor(f))
    throw NonErgodicError(std::string(who) + ": polynomial has a root of unity", *m);
}

}  // namespace

BruteOrbit orbit_bruteforce(const IntMatrix& A, const TorusPoint& x, std::optional<std::uint64_t> iter_cap) {
  if (!A.is_square() || A.rows() != x.dim()) throw InputError("orbit_bruteforce: dimension mismatch");
  std::uint64_t cap = kBruteIterCap;
  {
    Int states = pow_int(Int(static_cast<long>(x.m)), x.dim());
    if (states < Int(static_cast<unsigned long>(cap))) cap = to_u64(states);
  }
  if (iter_cap) cap = std::min(cap, *iter_cap);
  const ModMatrix M(A, x.m);
  std::unordered_map<std::vector<std::int64_t>, std::uint64_t, VecHash> seen;
  PointSet trail(x.dim(), x.m);
  std::vector<std::int64_t> cur = x.u, next(x.dim());
  std::uint64_t step = 0;
  while (true) {
    auto [it, fresh] = seen.emplace(cur, step);
    if (!fresh) {
      BruteOrbit out;
      out.preperiod = it->second;
      OrbitRecord& rec = out.cycle;
      rec.base = trail.point(out.preperiod);
      rec.T = Int(static_cast<unsigned long>(step - out.preperiod));
      rec.construction = Construction::bruteforce;
      if (step - out.preperiod <= kMaxMaterialize) {
        rec.points = PointSet(x.dim(), x.m);
        rec.points.reserve(step - out.preperiod);
        for (std::uint64_t i = out.preperiod; i < step; ++i) rec.points.push_back(trail[i]);
      }
      fill_gap(rec);
      return out;
    }
    if (step >= cap) throw CapExceeded("orbit_bruteforce: iteration cap exceeded");
    trail.push_back(cur);
    M.apply(cur, next);
    cur.swap(next);
    ++step;
  }
}

TorusPoint eigen_point(const IntPoly& f, u64 p, unsigned k, const Int& b) {
  if (f.degree() < 1 || !f.is_monic()) throw InputError("eigen_point: needs a monic polynomial");
  const Int P = to_int(p);
  const Int pk = pow_int(P, k);
  if (mpz_divisible_p(b.get_mpz_t(), P.get_mpz_t())) throw InputError("eigen_point: root is divisible by p");
  if (f.eval_mod(b, pk) != 0) throw InputError("eigen_point: b is not a root mod p^k");
  const auto n = static_cast<std::size_t>(f.degree());
  std::vector<Int> w(n);
  Int cur = 1;
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = cur;
    cur = mod_floor(cur * b, pk);
  }
  const IntVector Bw = times_col(companion(f), w);
  for (std::size_t i = 0; i < n; ++i)
    if (mod_floor(Bw[i] - b * w[i], pk) != 0) throw ContractViolation("eigen_point: B w != b w mod p^k");
  std::vector<std::int64_t> u;
  for (const auto& x : w) u.push_back(to_i64(x));
  return TorusPoint(std::move(u), checked_modulus(pk));
}

Int wedge_invariant(const IntVector& w, const IntMatrix& B) {
  if (!B.is_square() || B.rows() != w.size()) throw InputError("wedge_invariant: dimension mismatch");
  // det of the column matrix equals det of its transpose, the Krylov rows.
  const std::size_t n = w.size();
  IntMatrix K(n, n);
  IntVector cur = w;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) K(i, j) = cur[j];
    cur = times_col(B, cur);
  }
  return determinant(K);
}

bool certify_period(const IntMatrix& A, const TorusPoint& x, const Int& T) {
  if (T < 1) throw InputError("certify_period: T must be positive");
  const ModMatrix M(A, x.m);
  if (M.pow(T).apply(x) != x) return false;
  for (const auto& [q, e] : factorize(T)) {
    (void)e;
    if (M.pow(T / q).apply(x) == x) return false;
  }
  return true;
}

Int period_from_multiple(const IntMatrix& A, const TorusPoint& x, const Int& N) {
  if (N < 1) throw InputError("period_from_multiple: N must be positive");
  return reduce_period(ModMatrix(A, x.m), x, N, factorize(N));
}

OrbitRecord construct_irreducible(const IntPoly& f, const SplitPrimeCert& cert, unsigned k) {
  if (k < 1) throw InputError("construct_irreducible: level must be positive");
  require_construction_poly(f, "construct_irreducible");
  if (!verify_split_cert(f, cert)) throw InputError("construct_irreducible: invalid split prime certificate");
  const ChosenRoot root = choose_root(f, cert, k);
  const IntMatrix B = companion(f);

  OrbitRecord rec;
  rec.base = eigen_point(f, cert.p, k, root.b);
  rec.T = root.order;
  rec.construction = Construction::irreducible;
  rec.level = k;
  rec.prime_data.push_back(PrimeLevel{cert.p, k, root.b, 0});
  if (!certify_period(B, rec.base, rec.T)) throw ContractViolation("construct_irreducible: period certificate failed");

  rec.points = materialize(ModMatrix(B, rec.base.m), rec.base, rec.T);
  fill_gap(rec);
  if (!rec.d_exact) {
    // d^n >= p^{-k} / prod |B^i|_F, turned into a rational bound 1/c on d_sq.
    const auto n = static_cast<unsigned long>(f.degree());
    Int N = pow_int(to_int(cert.p), 2UL * k);
    for (unsigned long i = 1; i < n; ++i) N *= frobenius_norm_sq(matrix_power(B, i));
    Int c;
    mpz_root(c.get_mpz_t(), N.get_mpz_t(), n);
    if (pow_int(c, n) < N) c += 1;
    rec.d_sq_lower = make_rat(1, c);
  }
  return rec;
}

DistanceCertificate certify_distance_bound(const OrbitRecord& O, const IntMatrix& B, u64 p, unsigned k,
                                           std::size_t sample_pairs) {
  const std::size_t n = O.dim();
  if (!B.is_square() || B.rows() != n) throw InputError("certify_distance_bound: dimension mismatch");
  const Int pk = pow_int(to_int(p), k);
  if (Int(static_cast<long>(O.base.m)) != pk) throw InputError("certify_distance_bound: orbit is not over p^k");
  if (O.T < 2) throw InputError("certify_distance_bound: needs T >= 2");

  const ModMatrix M(B, O.base.m);
  auto point = [&](const Int& i) -> std::vector<std::int64_t> {
    if (O.materialized()) {
      auto s = O.points[to_u64(i)];
      return {s.begin(), s.end()};
    }
    return M.pow(i).apply(O.base).u;
  };

  std::vector<std::pair<Int, Int>> pairs;
  const Int total_pairs = O.T * (O.T - 1) / 2;
  if (total_pairs <= Int(static_cast<unsigned long>(sample_pairs))) {
    const u64 T = to_u64(O.T);
    for (u64 i = 0; i < T; ++i)
      for (u64 j = i + 1; j < T; ++j) pairs.emplace_back(Int(static_cast<unsigned long>(i)), Int(static_cast<unsigned long>(j)));
  } else {
    std::mt19937_64 rng(0x5eed);
    gmp_randclass gr(gmp_randinit_default);
    gr.seed(static_cast<unsigned long>(rng()));
    while (pairs.size() < sample_pairs) {
      Int i = gr.get_z_range(O.T), j = gr.get_z_range(O.T);
      if (i == j) continue;
      pairs.emplace_back(i, j);
    }
  }

  DistanceCertificate cert;
  const Int need = pow_int(pk, static_cast<unsigned long>(n - 1));
  bool first = true;
  for (const auto& [i, j] : pairs) {
    const auto xi = point(i), xj = point(j);
    IntVector a(n);
    bool nonzero = false;
    for (std::size_t c = 0; c < n; ++c) {
      a[c] = centered(Int(static_cast<long>(xi[c])) - Int(static_cast<long>(xj[c])), pk);
      if (a[c] != 0) nonzero = true;
    }
    if (!nonzero) throw ContractViolation("certify_distance_bound: distinct orbit indices share a point");
    const Int I = wedge_invariant(a, B);
    if (I == 0) throw ContractViolation("certify_distance_bound: wedge invariant vanishes");
    if (!mpz_divisible_p(I.get_mpz_t(), need.get_mpz_t()))
      throw ContractViolation("certify_distance_bound: p^(k(n-1)) does not divide I(a)");
    const Int absI = abs(I);
    if (first || absI < cert.min_abs_wedge) cert.min_abs_wedge = absI;
    first = false;
    ++cert.pairs_checked;
  }

  cert.frob_product = 1;
  for (std::size_t i = 1; i < n; ++i) cert.frob_product *= frobenius_norm_sq(matrix_power(B, i));
  if (O.d_sq) {
    Rat lhs = *O.d_sq;
    Rat acc = 1;
    for (std::size_t i = 0; i < n; ++i) acc *= lhs;
    acc *= Rat(cert.frob_product * pk * pk);
    cert.bound_holds = acc >= 1;
    if (!cert.bound_holds) throw ContractViolation("certify_distance_bound: d_sq is below the wedge lower bound");
  }
  return cert;
}

IntMatrix prime_power_block(const IntPoly& g, unsigned r) {
  if (r < 1) throw InputError("prime_power_block: r must be positive");
  const IntMatrix D = companion(g);
  const std::size_t m = D.rows(), N = m * r;
  IntMatrix B(N, N);
  for (std::size_t b = 0; b < r; ++b) {
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) B(b * m + i, b * m + j) = D(i, j);
    if (b + 1 < r)
      for (std::size_t i = 0; i < m; ++i) B(b * m + i, (b + 1) * m + i) = 1;
  }
  return B;
}

std::vector<SplitPrimeCert> choose_block_primes(const IntPoly& g, unsigned r, std::span<const u64> exclude,
                                                u64 scan_cap) {
  auto certs = find_split_primes(g, r, 3, scan_cap, exclude);
  std::sort(certs.begin(), certs.end(), [](const auto& a, const auto& b) { return a.p > b.p; });
  return certs;
}

std::vector<unsigned> balanced_exponents(std::span<const u64> primes, unsigned k) {
  if (k < 1) throw InputError("balanced_exponents: level must be positive");
  std::vector<unsigned> ks;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    if (i == 0) {
      ks.push_back(k);
      continue;
    }
    if (primes[i] >= primes[i - 1]) throw InputError("balanced_exponents: primes must be strictly descending");
    const Int bound = pow_int(to_int(primes[i - 1]), ks.back());
    const Int q = to_int(primes[i]);
    unsigned j = 0;
    for (Int pw = q; pw <= bound; pw *= q) ++j;
    ks.push_back(j);
  }
  return ks;
}

OrbitRecord construct_prime_power(const IntPoly& g, unsigned r, unsigned k, const std::vector<SplitPrimeCert>& primes) {
  if (r < 1 || k < 1) throw InputError("construct_prime_power: r and k must be positive");
  if (primes.size() != r) throw InputError("construct_prime_power: need exactly r split primes");
  if (r == 1) return construct_irreducible(g, primes.front(), k);
  require_construction_poly(g, "construct_prime_power");

  std::vector<u64> ps;
  for (const auto& c : primes) {
    if (!verify_split_cert(g, c)) throw InputError("construct_prime_power: invalid split prime certificate");
    ps.push_back(c.p);
  }
  const auto ks = balanced_exponents(ps, k);
  const auto m = static_cast<std::size_t>(g.degree());
  const IntMatrix B = prime_power_block(g, r);

  OrbitRecord rec;
  rec.construction = Construction::prime_power;
  rec.level = k;
  Int M = 1;
  for (std::size_t i = 0; i < r; ++i) M *= pow_int(to_int(ps[i]), ks[i]);
  const std::int64_t Mi = checked_modulus(M);

  std::vector<std::int64_t> v;
  std::map<Int, unsigned> bound;
  for (std::size_t i = 0; i < r; ++i) {
    const ChosenRoot root = choose_root(g, primes[i], ks[i]);
    const TorusPoint w = eigen_point(g, ps[i], ks[i], root.b).rescaled(Mi / to_i64(pow_int(to_int(ps[i]), ks[i])));
    v.insert(v.end(), w.u.begin(), w.u.end());
    rec.prime_data.push_back(PrimeLevel{ps[i], ks[i], root.b, 0});
    add_split_order_bound(bound, ps[i], ks[i], m * r);
  }
  rec.base = TorusPoint(std::move(v), Mi);
  const ModMatrix BM(B, Mi);
  const Int N0 = from_factors(bound);
  Factorization fac(bound.begin(), bound.end());
  rec.T = reduce_period(BM, rec.base, N0, fac);
  rec.points = materialize(BM, rec.base, rec.T);
  fill_gap(rec);
  return rec;
}

OrbitRecord construct_prime_power(const IntPoly& g, unsigned r, unsigned k, u64 scan_cap) {
  return construct_prime_power(g, r, k, choose_block_primes(g, r, {}, scan_cap));
}

OrbitRecord pull_back_orbit(const IntMatrix& P, const OrbitRecord& O_J, const IntMatrix& A) {
  const std::size_t n = A.rows();
  if (!P.is_square() || P.rows() != n || O_J.dim() != n) throw InputError("pull_back_orbit: dimension mismatch");
  const Int det = determinant(P);
  if (det == 0) throw InputError("pull_back_orbit: P is singular");

  IntVector u;
  for (auto x : O_J.base.u) u.push_back(Int(static_cast<long>(x)));
  const IntVector adj_u = times_col(adjugate(P), u);
  const Int den = Int(static_cast<long>(O_J.base.m)) * det;
  std::vector<Rat> coords;
  for (const auto& yi : adj_u) coords.push_back(make_rat(yi, den));

  const TorusPoint y = torus_point(coords);
  OrbitRecord rec;
  if (O_J.materialized()) {
    rec = orbit_bruteforce(A, y).cycle;
  } else {
    // Too long to iterate: T' = c T for the least c <= |det P| that fixes y.
    const ModMatrix M(A, y.m);
    const ModMatrix step = M.pow(O_J.T);
    TorusPoint cur = step.apply(y);
    Int c = 1;
    while (cur != y) {
      if (++c > abs(det)) throw CapExceeded("pull_back_orbit: pulled-back point is not periodic within |det P| T steps");
      cur = step.apply(cur);
    }
    rec.base = y;
    rec.T = c * O_J.T;
    rec.d_exact = false;
    const std::optional<Rat>& dJ = O_J.d_sq ? O_J.d_sq : O_J.d_sq_lower;
    if (dJ) rec.d_sq_lower = std::min(*dJ, Rat(1)) / Rat(frobenius_norm_sq(P));
  }
  rec.construction = Construction::pulled_back;
  rec.level = O_J.level;
  rec.prime_data = O_J.prime_data;

  if (!mpz_divisible_p(rec.T.get_mpz_t(), O_J.T.get_mpz_t()))
    throw ContractViolation("pull_back_orbit: pulled-back period is not a multiple of the frame period");
  const Int c = rec.T / O_J.T;
  if (c < 1 || c > abs(det)) throw ContractViolation("pull_back_orbit: period multiplier outside [1, |det P|]");
  if (rec.d_sq && O_J.d_sq) {
    const Rat dJ = std::min(*O_J.d_sq, Rat(1));
    if (*rec.d_sq * Rat(frobenius_norm_sq(P)) < dJ)
      throw ContractViolation("pull_back_orbit: gap shrank more than |P|_F allows");
  }
  return rec;
}

namespace {

struct BlockPlan {
  CyclicBlock block;
  IntMatrix B;        // prime_power_block(g, e)
  IntMatrix Pprime;   // Pprime * companion(g^e) = B * Pprime
  std::vector<SplitPrimeCert> primes;
};

Int block_modulus(const BlockPlan& bp, unsigned level) {
  std::vector<u64> ps;
  for (const auto& c : bp.primes) ps.push_back(c.p);
  const auto ks = balanced_exponents(ps, level);
  Int M = 1;
  for (std::size_t i = 0; i < ps.size(); ++i) M *= pow_int(to_int(ps[i]), ks[i]);
  return M;
}

IntMatrix block_conjugator(const CyclicBlock& blk, const IntMatrix& B) {
  const std::size_t N = B.rows();
  if (blk.exponent == 1) return IntMatrix::identity(N);
  const IntMatrix G = matrix_power(poly_eval(blk.irreducible, B), blk.exponent - 1);
  for (std::size_t i = 0; i < N; ++i) {
    IntVector beta(N, Int(0));
    beta[i] = 1;
    const IntVector img = row_times(beta, G);
    if (std::all_of(img.begin(), img.end(), [](const Int& x) { return x == 0; })) continue;
    const IntMatrix Pp = adjugate(krylov(beta, B));
    if (Pp * blk.block != B * Pp) throw ContractViolation("construct_general: block conjugation failed");
    return Pp;
  }
  throw ContractViolation("construct_general: no cyclic vector for block");
}

}  // namespace

LevelResult construct_general(const IntMatrix& A, unsigned level, const GeneralOptions& opt) {
  if (level < 1) throw InputError("construct_general: level must be positive");
  const ErgodicityVerdict verdict = is_ergodic(A);
  if (!verdict.ergodic) throw NonErgodicError("matrix is not ergodic: " + verdict.reason, verdict.unity_witness);

  const PrimaryDecomposition dec = primary_decomposition(A);
  check_decomposition(A, dec);

  std::vector<BlockPlan> plans;
  std::vector<u64> used;
  for (std::size_t i = 0; i < dec.blocks.size(); ++i) {
    BlockPlan bp;
    bp.block = dec.blocks[i];
    bp.B = prime_power_block(bp.block.irreducible, bp.block.exponent);
    bp.Pprime = block_conjugator(bp.block, bp.B);
    if (i == 0 && opt.prime) {
      if (bp.block.exponent != 1)
        throw InputError("--prime applies only when the first block is irreducible (exponent 1)");
      const u64 p = *opt.prime;
      if (p < 3 || !is_prime(p)) throw InputError("prime override must be an odd prime");
      SplitPrimeCert c;
      c.p = p;
      c.disc = discriminant(bp.block.irreducible);
      c.f0 = bp.block.irreducible[0];
      c.roots = roots_mod_p(bp.block.irreducible, p);
      if (!verify_split_cert(bp.block.irreducible, c))
        throw InputError("prime override " + std::to_string(p) + " is not a split prime for " +
                         bp.block.irreducible.to_string());
      bp.primes.push_back(c);
    } else {
      bp.primes = choose_block_primes(bp.block.irreducible, bp.block.exponent, used, opt.scan_cap);
    }
    for (const auto& c : bp.primes) used.push_back(c.p);
    plans.push_back(std::move(bp));
  }

  // Level of block i+1: largest kappa with M_{i+1}(kappa)^{r_i} <= M_i(k_i)^{r_{i+1}}.
  std::vector<unsigned> levels{level};
  for (std::size_t i = 0; i + 1 < plans.size(); ++i) {
    const unsigned long ri = plans[i].B.rows(), rn = plans[i + 1].B.rows();
    const Int rhs = pow_int(block_modulus(plans[i], levels.back()), rn);
    unsigned kappa = 1;
    while (pow_int(block_modulus(plans[i + 1], kappa + 1), ri) <= rhs) ++kappa;
    levels.push_back(kappa);
  }

  std::vector<OrbitRecord> parts;
  for (std::size_t i = 0; i < plans.size(); ++i) {
    OrbitRecord part = construct_prime_power(plans[i].block.irreducible, plans[i].block.exponent, levels[i],
                                             plans[i].primes);
    for (auto& pd : part.prime_data) pd.block = i;
    parts.push_back(std::move(part));
  }

  LevelResult out;
  out.level = level;
  std::vector<IntMatrix> Bs, Ps;
  for (const auto& bp : plans) {
    Bs.push_back(bp.B);
    Ps.push_back(bp.Pprime);
  }
  out.frame_matrix = block_diagonal(Bs);
  out.conjugator = block_diagonal(Ps) * dec.P;
  if (out.conjugator * A != out.frame_matrix * out.conjugator)
    throw ContractViolation("construct_general: P A != J_B P");

  if (parts.size() == 1) {
    out.frame = std::move(parts.front());
  } else {
    Int M = 1, T = 1;
    for (const auto& part : parts) {
      M *= Int(static_cast<long>(part.base.m));
      T = lcm(T, part.T);
    }
    const std::int64_t Mi = checked_modulus(M);
    std::vector<std::int64_t> v;
    OrbitRecord& fr = out.frame;
    for (const auto& part : parts) {
      const TorusPoint w = part.base.rescaled(Mi / part.base.m);
      v.insert(v.end(), w.u.begin(), w.u.end());
      fr.prime_data.insert(fr.prime_data.end(), part.prime_data.begin(), part.prime_data.end());
    }
    fr.base = TorusPoint(std::move(v), Mi);
    fr.T = T;
    fr.construction = Construction::general;
    if (!certify_period(out.frame_matrix, fr.base, fr.T))
      throw ContractViolation("construct_general: frame period certificate failed");
    fr.points = materialize(ModMatrix(out.frame_matrix, Mi), fr.base, fr.T);
    fill_gap(fr, opt.jobs);
  }
  out.frame.level = level;
  out.orbit = pull_back_orbit(out.conjugator, out.frame, A);
  out.orbit.level = level;
  return out;
}

UniformSequence uniform_sequence(const IntMatrix& A, unsigned K, const GeneralOptions& opt) {
  if (K < 1) throw InputError("uniform_sequence: K must be positive");
  UniformSequence seq;
  std::optional<double> cf, co;
  for (unsigned k = 1; k <= K; ++k) {
    LevelResult lr = construct_general(A, k, opt);
    if (!seq.levels.empty()) {
      if (lr.frame.T <= seq.levels.back().frame.T || lr.orbit.T <= seq.levels.back().orbit.T)
        seq.periods_increasing = false;
    }
    for (const OrbitRecord* r : {&lr.frame, &lr.orbit})
      if (r->T >= 2 && r->d_sq && !packing_bound_check(*r)) seq.packing_ok = false;
    if (auto m = lr.frame.metric_float()) cf = cf ? std::min(*cf, *m) : *m;
    if (auto m = lr.orbit.metric_float()) co = co ? std::min(*co, *m) : *m;
    seq.levels.push_back(std::move(lr));
  }
  seq.C_frame = cf.value_or(0);
  seq.C_orbit = co.value_or(0);
  return seq;
}

}  // namespace toral
