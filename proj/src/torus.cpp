#include "toral/torus.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>
#include <unordered_map>

#include "toral/errors.hpp"

namespace toral {
namespace {

using u128 = unsigned __int128;

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

Rat rat_from_units(u128 num, std::int64_t m) {
  Int mm(static_cast<long>(m));
  return make_rat(from_i128(static_cast<__int128>(num)), mm * mm);
}

}  // namespace

TorusPoint::TorusPoint(std::vector<std::int64_t> coords, std::int64_t denom) : u(std::move(coords)), m(denom) {
  if (m < 1) throw InputError("torus point denominator must be positive");
  if (m > kMaxDenominator) throw InputError("torus point denominator exceeds 2^60");
  for (auto& x : u) x = floor_mod(x, m);
}

TorusPoint TorusPoint::reduced() const {
  std::int64_t g = m;
  for (auto x : u) g = std::gcd(g, x);
  std::vector<std::int64_t> v = u;
  for (auto& x : v) x /= g;
  return TorusPoint(std::move(v), m / g);
}

TorusPoint TorusPoint::rescaled(std::int64_t factor) const {
  if (factor < 1) throw InputError("rescale factor must be positive");
  if (m > kMaxDenominator / factor) throw InputError("rescaled denominator exceeds 2^60");
  std::vector<std::int64_t> v = u;
  for (auto& x : v) x *= factor;
  return TorusPoint(std::move(v), m * factor);
}

TorusPoint torus_point(const std::vector<Rat>& coords) {
  Int den = 1;
  for (const auto& c : coords) den = lcm(den, c.get_den());
  if (!fits_i64(den) || den > Int(static_cast<long>(kMaxDenominator)))
    throw InputError("torus point denominator exceeds 2^60");
  std::vector<std::int64_t> u;
  for (const auto& c : coords) u.push_back(to_i64(mod_floor(c.get_num() * (den / c.get_den()), den)));
  return TorusPoint(std::move(u), to_i64(den));
}

unsigned __int128 dist_sq_units(std::span<const std::int64_t> a, std::span<const std::int64_t> b, std::int64_t m) {
  u128 s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::int64_t d = a[i] > b[i] ? a[i] - b[i] : b[i] - a[i];
    std::int64_t w = std::min(d, m - d);
    s += static_cast<u128>(w) * static_cast<u128>(w);
  }
  return s;
}

Rat torus_dist_sq(const TorusPoint& x, const TorusPoint& y) {
  if (x.dim() != y.dim()) throw InputError("torus_dist_sq: dimension mismatch");
  if (x.m == y.m) return rat_from_units(dist_sq_units(x.u, y.u, x.m), x.m);
  std::int64_t l = std::lcm(x.m, y.m);
  TorusPoint a = x.rescaled(l / x.m), b = y.rescaled(l / y.m);
  return rat_from_units(dist_sq_units(a.u, b.u, l), l);
}

void PointSet::push_back(std::span<const std::int64_t> u) {
  if (u.size() != dim_) throw InputError("PointSet: dimension mismatch");
  coords_.insert(coords_.end(), u.begin(), u.end());
}

TorusPoint PointSet::point(std::size_t i) const {
  auto s = (*this)[i];
  return TorusPoint(std::vector<std::int64_t>(s.begin(), s.end()), m_);
}

namespace {

u128 all_pairs(const PointSet& pts, unsigned jobs) {
  const std::size_t N = pts.size();
  const std::int64_t m = pts.modulus();
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(N / 2048 + 1)));
  std::vector<u128> best(jobs, ~u128{0});
  auto worker = [&](unsigned w) {
    u128 b = ~u128{0};
    // Interleaved rows balance the triangular loop across workers.
    for (std::size_t i = w; i < N; i += jobs) {
      auto pi = pts[i];
      for (std::size_t j = i + 1; j < N; ++j) {
        u128 d = dist_sq_units(pi, pts[j], m);
        if (d < b) b = d;
      }
    }
    best[w] = b;
  };
  if (jobs == 1) {
    worker(0);
  } else {
    std::vector<std::thread> threads;
    for (unsigned w = 0; w < jobs; ++w) threads.emplace_back(worker, w);
    for (auto& t : threads) t.join();
  }
  return *std::min_element(best.begin(), best.end());
}

u128 bucketed(const PointSet& pts, std::int64_t G) {
  const std::size_t N = pts.size();
  const std::size_t n = pts.dim();
  const std::int64_t m = pts.modulus();
  G = std::clamp<std::int64_t>(G, 1, m);
  auto cell_of = [&](std::int64_t u) {
    return static_cast<std::int64_t>(static_cast<__int128>(u) * G / m);
  };
  auto key_of = [&](const std::vector<std::int64_t>& c) {
    std::uint64_t k = 0;
    for (auto x : c) k = k * static_cast<std::uint64_t>(G) + static_cast<std::uint64_t>(x);
    return k;
  };
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> cells;
  std::vector<std::vector<std::int64_t>> cell_idx(N, std::vector<std::int64_t>(n));
  for (std::size_t i = 0; i < N; ++i) {
    auto p = pts[i];
    for (std::size_t d = 0; d < n; ++d) cell_idx[i][d] = cell_of(p[d]);
    cells[key_of(cell_idx[i])].push_back(i);
  }
  const std::int64_t width = m / G;  // every cell spans at least this many units
  for (std::int64_t R = 1;; R *= 2) {
    const bool covers_all = 2 * R + 1 >= G;
    std::vector<std::int64_t> offsets;
    if (covers_all) {
      for (std::int64_t o = 0; o < G; ++o) offsets.push_back(o);
    } else {
      for (std::int64_t o = -R; o <= R; ++o) offsets.push_back(o);
    }
    u128 best = ~u128{0};
    std::vector<std::int64_t> probe(n);
    std::vector<std::size_t> pos(n, 0);
    for (std::size_t i = 0; i < N; ++i) {
      std::fill(pos.begin(), pos.end(), 0);
      while (true) {
        for (std::size_t d = 0; d < n; ++d) probe[d] = floor_mod(cell_idx[i][d] + offsets[pos[d]], G);
        if (auto it = cells.find(key_of(probe)); it != cells.end()) {
          for (std::size_t j : it->second) {
            if (j <= i) continue;
            u128 dd = dist_sq_units(pts[i], pts[j], m);
            if (dd < best) best = dd;
          }
        }
        std::size_t d = 0;
        while (d < n && ++pos[d] == offsets.size()) pos[d++] = 0;
        if (d == n) break;
      }
    }
    if (covers_all) return best;
    // Unscanned pairs sit at least R whole cells apart along some axis.
    const u128 lower = static_cast<u128>(R) * static_cast<u128>(width);
    if (best <= lower * lower) return best;
  }
}

}  // namespace

Rat min_gap(const PointSet& pts, const MinGapOptions& opt) {
  if (pts.size() < 2) throw InputError("min_gap: needs at least two points");
  const std::size_t N = pts.size();
  u128 best;
  if (N < kAllPairsThreshold && !opt.force_bucketing) {
    best = all_pairs(pts, opt.jobs);
  } else {
    std::int64_t G = opt.cells_per_axis.value_or(static_cast<std::int64_t>(
        std::floor(std::pow(static_cast<double>(N), 1.0 / static_cast<double>(pts.dim())))));
    // Cell keys must fit in 64 bits.
    const double max_g = std::pow(2.0, 63.0 / static_cast<double>(pts.dim()));
    G = std::clamp<std::int64_t>(G, 1, static_cast<std::int64_t>(std::min(max_g, 1e9)));
    best = bucketed(pts, G);
  }
  return rat_from_units(best, pts.modulus());
}

ModMatrix::ModMatrix(const IntMatrix& A, std::int64_t m) : n_(A.rows()), m_(m), a_(A.rows() * A.rows()) {
  if (!A.is_square()) throw InputError("ModMatrix: square matrix required");
  if (m < 1 || m > kMaxDenominator) throw InputError("ModMatrix: modulus out of range");
  const Int M(static_cast<long>(m));
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) a_[i * n_ + j] = to_i64(mod_floor(A(i, j), M));
}

void ModMatrix::apply(std::span<const std::int64_t> in, std::span<std::int64_t> out) const {
  for (std::size_t i = 0; i < n_; ++i) {
    u128 acc = 0;
    const std::int64_t* row = a_.data() + i * n_;
    for (std::size_t j = 0; j < n_; ++j) {
      acc += static_cast<u128>(row[j]) * static_cast<u128>(in[j]);
      // keep the accumulator far from overflow for large moduli
      if ((j & 3) == 3) acc %= static_cast<u128>(m_);
    }
    out[i] = static_cast<std::int64_t>(acc % static_cast<u128>(m_));
  }
}

TorusPoint ModMatrix::apply(const TorusPoint& x) const {
  if (x.m != m_ || x.dim() != n_) throw InputError("ModMatrix::apply: point does not match modulus/dimension");
  TorusPoint y;
  y.m = m_;
  y.u.resize(n_);
  apply(x.u, y.u);
  return y;
}

ModMatrix ModMatrix::operator*(const ModMatrix& o) const {
  ModMatrix r(n_, m_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) {
      u128 acc = 0;
      for (std::size_t k = 0; k < n_; ++k) {
        acc += static_cast<u128>(a_[i * n_ + k]) * static_cast<u128>(o.a_[k * n_ + j]);
        if ((k & 3) == 3) acc %= static_cast<u128>(m_);
      }
      r.a_[i * n_ + j] = static_cast<std::int64_t>(acc % static_cast<u128>(m_));
    }
  return r;
}

ModMatrix ModMatrix::pow(const Int& e) const {
  if (e < 0) throw InputError("ModMatrix::pow: negative exponent");
  ModMatrix result(n_, m_);
  for (std::size_t i = 0; i < n_; ++i) result.a_[i * n_ + i] = 1 % m_;
  ModMatrix base = *this;
  const std::size_t bits = e == 0 ? 0 : mpz_sizeinbase(e.get_mpz_t(), 2);
  for (std::size_t b = 0; b < bits; ++b) {
    if (mpz_tstbit(e.get_mpz_t(), b)) result = result * base;
    if (b + 1 < bits) base = base * base;
  }
  return result;
}

}  // namespace toral
