#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "toral/bigint.hpp"
#include "toral/intlinalg.hpp"
#include "toral/intpoly.hpp"
#include "toral/modarith.hpp"
#include "toral/torus.hpp"

namespace toral {

enum class Construction { irreducible, prime_power, general, bruteforce, pulled_back };

std::string to_string(Construction c);

/// One prime used by a construction: the eigen point for `root` lives over p^k.
struct PrimeLevel {
  u64 p = 0;
  unsigned k = 0;
  Int root;               // lifted root mod p^k
  std::size_t block = 0;  // cyclic block index (general case)
};

/// A periodic orbit with exact period and, when materialized, exact gap.
struct OrbitRecord {
  TorusPoint base;
  Int T;
  PointSet points;  // the whole cycle starting at base; empty above the cap
  std::optional<Rat> d_sq;  // none for fixed points or when not exact
  bool d_exact = true;
  std::optional<Rat> d_sq_lower;  // certified lower bound when d_exact is false
  Construction construction = Construction::bruteforce;
  unsigned level = 0;
  std::vector<PrimeLevel> prime_data;

  std::size_t dim() const { return base.dim(); }
  bool materialized() const { return !points.empty(); }
  /// d^n T with d from d_sq (or from the lower bound); nullopt for T = 1.
  std::optional<double> metric_float() const;
  /// d_sq^(n/2) T, exact for even n.
  std::optional<Rat> metric_exact() const;
};

inline constexpr std::size_t kMaxMaterialize = 1'000'000;
inline constexpr std::uint64_t kBruteIterCap = 5'000'000;

struct BruteOrbit {
  std::uint64_t preperiod = 0;
  OrbitRecord cycle;
};

/// Iterates x -> A x mod 1 until a point repeats. The cap defaults to
/// min(m^n, kBruteIterCap); exceeding it throws CapExceeded.
BruteOrbit orbit_bruteforce(const IntMatrix& A, const TorusPoint& x, std::optional<std::uint64_t> iter_cap = {});

/// w = (1, b, ..., b^(n-1)) / p^k for the companion matrix of f; checks
/// B w = b w mod p^k and throws ContractViolation otherwise.
TorusPoint eigen_point(const IntPoly& f, u64 p, unsigned k, const Int& b);

/// det[w, Bw, ..., B^(n-1)w].
Int wedge_invariant(const IntVector& w, const IntMatrix& B);

/// A^T x = x mod 1 and A^(T/q) x != x for every prime q | T.
bool certify_period(const IntMatrix& A, const TorusPoint& x, const Int& T);

/// Least period of x given any multiple N of it.
Int period_from_multiple(const IntMatrix& A, const TorusPoint& x, const Int& N);

/// Orbit of the companion matrix of irreducible f through the eigen point of
/// the lifted root whose order has the largest p-valuation (ties: smallest root).
OrbitRecord construct_irreducible(const IntPoly& f, const SplitPrimeCert& cert, unsigned k);

struct DistanceCertificate {
  std::size_t pairs_checked = 0;
  Int min_abs_wedge;   // smallest |I(a)| seen
  Int frob_product;    // prod_{i=1}^{n-1} |B^i|_F^2
  bool bound_holds = true;  // d_sq^n * frob_product * p^(2k) >= 1
};

/// Checks I(a) != 0 and p^(k(n-1)) | I(a) for centered differences a of
/// orbit points (all pairs up to `sample_pairs`, otherwise a fixed-seed
/// sample), and the implied lower bound on d. Failures throw ContractViolation.
DistanceCertificate certify_distance_bound(const OrbitRecord& O, const IntMatrix& B, u64 p, unsigned k,
                                           std::size_t sample_pairs = 2000);

/// x^n - c(x) style block matrix diag(D, ..., D) + superdiagonal identities
/// with D = companion(g), r copies.
IntMatrix prime_power_block(const IntPoly& g, unsigned r);

/// r split primes for g, smallest first among those not excluded, returned
/// in descending order.
std::vector<SplitPrimeCert> choose_block_primes(const IntPoly& g, unsigned r, std::span<const u64> exclude = {},
                                                u64 scan_cap = kDefaultScanCap);

/// k_1 = k and k_{i+1} = max{j : p_{i+1}^j <= p_i^{k_i}} for descending primes.
std::vector<unsigned> balanced_exponents(std::span<const u64> primes, unsigned k);

/// Orbit of prime_power_block(g, r) at level k through the point
/// (w_1/p_1^{k_1}, ..., w_r/p_r^{k_r}). With r = 1 this is construct_irreducible.
OrbitRecord construct_prime_power(const IntPoly& g, unsigned r, unsigned k,
                                  const std::vector<SplitPrimeCert>& primes);
OrbitRecord construct_prime_power(const IntPoly& g, unsigned r, unsigned k, u64 scan_cap = kDefaultScanCap);

/// Orbit of x under A and of P^{-1} x pulled back through P A = J P. Checks
/// T' = c T with 1 <= c <= |det P| and d'^2 |P|_F^2 >= min(d^2, 1).
OrbitRecord pull_back_orbit(const IntMatrix& P, const OrbitRecord& O_J, const IntMatrix& A);

struct GeneralOptions {
  std::optional<u64> prime;  // replaces the first block's prime (single irreducible block)
  u64 scan_cap = kDefaultScanCap;
  unsigned jobs = 1;
};

/// Block-frame orbit and its pull-back to A.
struct LevelResult {
  unsigned level = 0;
  OrbitRecord frame;  // orbit of J_B = diag(B_i)
  OrbitRecord orbit;  // orbit of A
  IntMatrix frame_matrix;
  IntMatrix conjugator;  // P with P A = J_B P
};

/// Throws NonErgodicError for non-ergodic A.
LevelResult construct_general(const IntMatrix& A, unsigned level, const GeneralOptions& opt = {});

struct UniformSequence {
  std::vector<LevelResult> levels;
  double C_frame = 0;  // min over levels of d^n T (frame records)
  double C_orbit = 0;  // same for the pulled-back orbits
  bool periods_increasing = true;
  bool packing_ok = true;
};

UniformSequence uniform_sequence(const IntMatrix& A, unsigned K, const GeneralOptions& opt = {});

}  // namespace toral
