#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "primeclock/sieve.hpp"

namespace primeclock {

/// Exact relative frequency count / t_n, with the decomposition
/// t_n = nu * p + r.
struct FrequencyCount {
  u64 count = 0;
  u64 t_n = 0;
  u64 nu = 0;
  u64 r = 0;

  double value() const { return static_cast<double>(count) / static_cast<double>(t_n); }
  double lower_bound() const;  // 1 - 2 (nu + 1) / t_n
  double upper_bound() const;  // 1 - 2 nu / t_n
  /// Bracket check in exact integer arithmetic.
  bool within_bracket() const;

  friend bool operator==(const FrequencyCount&, const FrequencyCount&) = default;
};

/// Statistics of I_{n-1} = [p_{n-1}^2, p_n^2) over odd integers.
struct IntervalRecord {
  std::size_t n = 0;
  u64 p_lo = 0;
  u64 p_hi = 0;
  u64 t_n = 0;
  u64 twin_count = 0;
  u64 cousin_count = 0;
  double q_twin = 0;
  double q_cousin = 0;
  double theta_twin = 0;
  double theta_cousin = 0;
  /// digit_freq[k] is q(j, T_n) for j = k + 2, capped by the scan.
  std::vector<FrequencyCount> digit_freq;

  friend bool operator==(const IntervalRecord&, const IntervalRecord&) = default;
};

enum class ScanMode { counter, oracle };
enum class PairKind { twin, cousin };

/// Counter mode steps the engine from 3; it refuses n above this.
inline constexpr std::size_t kCounterModeMaxN = 200;
/// digit_cap counts digits: rows j = 2 .. digit_cap + 1.
inline constexpr std::size_t kDefaultDigitCap = 8;
/// Pass as digit_cap to get all j = 2..n.
inline constexpr std::size_t kAllDigits = static_cast<std::size_t>(-1);

/// Digit of the counter tuple for modulus p at odd x: (-x / 2) mod p.
u64 digit_of(u64 x, u64 p);

/// Number of odd x in [lo, hi) with x = a (mod p), p an odd prime.
u64 count_odd_residue(u64 lo, u64 hi, u64 a, u64 p);

/// prod_{j=2..n} (1 - 2/p_j), log-space accumulated.
double independence_product(const PrimeSequence& primes, std::size_t n);

IntervalRecord scan_interval(const PrimeSequence& primes, std::size_t n, ScanMode mode = ScanMode::oracle,
                             std::size_t digit_cap = kDefaultDigitCap);

/// Records for every n in [n_lo, n_hi], in index order. Oracle mode runs
/// on `jobs` workers; counter mode is one sequential engine pass.
std::vector<IntervalRecord> scan_intervals(const PrimeSequence& primes, std::size_t n_lo, std::size_t n_hi,
                                           ScanMode mode = ScanMode::oracle,
                                           std::size_t digit_cap = kDefaultDigitCap, unsigned jobs = 1);

/// q(j, T_n) for 2 <= j <= n, counted in closed form.
FrequencyCount q_freq(const PrimeSequence& primes, std::size_t n, std::size_t j);

/// occupancy[v] = number of (x, j) with x in I_{n-1}, 2 <= j <= n and
/// digit_j(x) == v. Sums to (n - 1) T_n.
std::vector<u64> digit_occupancy(const PrimeSequence& primes, std::size_t n);

struct ThetaSeries {
  std::size_t n_lo = 0;
  std::vector<double> values;  // values[k] is Theta at n = n_lo + k
  double mean = 0;             // over n > burn_in
  std::size_t mean_count = 0;
};

inline constexpr std::size_t kDefaultBurnIn = 2000;

ThetaSeries theta_series(const std::vector<IntervalRecord>& records, PairKind kind, std::size_t burn_in);
ThetaSeries theta_series(const PrimeSequence& primes, std::size_t n_lo, std::size_t n_hi, PairKind kind,
                         std::size_t burn_in = kDefaultBurnIn, unsigned jobs = 1);

}  // namespace primeclock
