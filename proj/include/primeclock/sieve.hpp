#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace primeclock {

using u64 = std::uint64_t;

/// All primes in increasing order with the usual 1-based numbering:
/// p(1) = 2, p(2) = 3, ...
class PrimeSequence {
 public:
  PrimeSequence() = default;
  explicit PrimeSequence(std::vector<u64> primes) : primes_(std::move(primes)) {}

  static PrimeSequence up_to(u64 limit);
  static PrimeSequence first(std::size_t count);

  /// 1-based; throws std::out_of_range past the end.
  u64 p(std::size_t n) const;
  std::size_t count() const { return primes_.size(); }
  std::span<const u64> values() const { return primes_; }

 private:
  std::vector<u64> primes_;
};

/// Plain Eratosthenes up to and including `limit`.
std::vector<u64> primes_up_to(u64 limit);

/// Primality flags for the odd integers of [lo, hi).
struct SieveSegment {
  u64 lo = 0;  // first odd integer >= requested lo
  u64 hi = 0;  // exclusive
  std::vector<std::uint8_t> flags;  // flags[k] is 1 iff lo + 2k is prime

  bool contains(u64 x) const { return x >= lo && x < hi && (x & 1) == 1; }
  /// x must be odd and inside the segment.
  bool is_prime(u64 x) const { return flags[(x - lo) / 2] != 0; }
  std::size_t count() const;
  std::vector<u64> primes() const;
};

inline constexpr std::size_t kDefaultSegmentSlots = std::size_t{1} << 20;

/// Segmented sieve over [lo, hi), 3 <= lo < hi. `base` must hold every
/// prime <= sqrt(hi - 1) (it may include 2 and larger primes). The overload
/// without `base` computes the base primes itself.
SieveSegment oracle_primes(u64 lo, u64 hi, std::span<const u64> base,
                           std::size_t segment_slots = kDefaultSegmentSlots);
SieveSegment oracle_primes(u64 lo, u64 hi);

/// Checks `samples` pseudo-random odd positions against trial division.
/// Returns the number of disagreements (0 when the bitmap is sound).
std::size_t self_check(const SieveSegment& segment, std::size_t samples = 100, u64 seed = 0x5eed);

bool is_prime_trial_division(u64 x);

/// floor(sqrt(x)) exactly.
u64 isqrt(u64 x);

}  // namespace primeclock
