#include "primeclock/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "primeclock/errors.hpp"

namespace primeclock {

u64 isqrt(u64 x) {
  u64 r = static_cast<u64>(std::sqrt(static_cast<long double>(x)));
  while (r > 0 && (r > 0xFFFFFFFFull || r * r > x)) --r;
  while (r < 0xFFFFFFFFull && (r + 1) * (r + 1) <= x) ++r;
  return r;
}

std::vector<u64> primes_up_to(u64 limit) {
  std::vector<u64> out;
  if (limit < 2) return out;
  std::vector<bool> composite(limit + 1, false);
  for (u64 k = 2; k * k <= limit; ++k)
    if (!composite[k])
      for (u64 m = k * k; m <= limit; m += k) composite[m] = true;
  for (u64 k = 2; k <= limit; ++k)
    if (!composite[k]) out.push_back(k);
  return out;
}

PrimeSequence PrimeSequence::up_to(u64 limit) { return PrimeSequence(primes_up_to(limit)); }

PrimeSequence PrimeSequence::first(std::size_t count) {
  // p_n < n (log n + log log n) for n >= 6 (Rosser).
  u64 bound = 15;
  if (count >= 6) {
    const double n = static_cast<double>(count);
    bound = static_cast<u64>(n * (std::log(n) + std::log(std::log(n)))) + 1;
  }
  std::vector<u64> primes = primes_up_to(bound);
  primes.resize(std::min(primes.size(), count));
  return PrimeSequence(std::move(primes));
}

u64 PrimeSequence::p(std::size_t n) const {
  if (n == 0 || n > primes_.size())
    throw std::out_of_range("prime index " + std::to_string(n) + " outside table of " +
                            std::to_string(primes_.size()));
  return primes_[n - 1];
}

std::size_t SieveSegment::count() const {
  return static_cast<std::size_t>(std::count(flags.begin(), flags.end(), std::uint8_t{1}));
}

std::vector<u64> SieveSegment::primes() const {
  std::vector<u64> out;
  for (std::size_t k = 0; k < flags.size(); ++k)
    if (flags[k]) out.push_back(lo + 2 * k);
  return out;
}

namespace {

void check_range(u64 lo, u64 hi) {
  if (lo < 3 || lo >= hi) throw DomainError("oracle_primes: need 3 <= lo < hi");
  if (hi > (u64{1} << 63)) throw CapacityError("oracle_primes: hi beyond supported range");
}

}  // namespace

SieveSegment oracle_primes(u64 lo, u64 hi, std::span<const u64> base, std::size_t segment_slots) {
  check_range(lo, hi);
  const u64 root = isqrt(hi - 1);
  if (root >= 3 && base.empty()) throw std::invalid_argument("oracle_primes: no base primes");

  SieveSegment seg;
  seg.lo = lo | 1;
  seg.hi = hi;
  const std::size_t slots = seg.lo < hi ? static_cast<std::size_t>((hi - seg.lo + 1) / 2) : 0;
  seg.flags.assign(slots, 1);
  if (segment_slots == 0) segment_slots = kDefaultSegmentSlots;

  for (std::size_t block = 0; block < slots; block += segment_slots) {
    const std::size_t block_end = std::min(slots, block + segment_slots);
    const u64 block_lo = seg.lo + 2 * block;
    const u64 block_hi = seg.lo + 2 * block_end;  // exclusive, odd-aligned
    for (u64 p : base) {
      if (p == 2) continue;
      if (p > root) break;
      u64 start = p * p;
      if (start < block_lo) {
        start = ((block_lo + p - 1) / p) * p;
        if ((start & 1) == 0) start += p;
      }
      if (start >= block_hi) continue;
      std::uint8_t* flags = seg.flags.data();
      const u64 step = 2 * p;
      for (u64 m = start; m < block_hi; m += step) flags[(m - seg.lo) / 2] = 0;
    }
  }
  return seg;
}

SieveSegment oracle_primes(u64 lo, u64 hi) {
  check_range(lo, hi);
  const std::vector<u64> base = primes_up_to(isqrt(hi - 1));
  return oracle_primes(lo, hi, base);
}

bool is_prime_trial_division(u64 x) {
  if (x < 2) return false;
  if (x % 2 == 0) return x == 2;
  for (u64 d = 3; d <= x / d; d += 2)
    if (x % d == 0) return false;
  return true;
}

std::size_t self_check(const SieveSegment& segment, std::size_t samples, u64 seed) {
  if (segment.flags.empty()) return 0;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, segment.flags.size() - 1);
  std::size_t bad = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    const std::size_t k = pick(rng);
    const u64 x = segment.lo + 2 * k;
    if ((segment.flags[k] != 0) != is_prime_trial_division(x)) ++bad;
  }
  return bad;
}

}  // namespace primeclock
