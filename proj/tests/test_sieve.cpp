#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "primeclock/errors.hpp"
#include "primeclock/sieve.hpp"

using namespace primeclock;

TEST_CASE("isqrt is exact") {
  CHECK(isqrt(0) == 0);
  CHECK(isqrt(1) == 1);
  CHECK(isqrt(24) == 4);
  CHECK(isqrt(25) == 5);
  CHECK(isqrt(0xFFFFFFFE00000001ull) == 0xFFFFFFFFull);
  CHECK(isqrt(0xFFFFFFFE00000000ull) == 0xFFFFFFFEull);
  CHECK(isqrt(~u64{0}) == 0xFFFFFFFFull);
}

TEST_CASE("PrimeSequence numbering") {
  const PrimeSequence ps = PrimeSequence::first(1000);
  REQUIRE(ps.count() == 1000);
  CHECK(ps.p(1) == 2);
  CHECK(ps.p(2) == 3);
  CHECK(ps.p(29) == 109);
  CHECK(ps.p(30) == 113);
  CHECK(ps.p(999) == 7907);
  CHECK(ps.p(1000) == 7919);
  CHECK_THROWS_AS(ps.p(0), std::out_of_range);
  CHECK_THROWS_AS(ps.p(1001), std::out_of_range);
  for (std::size_t n : {1, 2, 3, 5, 6, 7, 100}) CHECK(PrimeSequence::first(n).count() == n);
  CHECK(PrimeSequence::up_to(100).count() == 25);
}

TEST_CASE("oracle_primes small ranges") {
  const SieveSegment a = oracle_primes(9, 25);
  CHECK(a.primes() == std::vector<u64>{11, 13, 17, 19, 23});
  CHECK(a.lo == 9);

  const SieveSegment b = oracle_primes(49, 121);
  CHECK(b.count() == 15);
  CHECK(b.primes().front() == 53);
  CHECK(b.primes().back() == 113);

  // Even lo rounds up; 3 itself is prime.
  const SieveSegment c = oracle_primes(4, 12);
  CHECK(c.lo == 5);
  CHECK(c.primes() == std::vector<u64>{5, 7, 11});
  CHECK(oracle_primes(3, 4).primes() == std::vector<u64>{3});
  CHECK(c.contains(9));
  CHECK_FALSE(c.contains(8));
  CHECK_FALSE(c.contains(13));
}

TEST_CASE("oracle_primes errors") {
  CHECK_THROWS_AS(oracle_primes(2, 10), DomainError);
  CHECK_THROWS_AS(oracle_primes(11, 11), DomainError);
  CHECK_THROWS_AS(oracle_primes(3, (u64{1} << 63) + 2), CapacityError);
  CHECK_THROWS_AS(oracle_primes(101, 201, std::span<const u64>{}), std::invalid_argument);
}

TEST_CASE("segment size does not change the result") {
  const auto base = primes_up_to(1000);
  const SieveSegment big = oracle_primes(100'001, 1'000'000, base);
  for (std::size_t slots : {1, 7, 64, 4096}) {
    const SieveSegment small = oracle_primes(100'001, 1'000'000, base, slots);
    CHECK(small.flags == big.flags);
  }
  CHECK(big.count() == 78498 - 9592);
}

TEST_CASE("oracle_primes near 1e9 against trial division") {
  const u64 lo = 1'000'000'000, hi = lo + 1'000'000;
  const SieveSegment seg = oracle_primes(lo, hi);
  CHECK(self_check(seg, 1000, 7) == 0);

  std::mt19937_64 rng(99);
  std::uniform_int_distribution<u64> pick(0, seg.flags.size() - 1);
  for (int k = 0; k < 1000; ++k) {
    const u64 x = seg.lo + 2 * pick(rng);
    // Independent check: plain odd trial division written here.
    bool prime = true;
    for (u64 d = 3; d * d <= x; d += 2)
      if (x % d == 0) {
        prime = false;
        break;
      }
    REQUIRE(seg.is_prime(x) == prime);
  }
}

TEST_CASE("self_check catches a flipped flag") {
  SieveSegment seg = oracle_primes(3, 201);
  CHECK(self_check(seg, 100) == 0);
  for (auto& f : seg.flags) f ^= 1;
  CHECK(self_check(seg, 100) > 0);
}

TEST_CASE("trial division") {
  CHECK_FALSE(is_prime_trial_division(0));
  CHECK_FALSE(is_prime_trial_division(1));
  CHECK(is_prime_trial_division(2));
  CHECK(is_prime_trial_division(3));
  CHECK_FALSE(is_prime_trial_division(9));
  CHECK(is_prime_trial_division(1'000'000'007));
  CHECK_FALSE(is_prime_trial_division(1'000'000'007ull * 3));
}
