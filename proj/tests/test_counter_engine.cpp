#include <algorithm>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "primeclock/counter_engine.hpp"
#include "primeclock/errors.hpp"
#include "primeclock/sieve.hpp"

using namespace primeclock;

namespace {

std::vector<u64> tuple(std::initializer_list<u64> xs) { return std::vector<u64>(xs); }

std::vector<u64> current(const CounterEngine& e) { return {e.digits().begin(), e.digits().end()}; }

CounterEngine advance_to(u64 i) {
  CounterEngine e;
  while (e.index() < i) e.step();
  return e;
}

}  // namespace

TEST_CASE("seed state") {
  CounterEngine e;
  CHECK(e.index() == 3);
  CHECK(current(e) == tuple({3}));
  REQUIRE(e.table().size() == 1);
  CHECK(e.table()[0] == 3);
  CHECK(e.classify().is_prime);
}

TEST_CASE("first steps find 5 and 7") {
  CounterEngine e;
  StepOutcome o = e.step();
  CHECK(e.index() == 5);
  CHECK(current(e) == tuple({2}));
  CHECK(o.kind == StepKind::prime);
  CHECK(o.new_prime == 5u);
  o = e.step();
  CHECK(e.index() == 7);
  CHECK(current(e) == tuple({1}));
  CHECK(o.new_prime == 7u);
  CHECK(e.table().size() == 3);
}

TEST_CASE("step from 9 to 11") {
  CounterEngine e = advance_to(9);
  CHECK(current(e) == tuple({0, 3}));
  const StepOutcome o = e.step();
  CHECK(current(e) == tuple({2, 2}));
  CHECK(o.kind == StepKind::prime);
  CHECK(e.table().back() == 11);
}

TEST_CASE("extension at 49 and 121") {
  CounterEngine e = advance_to(47);
  CHECK(current(e) == tuple({2, 4, 1}));
  StepOutcome o = e.step();
  CHECK(e.index() == 49);
  CHECK(current(e) == tuple({1, 3, 0, 3}));
  CHECK(o.kind == StepKind::composite_extended);
  CHECK(o.appended_digit == 3u);
  CHECK_FALSE(o.new_prime);

  while (e.index() < 119) e.step();
  CHECK(current(e) == tuple({2, 3, 0, 1}));
  o = e.step();
  CHECK(current(e) == tuple({1, 2, 6, 0, 11}));
  CHECK(o.kind == StepKind::composite_extended);
  CHECK(o.appended_digit == 11u);
}

TEST_CASE("run_to tables") {
  const PrimeTable t121 = run_to(121);
  REQUIRE(t121.size() == 29);
  CHECK(t121[0] == 3);
  CHECK(t121.back() == 113);
  CHECK(run_to(3).size() == 1);
  CHECK(run_to(4).size() == 1);

  std::vector<u64> visited;
  run_to(15, [&](u64 i, std::span<const u64>, const StepOutcome&) { visited.push_back(i); });
  CHECK(visited == tuple({3, 5, 7, 9, 11, 13, 15}));
}

TEST_CASE("run_to matches the oracle to 1e6") {
  const PrimeTable t = run_to(1'000'000);
  const auto oracle = primes_up_to(1'000'000);
  REQUIRE(t.size() == 78497);
  REQUIRE(oracle.size() == 78498);
  for (std::size_t k = 0; k < t.size(); ++k) REQUIRE(t[k] == oracle[k + 1]);
}

TEST_CASE("classify_tuple") {
  TupleClass c = classify_tuple(tuple({2, 2}), 11);
  CHECK(c.is_prime);
  CHECK(c.is_twin_lead);
  CHECK_FALSE(c.is_cousin_lead);

  c = classify_tuple(tuple({1, 1}), 13);
  CHECK(c.is_prime);
  CHECK_FALSE(c.is_twin_lead);
  CHECK(c.is_cousin_lead);

  c = classify_tuple(tuple({0, 0}), 15);
  CHECK_FALSE(c.is_prime);
  CHECK_FALSE(c.is_twin_lead);
  CHECK_FALSE(c.is_cousin_lead);

  c = classify_tuple(tuple({1, 3, 5, 6}), 109);
  CHECK(c.is_prime);
  CHECK_FALSE(c.is_twin_lead);
  CHECK(c.is_cousin_lead);

  // The seed digit is 3 (= 0 mod 3), yet 3 is prime and leads both pairs.
  c = classify_tuple(tuple({3}), 3);
  CHECK(c.is_prime);
  CHECK(c.is_twin_lead);
  CHECK(c.is_cousin_lead);
}

TEST_CASE("reconstruct") {
  const PrimeTable t = run_to(121);
  CHECK(reconstruct(tuple({0, 3}), t) == 9u);
  CHECK(reconstruct(tuple({1, 3, 0, 3}), t) == 49u);
  CHECK(reconstruct(tuple({1}), t) == 7u);
  CHECK_THROWS_AS(reconstruct(tuple({0, 5}), t), std::invalid_argument);
  CHECK_THROWS_AS(reconstruct(tuple({}), t), std::invalid_argument);
}

TEST_CASE("reconstruct round-trip over [9, 1e4]") {
  const PrimeTable table = run_to(10'001);
  std::size_t checked = 0;
  run_to(10'000, [&](u64 i, std::span<const u64> digits, const StepOutcome&) {
    if (i < 9) return;
    REQUIRE(reconstruct(digits, table) == i);
    ++checked;
  });
  CHECK(checked == (10'000 - 9) / 2 + 1);
}

TEST_CASE("congruence invariant over random steps") {
  // 20 random starting points in [5, 2e6], 5000 steps each.
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<u64> start(5, 2'000'000);
  std::vector<u64> starts(20);
  for (u64& s : starts) s = start(rng) | 1;
  std::sort(starts.begin(), starts.end());

  CounterEngine e;
  e.step();
  std::size_t checked = 0;
  for (u64 s : starts) {
    while (e.index() < s) e.step();
    for (int k = 0; k < 5000; ++k) {
      const u64 i = e.index();
      const auto d = e.digits();
      for (std::size_t j = 0; j < d.size(); ++j) {
        const u64 p = e.table()[j];
        REQUIRE(d[j] < p);
        REQUIRE((i + 2 * d[j]) % p == 0);
      }
      // The tuple covers every table prime up to sqrt(i).
      const u64 root = isqrt(i);
      REQUIRE((d.size() == e.table().size() || e.table()[d.size()] > root));
      e.step();
      ++checked;
    }
  }
  CHECK(checked == 100'000);
}

TEST_CASE("join_digits") {
  CHECK(join_digits(tuple({1, 3, 0, 3})) == "1;3;0;3");
  CHECK(join_digits(tuple({})) == "");
}

TEST_CASE("PrimeTable append validation") {
  PrimeTable t;
  t.append(3);
  CHECK_THROWS_AS(t.append(3), std::invalid_argument);
  CHECK_THROWS_AS(t.append(8), std::invalid_argument);
  t.append(5);
  CHECK(t.size() == 2);
}

TEST_CASE("StepKind names") {
  CHECK(std::string(to_string(StepKind::prime)) == "prime");
  CHECK(std::string(to_string(StepKind::composite)) == "composite");
  CHECK(std::string(to_string(StepKind::composite_extended)) == "composite_extended");
}
