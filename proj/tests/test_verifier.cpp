#include <algorithm>
#include <stdexcept>

#include "doctest.h"
#include "primeclock/errors.hpp"
#include "primeclock/verifier.hpp"

using namespace primeclock;

namespace {

const PrimeSequence& table() {
  static const PrimeSequence ps = PrimeSequence::first(6000);
  return ps;
}

}  // namespace

TEST_CASE("witnesses for small n") {
  const ConjectureWitness w3 = find_witness(table(), 3);
  CHECK(w3.twin_lead == 11u);
  CHECK(w3.cousin_lead == 13u);
  CHECK(w3.status == WitnessStatus::both_found);

  const ConjectureWitness w5 = find_witness(table(), 5);
  CHECK(w5.p_lo == 7);
  CHECK(w5.p_hi == 11);
  CHECK(w5.twin_lead == 59u);
  CHECK(w5.cousin_lead == 67u);
  CHECK_THROWS_AS(find_witness(table(), 2), DomainError);
}

TEST_CASE("witnesses are the smallest leads") {
  for (std::size_t n = 3; n <= 300; ++n) {
    const ConjectureWitness w = find_witness(table(), n);
    const u64 lo = w.p_lo * w.p_lo, hi = w.p_hi * w.p_hi;
    u64 twin = 0, cousin = 0;
    for (u64 x = lo + 2; x < hi && !(twin && cousin); x += 2) {
      if (!is_prime_trial_division(x)) continue;
      if (!twin && is_prime_trial_division(x + 2)) twin = x;
      if (!cousin && is_prime_trial_division(x + 4)) cousin = x;
    }
    REQUIRE(w.twin_lead == twin);
    REQUIRE(w.cousin_lead == cousin);
  }
}

TEST_CASE("early exit and full count agree") {
  const auto fast = verify_conjectures(table(), 3, 1500, true);
  const auto full = verify_conjectures(table(), 3, 1500, false);
  CHECK(fast == full);
}

TEST_CASE("verify up to 5000") {
  const auto ws = verify_conjectures(table(), 3, 5000, true, 3);
  REQUIRE(ws.size() == 4998);
  std::size_t found = 0;
  for (std::size_t k = 0; k < ws.size(); ++k) {
    REQUIRE(ws[k].n == k + 3);
    found += ws[k].status == WitnessStatus::both_found;
  }
  CHECK(found == 4998);
  CHECK_THROWS_AS(verify_conjectures(table(), 2, 10), DomainError);
  CHECK_THROWS_AS(verify_conjectures(table(), 3, 6001), std::out_of_range);
}

TEST_CASE("cross validation to 121") {
  const CrossValidationReport r = cross_validate(121);
  CHECK(r.ok());
  CHECK(r.primes_compared == 29);
  CHECK(r.twin_leads == 10);  // 3 5 11 17 29 41 59 71 101 107
  CHECK(r.cousin_leads == 11);  // 3 7 13 19 37 43 67 79 97 103 109
}

TEST_CASE("cross validation to 1e6") {
  const CrossValidationReport r = cross_validate(1'000'000);
  CHECK(r.ok());
  CHECK(r.primes_compared == 78497);
  CHECK(r.twin_leads == 8169);
  CHECK(r.cousin_leads == 8144);
}

TEST_CASE("cross validation detects a flipped bitmap") {
  // 91 = 7 * 13 is slot (91 - 3) / 2.
  const CrossValidationReport r = cross_validate(200, [](SieveSegment& s) { s.flags[(91 - s.lo) / 2] = 1; });
  CHECK_FALSE(r.ok());
  // 89 now looks like a twin lead; 87 is composite so no cousin fallout.
  REQUIRE(r.mismatch_total == 2);
  REQUIRE(r.mismatches.size() == 2);
  CHECK(r.mismatches[0].i == 89);
  CHECK(r.mismatches[0].property == "twin_lead");
  CHECK(r.mismatches[1].i == 91);
  CHECK(r.mismatches[1].property == "prime");
  CHECK_FALSE(r.mismatches[1].engine);
  CHECK(r.mismatches[1].oracle);
  CHECK(r.mismatches[1].state == "1;2;0;4");

  const CrossValidationReport capped =
      cross_validate(2000, [](SieveSegment& s) { std::fill(s.flags.begin(), s.flags.end(), 1); }, 5);
  CHECK(capped.mismatches.size() == 5);
  CHECK(capped.mismatch_total > 5);
}

TEST_CASE("status names") {
  CHECK(std::string(to_string(WitnessStatus::both_found)) == "both_found");
  CHECK(std::string(to_string(WitnessStatus::twin_missing)) == "twin_missing");
  CHECK(std::string(to_string(WitnessStatus::cousin_missing)) == "cousin_missing");
  CHECK(std::string(to_string(WitnessStatus::both_missing)) == "both_missing");
}
