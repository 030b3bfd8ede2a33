#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "primeclock/sieve.hpp"

namespace primeclock {

enum class WitnessStatus { both_found, twin_missing, cousin_missing, both_missing };

const char* to_string(WitnessStatus s);

/// Smallest twin and cousin leads inside (p_{n-1}^2, p_n^2).
struct ConjectureWitness {
  std::size_t n = 0;
  u64 p_lo = 0;
  u64 p_hi = 0;
  std::optional<u64> twin_lead;
  std::optional<u64> cousin_lead;
  WitnessStatus status = WitnessStatus::both_missing;

  friend bool operator==(const ConjectureWitness&, const ConjectureWitness&) = default;
};

/// Odd slots sieved per probe when searching with early exit.
inline constexpr std::size_t kWitnessProbeSlots = 4096;

ConjectureWitness find_witness(const PrimeSequence& primes, std::size_t n, bool early_exit = true);

/// Witnesses for n in [n_lo, n_hi] in index order, on `jobs` workers.
std::vector<ConjectureWitness> verify_conjectures(const PrimeSequence& primes, std::size_t n_lo,
                                                  std::size_t n_hi, bool early_exit = true, unsigned jobs = 1);

struct Mismatch {
  u64 i = 0;
  std::string property;  // "prime", "twin_lead" or "cousin_lead"
  bool engine = false;
  bool oracle = false;
  std::string state;     // engine tuple at i
};

struct CrossValidationReport {
  u64 limit = 0;
  std::size_t primes_compared = 0;  // odd primes <= limit per oracle
  std::size_t twin_leads = 0;
  std::size_t cousin_leads = 0;
  std::size_t mismatch_total = 0;
  std::vector<Mismatch> mismatches;  // first max_reported of them

  bool ok() const { return mismatch_total == 0; }
};

/// Hook to alter the oracle bitmap before comparison (fault injection).
using OracleTamper = std::function<void(SieveSegment&)>;

/// Steps the counter engine over [3, limit] and compares prime, twin-lead and
/// cousin-lead detection against the segmented sieve at every odd i.
CrossValidationReport cross_validate(u64 limit, const OracleTamper& tamper = {},
                                     std::size_t max_reported = 32);

}  // namespace primeclock
