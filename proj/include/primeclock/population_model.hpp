#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "primeclock/sieve.hpp"

namespace primeclock {

/// The full product space Omega_2 x ... x Omega_{l+1} walked by the
/// decrement-every-digit map.
struct PopulationSpec {
  std::vector<u64> moduli;  // p_2 .. p_{l+1}
  std::vector<u64> start;   // first tuple visited

  std::size_t length() const { return moduli.size(); }
  /// Product of the moduli; CapacityError if it overflows.
  u64 period() const;

  /// Moduli p_2..p_{l+1}, start tuple all zeros unless given.
  static PopulationSpec for_length(std::size_t l, std::vector<u64> start = {});
};

struct PopulationSummary {
  u64 period = 0;
  u64 distinct = 0;
  u64 avoid_01 = 0;  // tuples with no digit in {0, 1}
  u64 avoid_02 = 0;  // tuples with no digit in {0, 2}
  std::vector<u64> digit_counts;  // pooled over positions
};

inline constexpr u64 kDefaultEnumerationCap = 100'000'000;

using TupleVisitor = std::function<void(std::span<const u64>)>;

/// Walks all period() tuples. Throws CapacityError naming the required cap
/// when the period exceeds `cap`.
PopulationSummary enumerate_population(const PopulationSpec& spec, const TupleVisitor& visitor = {},
                                       u64 cap = kDefaultEnumerationCap);

/// prod (p_j - 2): the exact number of tuples avoiding a two-digit set.
u64 event_count(std::span<const u64> moduli);

enum class Provenance { analytic_population, enumerated_population, interval_sample };

const char* to_string(Provenance p);

struct DigitDistribution {
  std::vector<double> mass;   // support 0 .. max modulus - 1
  std::vector<u64> counts;    // raw observations; empty for analytic
  u64 observations = 0;
  Provenance provenance = Provenance::analytic_population;
};

/// mass(v) = (1/l) sum over moduli p > v of 1/p, for moduli p_2..p_{l+1}.
DigitDistribution analytic_distribution(std::size_t l);

/// Pooled digit frequencies over every tuple of I_{n-1} (tuple length n-1).
DigitDistribution interval_distribution(const PrimeSequence& primes, std::size_t n);

DigitDistribution enumerated_distribution(const PopulationSpec& spec, u64 cap = kDefaultEnumerationCap);

/// Asymptotic Kolmogorov survival function Q(lambda) = 2 sum (-1)^{k-1} e^{-2 k^2 lambda^2}.
double kolmogorov_q(double lambda);

enum class KsVariant {
  /// Digit masses of sample and reference compared as two samples of size
  /// `support` each, p from Q((sqrt(ne) + 0.12 + 0.11/sqrt(ne)) D) with
  /// ne = support / 2.
  mass_vectors,
  /// One-sample KS of the pooled digit observations against the reference
  /// CDF, p = Q(sqrt(m) D). Conservative for discrete data.
  one_sample,
};

struct KsResult {
  double statistic = 0;
  double p_value = 1;
  double effective_size = 0;
};

/// DomainError when the supports differ or (one_sample) the sample has no observations.
KsResult ks_test(const DigitDistribution& sample, const DigitDistribution& reference,
                 KsVariant variant = KsVariant::mass_vectors);

/// Total variation distance, supports padded with zeros.
double total_variation(const DigitDistribution& a, const DigitDistribution& b);

}  // namespace primeclock
