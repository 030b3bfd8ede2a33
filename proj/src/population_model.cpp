#include "primeclock/population_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "primeclock/errors.hpp"
#include "primeclock/interval_stats.hpp"

namespace primeclock {

u64 PopulationSpec::period() const {
  u64 g = 1;
  for (u64 p : moduli)
    if (__builtin_mul_overflow(g, p, &g)) throw CapacityError("population period overflows 64 bits");
  return g;
}

PopulationSpec PopulationSpec::for_length(std::size_t l, std::vector<u64> start) {
  if (l == 0) throw DomainError("population length must be >= 1");
  PopulationSpec spec;
  const PrimeSequence primes = PrimeSequence::first(l + 1);
  for (std::size_t j = 2; j <= l + 1; ++j) spec.moduli.push_back(primes.p(j));
  if (start.empty()) start.assign(l, 0);
  if (start.size() != l) throw std::invalid_argument("start tuple has wrong length");
  for (std::size_t k = 0; k < l; ++k)
    if (start[k] >= spec.moduli[k]) throw std::invalid_argument("start digit out of range");
  spec.start = std::move(start);
  return spec;
}

PopulationSummary enumerate_population(const PopulationSpec& spec, const TupleVisitor& visitor, u64 cap) {
  const u64 period = spec.period();
  if (period > cap)
    throw CapacityError("population period " + std::to_string(period) + " exceeds enumeration cap " +
                        std::to_string(cap) + "; rerun with cap >= " + std::to_string(period));
  const std::size_t l = spec.length();
  const u64 max_mod = *std::max_element(spec.moduli.begin(), spec.moduli.end());

  PopulationSummary s;
  s.period = period;
  s.digit_counts.assign(max_mod, 0);
  std::vector<bool> seen(period, false);
  std::vector<u64> tuple = spec.start;
  for (u64 step = 0; step < period; ++step) {
    if (visitor) visitor(tuple);
    u64 index = 0;
    bool has0 = false, has1 = false, has2 = false;
    for (std::size_t k = 0; k < l; ++k) {
      const u64 d = tuple[k];
      index = index * spec.moduli[k] + d;
      has0 |= d == 0;
      has1 |= d == 1;
      has2 |= d == 2;
      ++s.digit_counts[d];
    }
    if (!seen[index]) {
      seen[index] = true;
      ++s.distinct;
    }
    if (!has0 && !has1) ++s.avoid_01;
    if (!has0 && !has2) ++s.avoid_02;
    for (std::size_t k = 0; k < l; ++k) tuple[k] = tuple[k] == 0 ? spec.moduli[k] - 1 : tuple[k] - 1;
  }
  return s;
}

u64 event_count(std::span<const u64> moduli) {
  u64 c = 1;
  for (u64 p : moduli)
    if (__builtin_mul_overflow(c, p - 2, &c)) throw CapacityError("event count overflows 64 bits");
  return c;
}

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::analytic_population:
      return "analytic-population";
    case Provenance::enumerated_population:
      return "enumerated-population";
    case Provenance::interval_sample:
      return "interval-sample";
  }
  return "?";
}

DigitDistribution analytic_distribution(std::size_t l) {
  const PopulationSpec spec = PopulationSpec::for_length(l);
  const u64 support = spec.moduli.back();
  DigitDistribution d;
  d.provenance = Provenance::analytic_population;
  d.mass.assign(support, 0.0);
  for (u64 p : spec.moduli)
    for (u64 v = 0; v < p; ++v) d.mass[v] += 1.0 / static_cast<double>(p);
  for (double& m : d.mass) m /= static_cast<double>(l);
  return d;
}

namespace {

DigitDistribution from_counts(std::vector<u64> counts, Provenance provenance) {
  DigitDistribution d;
  d.provenance = provenance;
  for (u64 c : counts) d.observations += c;
  d.mass.reserve(counts.size());
  for (u64 c : counts) d.mass.push_back(static_cast<double>(c) / static_cast<double>(d.observations));
  d.counts = std::move(counts);
  return d;
}

}  // namespace

DigitDistribution interval_distribution(const PrimeSequence& primes, std::size_t n) {
  return from_counts(digit_occupancy(primes, n), Provenance::interval_sample);
}

DigitDistribution enumerated_distribution(const PopulationSpec& spec, u64 cap) {
  return from_counts(enumerate_population(spec, {}, cap).digit_counts, Provenance::enumerated_population);
}

double kolmogorov_q(double lambda) {
  if (!(lambda > 0)) return 1.0;
  if (lambda < 1.18) {
    // Jacobi theta form converges fast for small lambda.
    const double pi = std::numbers::pi;
    const double w = pi * pi / (8.0 * lambda * lambda);
    double cdf = 0;
    for (int k = 1; k <= 50; ++k) {
      const double odd = 2.0 * k - 1.0;
      const double term = std::exp(-odd * odd * w);
      cdf += term;
      if (term < 1e-20) break;
    }
    cdf *= std::sqrt(2.0 * pi) / lambda;
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double q = 0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    q += (k % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-20) break;
  }
  return std::clamp(q, 0.0, 1.0);
}

KsResult ks_test(const DigitDistribution& sample, const DigitDistribution& reference, KsVariant variant) {
  if (sample.mass.size() != reference.mass.size() || sample.mass.empty())
    throw DomainError("ks_test: sample and reference supports differ");
  KsResult r;
  if (variant == KsVariant::one_sample) {
    if (sample.observations == 0) throw DomainError("ks_test: sample has no observations");
    double fs = 0, fr = 0;
    for (std::size_t v = 0; v < sample.mass.size(); ++v) {
      fs += sample.mass[v];
      fr += reference.mass[v];
      r.statistic = std::max(r.statistic, std::abs(fs - fr));
    }
    r.effective_size = static_cast<double>(sample.observations);
    r.p_value = kolmogorov_q(std::sqrt(r.effective_size) * r.statistic);
    return r;
  }

  std::vector<double> a = sample.mass;
  std::vector<double> b = reference.mass;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double n = static_cast<double>(a.size());
  std::vector<double> pooled = a;
  pooled.insert(pooled.end(), b.begin(), b.end());
  for (double x : pooled) {
    const double fa = static_cast<double>(std::upper_bound(a.begin(), a.end(), x) - a.begin()) / n;
    const double fb = static_cast<double>(std::upper_bound(b.begin(), b.end(), x) - b.begin()) / n;
    r.statistic = std::max(r.statistic, std::abs(fa - fb));
  }
  r.effective_size = n * n / (2.0 * n);
  const double root = std::sqrt(r.effective_size);
  r.p_value = kolmogorov_q((root + 0.12 + 0.11 / root) * r.statistic);
  return r;
}

double total_variation(const DigitDistribution& a, const DigitDistribution& b) {
  const std::size_t size = std::max(a.mass.size(), b.mass.size());
  double tv = 0;
  for (std::size_t v = 0; v < size; ++v) {
    const double x = v < a.mass.size() ? a.mass[v] : 0.0;
    const double y = v < b.mass.size() ? b.mass[v] : 0.0;
    tv += std::abs(x - y);
  }
  return tv / 2.0;
}

}  // namespace primeclock
