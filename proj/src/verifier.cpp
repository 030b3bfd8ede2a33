#include "primeclock/verifier.hpp"

#include <algorithm>
#include <string>

#include "primeclock/counter_engine.hpp"
#include "primeclock/errors.hpp"
#include "primeclock/parallel.hpp"

namespace primeclock {

const char* to_string(WitnessStatus s) {
  switch (s) {
    case WitnessStatus::both_found:
      return "both_found";
    case WitnessStatus::twin_missing:
      return "twin_missing";
    case WitnessStatus::cousin_missing:
      return "cousin_missing";
    case WitnessStatus::both_missing:
      return "both_missing";
  }
  return "?";
}

ConjectureWitness find_witness(const PrimeSequence& primes, std::size_t n, bool early_exit) {
  if (n < 3) throw DomainError("find_witness: n must be >= 3");
  ConjectureWitness w;
  w.n = n;
  w.p_lo = primes.p(n - 1);
  w.p_hi = primes.p(n);
  if (w.p_hi > 0xFFFFFFFFull) throw CapacityError("find_witness: p_n^2 overflows 64 bits");
  // The endpoints are odd squares, so the open and half-open ranges coincide.
  const u64 lo = w.p_lo * w.p_lo;
  const u64 hi = w.p_hi * w.p_hi;
  const auto base = primes.values().subspan(0, n);

  const u64 probe = early_exit ? 2 * kWitnessProbeSlots : hi - lo;
  for (u64 a = lo; a < hi && !(w.twin_lead && w.cousin_lead); a += probe) {
    const u64 b = std::min(hi, a + probe);
    const SieveSegment seg = oracle_primes(a, b + 4, base);
    const std::size_t leads = static_cast<std::size_t>((b - seg.lo + 1) / 2);
    for (std::size_t k = 0; k < leads; ++k) {
      if (!seg.flags[k]) continue;
      if (!w.twin_lead && seg.flags[k + 1]) w.twin_lead = seg.lo + 2 * k;
      if (!w.cousin_lead && seg.flags[k + 2]) w.cousin_lead = seg.lo + 2 * k;
      if (w.twin_lead && w.cousin_lead) break;
    }
  }

  if (w.twin_lead && w.cousin_lead)
    w.status = WitnessStatus::both_found;
  else if (w.cousin_lead)
    w.status = WitnessStatus::twin_missing;
  else if (w.twin_lead)
    w.status = WitnessStatus::cousin_missing;
  else
    w.status = WitnessStatus::both_missing;
  return w;
}

std::vector<ConjectureWitness> verify_conjectures(const PrimeSequence& primes, std::size_t n_lo,
                                                  std::size_t n_hi, bool early_exit, unsigned jobs) {
  if (n_lo < 3 || n_hi < n_lo) throw DomainError("verify_conjectures: need 3 <= n_lo <= n_hi");
  if (n_hi > primes.count()) throw std::out_of_range("verify_conjectures: prime table too short");
  std::vector<ConjectureWitness> out(n_hi - n_lo + 1);
  parallel_for(out.size(), jobs, [&](std::size_t k) { out[k] = find_witness(primes, n_lo + k, early_exit); });
  return out;
}

CrossValidationReport cross_validate(u64 limit, const OracleTamper& tamper, std::size_t max_reported) {
  if (limit < 3) throw DomainError("cross_validate: limit must be >= 3");
  CrossValidationReport report;
  report.limit = limit;
  SieveSegment oracle = oracle_primes(3, limit + 5);
  if (tamper) tamper(oracle);

  auto check = [&](u64 i, const char* what, bool engine, bool truth, std::span<const u64> digits) {
    if (engine == truth) return;
    ++report.mismatch_total;
    if (report.mismatches.size() < max_reported)
      report.mismatches.push_back(Mismatch{i, what, engine, truth, join_digits(digits)});
  };
  run_to(limit, [&](u64 i, std::span<const u64> digits, const StepOutcome&) {
    const TupleClass c = classify_tuple(digits, i);
    const bool prime = oracle.is_prime(i);
    const bool twin = prime && oracle.is_prime(i + 2);
    const bool cousin = prime && oracle.is_prime(i + 4);
    report.primes_compared += prime;
    report.twin_leads += twin;
    report.cousin_leads += cousin;
    check(i, "prime", c.is_prime, prime, digits);
    check(i, "twin_lead", c.is_twin_lead, twin, digits);
    check(i, "cousin_lead", c.is_cousin_lead, cousin, digits);
  });
  return report;
}

}  // namespace primeclock
