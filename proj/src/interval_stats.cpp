#include "primeclock/interval_stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "primeclock/counter_engine.hpp"
#include "primeclock/errors.hpp"
#include "primeclock/parallel.hpp"

namespace primeclock {

double FrequencyCount::lower_bound() const {
  return 1.0 - 2.0 * static_cast<double>(nu + 1) / static_cast<double>(t_n);
}

double FrequencyCount::upper_bound() const {
  return 1.0 - 2.0 * static_cast<double>(nu) / static_cast<double>(t_n);
}

bool FrequencyCount::within_bracket() const {
  // t_n - 2(nu+1) <= count <= t_n - 2 nu, guarding the lower side against underflow
  const bool upper_ok = count + 2 * nu <= t_n;
  const bool lower_ok = count + 2 * (nu + 1) >= t_n;
  return upper_ok && lower_ok;
}

u64 digit_of(u64 x, u64 p) {
  const u64 neg = (p - x % p) % p;
  return (neg * ((p + 1) / 2)) % p;
}

u64 count_odd_residue(u64 lo, u64 hi, u64 a, u64 p) {
  if (hi <= lo) return 0;
  a %= p;
  const u64 m = 2 * p;
  const u64 c = (a % 2 == 1) ? a : a + p;  // odd representative mod 2p
  auto below = [&](u64 bound) { return (bound + m - c - 1) / m; };
  return below(hi) - below(lo);
}

namespace {

void require_interval(const PrimeSequence& primes, std::size_t n) {
  if (n < 3) throw DomainError("interval index n must be >= 3, got " + std::to_string(n));
  if (n > primes.count())
    throw std::out_of_range("prime table too short for n=" + std::to_string(n));
  const u64 p = primes.p(n);
  if (p > 0xFFFFFFFFull) throw CapacityError("p_n^2 overflows 64 bits");
}

std::vector<double> log_independence_prefix(const PrimeSequence& primes, std::size_t n_max) {
  // prefix[n] = sum_{j=2..n} log(1 - 2/p_j), compensated
  std::vector<double> prefix(n_max + 1, 0.0);
  double sum = 0, carry = 0;
  for (std::size_t j = 2; j <= n_max; ++j) {
    const double x = std::log1p(-2.0 / static_cast<double>(primes.p(j)));
    const double t = sum + x;
    carry += (std::abs(sum) >= std::abs(x)) ? (sum - t) + x : (x - t) + sum;
    sum = t;
    prefix[j] = sum + carry;
  }
  return prefix;
}

FrequencyCount make_freq(u64 lo, u64 hi, u64 t_n, u64 p) {
  FrequencyCount f;
  f.t_n = t_n;
  f.nu = t_n / p;
  f.r = t_n % p;
  const u64 zero = count_odd_residue(lo, hi, 0, p);
  const u64 one = count_odd_residue(lo, hi, p - 2, p);  // x + 2 = 0 (mod p)
  f.count = t_n - zero - one;
  return f;
}

void finish_record(IntervalRecord& rec, double log_product) {
  const double t = static_cast<double>(rec.t_n);
  rec.q_twin = static_cast<double>(rec.twin_count) / t;
  rec.q_cousin = static_cast<double>(rec.cousin_count) / t;
  const double product = std::exp(log_product);
  rec.theta_twin = rec.q_twin / product;
  rec.theta_cousin = rec.q_cousin / product;
}

IntervalRecord oracle_record(const PrimeSequence& primes, std::size_t n, std::size_t digit_cap,
                             double log_product) {
  IntervalRecord rec;
  rec.n = n;
  rec.p_lo = primes.p(n - 1);
  rec.p_hi = primes.p(n);
  const u64 lo = rec.p_lo * rec.p_lo;
  const u64 hi = rec.p_hi * rec.p_hi;
  rec.t_n = (hi - lo) / 2;

  // Leads sit in [lo, hi); partners may reach hi + 2.
  const SieveSegment seg = oracle_primes(lo, hi + 4, primes.values().subspan(0, n));
  const std::size_t slots = static_cast<std::size_t>(rec.t_n);
  const auto& f = seg.flags;
  for (std::size_t k = 0; k < slots; ++k) {
    if (!f[k]) continue;
    if (f[k + 1]) ++rec.twin_count;
    if (f[k + 2]) ++rec.cousin_count;
  }

  const std::size_t j_max = std::min<std::size_t>(n, digit_cap == kAllDigits ? n : digit_cap + 1);
  for (std::size_t j = 2; j <= j_max; ++j) rec.digit_freq.push_back(make_freq(lo, hi, rec.t_n, primes.p(j)));
  finish_record(rec, log_product);
  return rec;
}

std::vector<IntervalRecord> counter_records(const PrimeSequence& primes, std::size_t n_lo, std::size_t n_hi,
                                            std::size_t digit_cap, const std::vector<double>& log_products) {
  if (n_hi > kCounterModeMaxN)
    throw CapacityError("counter mode is limited to n <= " + std::to_string(kCounterModeMaxN));
  std::vector<IntervalRecord> out;
  out.reserve(n_hi - n_lo + 1);
  for (std::size_t n = n_lo; n <= n_hi; ++n) {
    IntervalRecord rec;
    rec.n = n;
    rec.p_lo = primes.p(n - 1);
    rec.p_hi = primes.p(n);
    rec.t_n = (rec.p_hi * rec.p_hi - rec.p_lo * rec.p_lo) / 2;
    const std::size_t j_max = std::min<std::size_t>(n, digit_cap == kAllDigits ? n : digit_cap + 1);
    for (std::size_t j = 2; j <= j_max; ++j) {
      FrequencyCount f;
      f.t_n = rec.t_n;
      f.nu = rec.t_n / primes.p(j);
      f.r = rec.t_n % primes.p(j);
      rec.digit_freq.push_back(f);
    }
    out.push_back(std::move(rec));
  }

  const u64 first = out.front().p_lo * out.front().p_lo;
  const u64 last = out.back().p_hi * out.back().p_hi;
  CounterEngine engine;
  while (engine.index() < first) engine.step();
  std::size_t slot = 0;
  for (; engine.index() < last; engine.step()) {
    const u64 i = engine.index();
    while (i >= out[slot].p_hi * out[slot].p_hi) ++slot;
    IntervalRecord& rec = out[slot];
    const auto digits = engine.digits();
    if (digits.size() != rec.n - 1) throw std::logic_error("counter mode: tuple length mismatch");
    const TupleClass c = classify_tuple(digits, i);
    if (c.is_twin_lead) ++rec.twin_count;
    if (c.is_cousin_lead) ++rec.cousin_count;
    for (std::size_t k = 0; k < rec.digit_freq.size(); ++k)
      if (digits[k] > 1) ++rec.digit_freq[k].count;
  }
  for (auto& rec : out) finish_record(rec, log_products[rec.n]);
  return out;
}

}  // namespace

double independence_product(const PrimeSequence& primes, std::size_t n) {
  return std::exp(log_independence_prefix(primes, n)[n]);
}

std::vector<IntervalRecord> scan_intervals(const PrimeSequence& primes, std::size_t n_lo, std::size_t n_hi,
                                           ScanMode mode, std::size_t digit_cap, unsigned jobs) {
  if (n_hi < n_lo) throw DomainError("scan_intervals: empty range");
  require_interval(primes, n_lo);
  require_interval(primes, n_hi);
  const std::vector<double> log_products = log_independence_prefix(primes, n_hi);
  if (mode == ScanMode::counter) return counter_records(primes, n_lo, n_hi, digit_cap, log_products);

  std::vector<IntervalRecord> out(n_hi - n_lo + 1);
  parallel_for(out.size(), jobs, [&](std::size_t k) {
    const std::size_t n = n_lo + k;
    out[k] = oracle_record(primes, n, digit_cap, log_products[n]);
  });
  return out;
}

IntervalRecord scan_interval(const PrimeSequence& primes, std::size_t n, ScanMode mode, std::size_t digit_cap) {
  return scan_intervals(primes, n, n, mode, digit_cap, 1).front();
}

FrequencyCount q_freq(const PrimeSequence& primes, std::size_t n, std::size_t j) {
  require_interval(primes, n);
  if (j < 2 || j > n) throw DomainError("q_freq: need 2 <= j <= n");
  const u64 lo = primes.p(n - 1) * primes.p(n - 1);
  const u64 hi = primes.p(n) * primes.p(n);
  return make_freq(lo, hi, (hi - lo) / 2, primes.p(j));
}

std::vector<u64> digit_occupancy(const PrimeSequence& primes, std::size_t n) {
  require_interval(primes, n);
  const u64 lo = primes.p(n - 1) * primes.p(n - 1);
  const u64 hi = primes.p(n) * primes.p(n);
  std::vector<u64> occ(primes.p(n), 0);
  for (std::size_t j = 2; j <= n; ++j) {
    const u64 p = primes.p(j);
    // digit v  <=>  x = -2v (mod p)
    for (u64 v = 0; v < p; ++v) occ[v] += count_odd_residue(lo, hi, (p - (2 * v) % p) % p, p);
  }
  return occ;
}

ThetaSeries theta_series(const std::vector<IntervalRecord>& records, PairKind kind, std::size_t burn_in) {
  ThetaSeries s;
  if (records.empty()) return s;
  s.n_lo = records.front().n;
  double sum = 0;
  for (const auto& rec : records) {
    const double v = kind == PairKind::twin ? rec.theta_twin : rec.theta_cousin;
    s.values.push_back(v);
    if (rec.n > burn_in) {
      sum += v;
      ++s.mean_count;
    }
  }
  s.mean = s.mean_count ? sum / static_cast<double>(s.mean_count) : 0.0;
  return s;
}

ThetaSeries theta_series(const PrimeSequence& primes, std::size_t n_lo, std::size_t n_hi, PairKind kind,
                         std::size_t burn_in, unsigned jobs) {
  if (burn_in >= n_hi) throw DomainError("theta_series: burn-in leaves no entries");
  return theta_series(scan_intervals(primes, n_lo, n_hi, ScanMode::oracle, 0, jobs), kind, burn_in);
}

}  // namespace primeclock
