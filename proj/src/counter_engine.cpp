#include "primeclock/counter_engine.hpp"

#include <stdexcept>

#include "primeclock/errors.hpp"

namespace primeclock {

using u128 = unsigned __int128;

PrimeTable::PrimeTable(std::vector<u64> primes) {
  primes_.reserve(primes.size());
  for (u64 p : primes) append(p);
}

void PrimeTable::append(u64 p) {
  if (p % 2 == 0) throw std::invalid_argument("PrimeTable: even entry " + std::to_string(p));
  if (!primes_.empty() && p <= primes_.back())
    throw std::invalid_argument("PrimeTable: entries must increase, got " + std::to_string(p));
  primes_.push_back(p);
}

const char* to_string(StepKind kind) {
  switch (kind) {
    case StepKind::prime:
      return "prime";
    case StepKind::composite:
      return "composite";
    case StepKind::composite_extended:
      return "composite_extended";
  }
  return "?";
}

CounterEngine::CounterEngine() : digits_{3} { table_.append(3); }

StepOutcome CounterEngine::step() {
  if (i_ >= kMaxEngineIndex)
    throw CapacityError("counter engine: index " + std::to_string(i_) + " at capacity");
  i_ += 2;

  std::size_t zeros = 0;
  std::size_t last_zero = 0;
  const std::size_t l = digits_.size();
  for (std::size_t j = 0; j < l; ++j) {
    u64& d = digits_[j];
    // The seed digit 3 is congruent to 0 mod 3, so "minus one" lands on 2 either way.
    d = (d == 0) ? table_[j] - 1 : (d - 1) % table_[j];
    if (d == 0) {
      ++zeros;
      last_zero = j;
    }
  }

  StepOutcome out;
  if (zeros == 0) {
    table_.append(i_);
    out.kind = StepKind::prime;
    out.new_prime = i_;
  } else if (zeros == 1 && last_zero == l - 1) {
    // i is the square of the last tracked prime; start tracking the next one.
    if (table_.size() <= l)
      throw std::logic_error("counter engine: next prime unknown at i=" + std::to_string(i_));
    const u64 p = table_[l];
    const u64 digit = p - ((i_ - p) / 2) % p;
    digits_.push_back(digit);
    out.kind = StepKind::composite_extended;
    out.appended_digit = digit;
  } else {
    out.kind = StepKind::composite;
  }
  return out;
}

TupleClass CounterEngine::classify() const { return classify_tuple(digits_, i_); }

TupleClass classify_tuple(std::span<const u64> digits, u64 i) {
  TupleClass c{true, true, true};
  for (u64 d : digits) {
    if (d == 0) {
      c.is_prime = false;
      c.is_twin_lead = false;
      c.is_cousin_lead = false;
      break;
    }
    if (d == 1) c.is_twin_lead = false;
    if (d == 2) c.is_cousin_lead = false;
  }
  if (i == 3) c.is_prime = true;
  return c;
}

PrimeTable run_to(u64 limit, const StepSink& sink) {
  if (limit < 3) throw DomainError("run_to: limit must be >= 3");
  if (limit > kMaxEngineIndex) throw CapacityError("run_to: limit beyond engine capacity");
  CounterEngine engine;
  if (sink) {
    StepOutcome seed;
    seed.kind = StepKind::prime;
    seed.new_prime = 3;
    sink(engine.index(), engine.digits(), seed);
  }
  while (engine.index() + 2 <= limit) {
    StepOutcome out = engine.step();
    if (sink) sink(engine.index(), engine.digits(), out);
  }
  return engine.table();
}

namespace {

u64 inverse_mod(u64 a, u64 m) {
  // extended Euclid on signed 128-bit to stay exact for 64-bit moduli
  __int128 t = 0, new_t = 1;
  __int128 r = m, new_r = a % m;
  while (new_r != 0) {
    __int128 q = r / new_r;
    __int128 tmp = t - q * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - q * new_r;
    r = new_r;
    new_r = tmp;
  }
  if (r != 1) throw std::invalid_argument("inverse_mod: not invertible");
  if (t < 0) t += m;
  return static_cast<u64>(t);
}

u64 checked_square(u64 p) {
  u64 sq;
  if (__builtin_mul_overflow(p, p, &sq)) throw CapacityError("square of " + std::to_string(p) + " overflows");
  return sq;
}

}  // namespace

std::optional<u64> reconstruct(std::span<const u64> digits, const PrimeTable& table) {
  const std::size_t l = digits.size();
  if (l == 0) throw std::invalid_argument("reconstruct: empty tuple");
  if (table.size() < l) throw std::invalid_argument("reconstruct: table shorter than tuple");
  for (std::size_t j = 0; j < l; ++j)
    if (digits[j] >= table[j]) throw std::invalid_argument("reconstruct: digit out of range");

  const u64 lo = (l == 1) ? 3 : checked_square(table[l - 2]);
  const u64 hi = checked_square(table[l - 1]);

  // x = 1 (mod 2), then fold in x = -2*d (mod p) while the modulus still fits.
  u128 modulus = 2;
  u128 residue = 1;
  std::size_t used = 0;
  for (; used < l && modulus < hi; ++used) {
    const u64 p = table[used];
    const u64 target = (p - (2 * (digits[used] % p)) % p) % p;
    const u64 r_mod_p = static_cast<u64>(residue % p);
    const u64 m_inv = inverse_mod(static_cast<u64>(modulus % p), p);
    const u64 diff = (target + p - r_mod_p) % p;
    const u64 t = static_cast<u64>((static_cast<u128>(diff) * m_inv) % p);
    residue += modulus * t;
    modulus *= p;
  }

  // Smallest member of the class that is >= lo.
  const u128 offset = (residue + modulus - (lo % modulus)) % modulus;
  const u128 candidate = static_cast<u128>(lo) + offset;
  if (candidate >= hi) return std::nullopt;
  const u64 x = static_cast<u64>(candidate);
  for (std::size_t j = used; j < l; ++j) {
    const u64 p = table[j];
    if ((x % p + 2 * (digits[j] % p)) % p != 0) return std::nullopt;
  }
  return x;
}

std::string join_digits(std::span<const u64> digits) {
  std::string s;
  for (std::size_t j = 0; j < digits.size(); ++j) {
    if (j) s += ';';
    s += std::to_string(digits[j]);
  }
  return s;
}

}  // namespace primeclock
