#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace primeclock {

using u64 = std::uint64_t;

/// Ordered odd primes found by the engine: entry k is the (k+2)-th prime,
/// so entry 0 is 3. The prime 2 is not part of the engine's universe.
class PrimeTable {
 public:
  PrimeTable() = default;
  explicit PrimeTable(std::vector<u64> primes);

  /// Throws std::invalid_argument unless p is odd and larger than the last entry.
  void append(u64 p);

  std::size_t size() const { return primes_.size(); }
  bool empty() const { return primes_.empty(); }
  u64 operator[](std::size_t k) const { return primes_[k]; }
  u64 back() const { return primes_.back(); }
  std::span<const u64> values() const { return primes_; }

  friend bool operator==(const PrimeTable&, const PrimeTable&) = default;

 private:
  std::vector<u64> primes_;
};

enum class StepKind { prime, composite, composite_extended };

const char* to_string(StepKind kind);

struct StepOutcome {
  StepKind kind = StepKind::composite;
  std::optional<u64> new_prime;       // set iff kind == prime
  std::optional<u64> appended_digit;  // set iff kind == composite_extended
};

struct TupleClass {
  bool is_prime = false;
  bool is_twin_lead = false;    // (i, i+2) both prime
  bool is_cousin_lead = false;  // (i, i+4) both prime
};

/// Largest odd index the engine will step to. Keeps i+4 representable so
/// that cousin classification never wraps.
inline constexpr u64 kMaxEngineIndex = ~u64{0} - 6;

/// Incremental counter-vector prime engine over odd integers.
///
/// Digit j counts down modulo the table's j-th prime and reaches 0 exactly
/// when that prime divides the current index. The tuple grows by one digit
/// at each square of a table prime. For every state with i > 3 the digits
/// satisfy i + 2*digit(j) = 0 (mod table[j]).
class CounterEngine {
 public:
  /// Seed state: i = 3, tuple (3), table (3).
  CounterEngine();

  u64 index() const { return i_; }
  std::span<const u64> digits() const { return digits_; }
  std::size_t length() const { return digits_.size(); }
  const PrimeTable& table() const { return table_; }

  /// Advances to i+2. Throws CapacityError past kMaxEngineIndex.
  StepOutcome step();

  TupleClass classify() const;

 private:
  u64 i_ = 3;
  std::vector<u64> digits_;
  PrimeTable table_;
};

/// Prime, twin-lead and cousin-lead status of the tuple at odd index i.
/// i == 3 is the seed: reported prime regardless of its stored digit.
TupleClass classify_tuple(std::span<const u64> digits, u64 i);

using StepSink = std::function<void(u64 i, std::span<const u64> digits, const StepOutcome&)>;

/// Steps a fresh engine from 3 through `limit` (inclusive, rounded down to
/// odd). The sink, if any, sees every visited index including the seed.
PrimeTable run_to(u64 limit, const StepSink& sink = {});

/// Inverts the digit map on I_l = [P(l-1)^2, P(l)^2) (I_1 = [3, 9)).
/// Returns nullopt when the residue class has no odd member in I_l.
/// Throws std::invalid_argument for out-of-range digits or a short table.
std::optional<u64> reconstruct(std::span<const u64> digits, const PrimeTable& table);

/// Semicolon-joined digits, as used by the trace CSV.
std::string join_digits(std::span<const u64> digits);

}  // namespace primeclock
