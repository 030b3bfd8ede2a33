#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "primeclock/sieve.hpp"

namespace primeclock {

namespace constants {
inline constexpr double euler_gamma = 0.57721566490153286061;
inline constexpr double exp_minus_gamma = 0.56145948356688516982;
inline constexpr double exp_minus_2gamma = 0.31523675168719339806;
inline constexpr double exp_2gamma_over_4 = 0.79305473953136263193;
/// Hardy-Littlewood twin prime constant.
inline constexpr double twin_prime_constant = 0.66016181584686957;
}  // namespace constants

/// Per-index Euler products, all accumulated as log sums.
struct ProductTerms {
  std::size_t n = 0;
  double c2_partial = 0;     // prod_{i=2..n} (1 - 1/(p_i - 1)^2)
  double prod_1 = 0;         // prod_{i=1..n} (1 - 1/p_i)
  double prod_2 = 0;         // prod_{i=2..n} (1 - 2/p_i)
  double mertens_ratio = 0;  // log p_n * prod_1
  double identity_residual = 0;
  double prod2_asymptotic = 0;     // 4 C2 e^{-2 gamma} / log^2 p_n
};

double c2_partial(const PrimeSequence& primes, std::size_t n);
ProductTerms euler_products(const PrimeSequence& primes, std::size_t n);

/// ProductTerms for every n in [2, n_max], element k holding n = k + 2.
/// One pass, so cheap enough for whole-range property checks.
std::vector<ProductTerms> euler_products_series(const PrimeSequence& primes, std::size_t n_max);

struct QuadratureResult {
  double value = 0;
  double abs_error_bound = 0;
};

/// Integral of dt / log^2 t over [a, b], 2 <= a <= b.
QuadratureResult log2_integral(double a, double b);

/// Li_2(x) = integral of dt / log^2 t over [2, x]. DomainError for x < 2.
QuadratureResult li2(double x);

/// Relative error of 2 T_n / log^2(p_n^2) against the exact integral over
/// [p_{n-1}^2, p_n^2]. Requires n >= 3.
double en_relative_error(const PrimeSequence& primes, std::size_t n);

/// The Bertrand-postulate ceiling on E_n, written in p_{n-1} only.
double en_upper_bound(std::uint64_t p_prev);

struct DecayResult {
  double q_n = 0;          // 1 - (1 - Q)^T
  double log10_decay = 0;  // T log10(1 - Q); -infinity when Q == 1
};

/// q_n and its complement in log space, for a per-tuple probability Q and
/// T tuples. DomainError unless Q is in [0, 1] and T >= 1.
DecayResult qn_probability(double q, std::uint64_t t_n);

/// Asymptotic per-tuple twin probability C2 / log^2 p.
double asymptotic_density(double p);

/// Asymptotic mode: Q = C2 / log^2 p_n with the actual T_n of I_{n-1}.
DecayResult qn_asymptotic(const PrimeSequence& primes, std::size_t n);

/// n (log n + log log n - 1).
double approximate_prime(std::size_t n);

/// Decay along the branch of intervals whose bounding primes differ by `gap`:
/// T = (p^2 - (p - gap)^2) / 2 with p replaced by approximate_prime(n).
/// DomainError for n < 3 or an odd/zero gap.
DecayResult branch_curve(std::size_t n, std::uint64_t gap);

/// Same as branch_curve with an explicit upper prime p.
DecayResult branch_curve_at(double p, std::uint64_t gap);

}  // namespace primeclock
