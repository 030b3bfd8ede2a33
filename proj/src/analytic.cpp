#include "primeclock/analytic.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <string>

#include "primeclock/errors.hpp"

namespace primeclock {

namespace {

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      carry_ += (sum_ - t) + x;
    else
      carry_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0;
  double carry_ = 0;
};

void require_index(const PrimeSequence& primes, std::size_t n, std::size_t min_n) {
  if (n < min_n) throw DomainError("index n=" + std::to_string(n) + " below " + std::to_string(min_n));
  if (n > primes.count())
    throw std::out_of_range("prime table holds " + std::to_string(primes.count()) + " primes, need " +
                            std::to_string(n));
}

constexpr double kQuadTolerance = 1e-12;

double inv_log2(double t) {
  const double l = std::log(t);
  return 1.0 / (l * l);
}

}  // namespace

std::vector<ProductTerms> euler_products_series(const PrimeSequence& primes, std::size_t n_max) {
  require_index(primes, n_max, 2);
  std::vector<ProductTerms> out;
  out.reserve(n_max - 1);
  CompensatedSum log_c2, log_p1, log_p2;
  log_p1.add(std::log(0.5));  // p_1 = 2
  for (std::size_t n = 2; n <= n_max; ++n) {
    const double p = static_cast<double>(primes.p(n));
    log_c2.add(std::log1p(-1.0 / ((p - 1) * (p - 1))));
    log_p1.add(std::log1p(-1.0 / p));
    log_p2.add(std::log1p(-2.0 / p));

    ProductTerms t;
    t.n = n;
    t.c2_partial = std::exp(log_c2.value());
    t.prod_1 = std::exp(log_p1.value());
    t.prod_2 = std::exp(log_p2.value());
    const double log_p = std::log(p);
    t.mertens_ratio = log_p * t.prod_1;
    t.identity_residual = std::abs(t.prod_2 - 4.0 * t.c2_partial * t.prod_1 * t.prod_1) / t.prod_2;
    t.prod2_asymptotic = 4.0 * constants::twin_prime_constant * constants::exp_minus_2gamma / (log_p * log_p);
    out.push_back(t);
  }
  return out;
}

ProductTerms euler_products(const PrimeSequence& primes, std::size_t n) {
  return euler_products_series(primes, n).back();
}

double c2_partial(const PrimeSequence& primes, std::size_t n) {
  require_index(primes, n, 2);
  CompensatedSum acc;
  for (std::size_t i = 2; i <= n; ++i) {
    const double p = static_cast<double>(primes.p(i));
    acc.add(std::log1p(-1.0 / ((p - 1) * (p - 1))));
  }
  return std::exp(acc.value());
}

QuadratureResult log2_integral(double a, double b) {
  if (!(a >= 2.0) || !(b >= a)) throw DomainError("log2_integral: need 2 <= a <= b");
  QuadratureResult r;
  if (a == b) return r;
  // Geometric panels keep the integrand's dynamic range small per panel.
  using Quad = boost::math::quadrature::gauss_kronrod<double, 15>;
  double lo = a;
  while (lo < b) {
    const double hi = std::min(b, lo * 2.0);
    double err = 0;
    const double v = Quad::integrate(inv_log2, lo, hi, 20, kQuadTolerance, &err);
    r.value += v;
    r.abs_error_bound += err;
    lo = hi;
  }
  return r;
}

QuadratureResult li2(double x) {
  if (!(x >= 2.0)) throw DomainError("li2: x must be >= 2");
  return log2_integral(2.0, x);
}

double en_relative_error(const PrimeSequence& primes, std::size_t n) {
  require_index(primes, n, 3);
  const double p_prev = static_cast<double>(primes.p(n - 1));
  const double p = static_cast<double>(primes.p(n));
  const double integral = log2_integral(p_prev * p_prev, p * p).value;
  const double t_n = (p * p - p_prev * p_prev) / 2.0;
  const double log_sq = std::log(p * p);
  return (integral - 2.0 * t_n / (log_sq * log_sq)) / integral;
}

double en_upper_bound(std::uint64_t p_prev) {
  const double l4 = std::log(4.0);
  const double lp = std::log(static_cast<double>(p_prev) * static_cast<double>(p_prev));
  return (l4 * l4 + 2.0 * l4 * lp) / (lp * lp);
}

DecayResult qn_probability(double q, std::uint64_t t_n) {
  if (!(q >= 0.0 && q <= 1.0)) throw DomainError("qn_probability: Q outside [0, 1]");
  if (t_n == 0) throw DomainError("qn_probability: T_n must be >= 1");
  DecayResult r;
  if (q == 1.0) {
    r.q_n = 1.0;
    r.log10_decay = -std::numeric_limits<double>::infinity();
    return r;
  }
  const double log_decay = static_cast<double>(t_n) * std::log1p(-q);
  r.q_n = -std::expm1(log_decay);
  r.log10_decay = log_decay / std::log(10.0);
  return r;
}

double asymptotic_density(double p) {
  const double l = std::log(p);
  return constants::twin_prime_constant / (l * l);
}

DecayResult qn_asymptotic(const PrimeSequence& primes, std::size_t n) {
  require_index(primes, n, 3);
  const std::uint64_t p_prev = primes.p(n - 1);
  const std::uint64_t p = primes.p(n);
  const std::uint64_t t_n = (p * p - p_prev * p_prev) / 2;
  return qn_probability(asymptotic_density(static_cast<double>(p)), t_n);
}

double approximate_prime(std::size_t n) {
  const double x = static_cast<double>(n);
  return x * (std::log(x) + std::log(std::log(x)) - 1.0);
}

DecayResult branch_curve_at(double p, std::uint64_t gap) {
  if (gap == 0 || gap % 2 != 0) throw DomainError("branch_curve: gap must be a positive even integer");
  const double g = static_cast<double>(gap);
  const double t = g * p - g * g / 2.0;  // (p^2 - (p - g)^2) / 2
  if (!(t >= 1.0)) throw DomainError("branch_curve: empty interval");
  const double q = asymptotic_density(p);
  DecayResult r;
  const double log_decay = t * std::log1p(-q);
  r.q_n = -std::expm1(log_decay);
  r.log10_decay = log_decay / std::log(10.0);
  return r;
}

DecayResult branch_curve(std::size_t n, std::uint64_t gap) {
  if (n < 3) throw DomainError("branch_curve: n must be >= 3");
  return branch_curve_at(approximate_prime(n), gap);
}

}  // namespace primeclock
