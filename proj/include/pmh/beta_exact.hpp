#pragma once

// Exact Beta-Bernoulli predictives for half-integer parameters, in
// particular the Jeffreys prior Beta(1/2, 1/2) whose one-step predictive
// is Hill's rule (S_n + 1/2) / (n + 1).
//
// Parameters are carried doubled (alpha2 = 2 alpha) so every factor of a
// rising factorial is a ratio of integers; nothing here touches floating
// point.

#include <cstdint>
#include <string>
#include <vector>

#include "pmh/errors.hpp"
#include "pmh/rational.hpp"

namespace pmh {

struct BetaParams {
  std::uint64_t alpha2;  // 2 * alpha
  std::uint64_t beta2;   // 2 * beta

  BetaParams(std::uint64_t doubled_alpha, std::uint64_t doubled_beta)
      : alpha2(doubled_alpha), beta2(doubled_beta) {
    if (alpha2 < 1 || beta2 < 1) throw DomainError("doubled Beta parameters must be >= 1");
  }

  static BetaParams jeffreys() { return {1, 1}; }
  static BetaParams uniform() { return {2, 2}; }

  Rational alpha() const { return Rational(alpha2, 2); }
  Rational beta() const { return Rational(beta2, 2); }
};

namespace detail {

inline void check_counts(std::uint64_t n, std::uint64_t s) {
  if (s > n) throw InvalidCounts("success count s=" + std::to_string(s) +
                                 " exceeds observation count n=" + std::to_string(n));
}

// prod_{i<k} (top2 + 2i) / (bottom2 + 2i), i.e. (top/2)_k / (bottom/2)_k.
inline Rational doubled_rising_ratio(std::uint64_t top2, std::uint64_t bottom2, unsigned k) {
  BigInt num = 1;
  BigInt den = 1;
  for (unsigned i = 0; i < k; ++i) {
    num *= BigInt(top2) + 2 * i;
    den *= BigInt(bottom2) + 2 * i;
  }
  return Rational(num, den);
}

}  // namespace detail

// x (x+1) ... (x+k-1); the empty product for k = 0.
template <Scalar T>
T rising_factorial(const T& x, unsigned k) {
  T product{1};
  for (unsigned i = 0; i < k; ++i) product *= x + T(i);
  return product;
}

// prod_{i<k} (x + i) / (y + i) = (x)_k / (y)_k, accumulated factor by
// factor so double mode neither overflows nor underflows for long runs.
template <Scalar T>
T rising_ratio(const T& x, const T& y, unsigned k) {
  T product{1};
  for (unsigned i = 0; i < k; ++i) product *= (x + T(i)) / (y + T(i));
  return product;
}

inline Rational hill_one_step(std::uint64_t n, std::uint64_t s) {
  detail::check_counts(n, s);
  return Rational(BigInt(2 * s + 1), BigInt(2 * n + 2));
}

// (b_n)_k / (N_n)_k with b_n = n - s + 1/2 and N_n = n + 1.
inline Rational hill_run_prob(std::uint64_t n, std::uint64_t s, unsigned k) {
  detail::check_counts(n, s);
  if (k < 1) throw DomainError("run length must be at least 1");
  return detail::doubled_rising_ratio(2 * (n - s) + 1, 2 * (n + 1), k);
}

// j-th moment of the Beta(alpha + s, beta + n - s) posterior.
inline Rational beta_moment(const BetaParams& params, std::uint64_t n, std::uint64_t s, unsigned j) {
  detail::check_counts(n, s);
  return detail::doubled_rising_ratio(params.alpha2 + 2 * s, params.alpha2 + params.beta2 + 2 * n, j);
}

// (a+s)(b+n-s) / ((a+b+n)^2 (a+b+n+1)), written in doubled parameters.
inline Rational beta_posterior_variance(const BetaParams& params, std::uint64_t n, std::uint64_t s) {
  detail::check_counts(n, s);
  const BigInt a2 = BigInt(params.alpha2) + 2 * s;
  const BigInt b2 = BigInt(params.beta2) + 2 * (n - s);
  const BigInt t2 = a2 + b2;
  return Rational(2 * a2 * b2, t2 * t2 * (t2 + 2));
}

struct ComparisonRow {
  unsigned k;
  Rational plugin;        // (1 - m_n)^k
  Rational bayes;         // (b_n)_k / (N_n)_k
  Rational relative_gap;  // (bayes - plugin) / bayes
};

// Plug-in versus Jeffreys-Bayes k-step run probabilities for k = 2..k_max.
inline std::vector<ComparisonRow> comparison_table(std::uint64_t n, std::uint64_t s, unsigned k_max) {
  detail::check_counts(n, s);
  if (k_max < 2) throw DomainError("k_max must be at least 2");
  const Rational miss = Rational(1) - hill_one_step(n, s);
  std::vector<ComparisonRow> rows;
  for (unsigned k = 2; k <= k_max; ++k) {
    const Rational plugin = ipow(miss, k);
    const Rational bayes = hill_run_prob(n, s, k);
    rows.push_back({k, plugin, bayes, Rational((bayes - plugin) / bayes)});
  }
  return rows;
}

struct RenderedComparisonRow {
  std::string k;
  std::string plugin;
  std::string bayes;
  std::string relative_gap;
};

// Three decimals for probabilities and a one-decimal percentage, rounded
// half-to-even from the exact values; exact mode prints the fractions.
inline RenderedComparisonRow render(const ComparisonRow& row, bool exact) {
  if (exact) {
    return {std::to_string(row.k), to_fraction_string(row.plugin), to_fraction_string(row.bayes),
            to_fraction_string(row.relative_gap)};
  }
  return {std::to_string(row.k), to_fixed(row.plugin, 3), to_fixed(row.bayes, 3),
          to_fixed(Rational(row.relative_gap * 100), 1) + "%"};
}

}  // namespace pmh
