#pragma once

// Expected-score regret of the plug-in predictive relative to the Bayes
// predictive for the binary event Y = 1[next k observations all zero].
// Under the log score the regret is D(Bern(p_B) || Bern(p_P)) in nats;
// under the Brier score it is (p_B - p_P)^2.

#include <cmath>
#include <cstdint>
#include <vector>

#include "pmh/errors.hpp"
#include "pmh/kl_geometry.hpp"
#include "pmh/measures.hpp"
#include "pmh/predictive.hpp"

namespace pmh {

inline double log_score_regret(double p_bayes, double p_plugin) {
  if (!(p_bayes > 0.0 && p_bayes < 1.0) || !(p_plugin > 0.0 && p_plugin < 1.0)) {
    throw DomainError("log-score regret needs both probabilities in (0,1)");
  }
  return bernoulli_kl(p_bayes, p_plugin);
}

inline double brier_regret(double p_bayes, double p_plugin) {
  if (!(p_bayes >= 0.0 && p_bayes <= 1.0) || !(p_plugin >= 0.0 && p_plugin <= 1.0)) {
    throw DomainError("Brier regret needs both probabilities in [0,1]");
  }
  const double d = p_bayes - p_plugin;
  return d * d;
}

struct RegretRow {
  std::uint64_t n;
  std::uint64_t s;
  double s_over_n;
  unsigned k;
  double p_bayes;
  double p_plugin;
  double kl_regret;
  double brier_regret;
  double variance;
};

// s = round(ratio * n), halves rounded up.
inline std::uint64_t successes_for_ratio(std::uint64_t n, const Rational& ratio) {
  const Rational target = ratio * Rational(n) + Rational(1, 2);
  const BigInt& num = boost::multiprecision::numerator(target);
  const BigInt& den = boost::multiprecision::denominator(target);
  const BigInt floored = detail::floor_div(num, den);
  if (floored < 0 || floored > n) throw DomainError("success ratio must lie in [0,1]");
  return floored.convert_to<std::uint64_t>();
}

// Exact predictives under the posterior, regrets evaluated in double.
inline RegretRow regret_row(const ExactMeasure& prior, std::uint64_t n, std::uint64_t s, unsigned k) {
  const ExactMeasure post = posterior(prior, n, s);
  const auto report = gap_report(post, k);
  const double pb = to_double(report.bayes);
  const double pp = to_double(report.plugin);
  return {n,
          s,
          n == 0 ? 0.0 : static_cast<double>(s) / static_cast<double>(n),
          k,
          pb,
          pp,
          log_score_regret(pb, pp),
          brier_regret(pb, pp),
          to_double(report.variance)};
}

inline std::vector<RegretRow> regret_sweep(const ExactMeasure& prior, const std::vector<std::uint64_t>& n_list,
                                           const std::vector<unsigned>& k_list, const Rational& ratio) {
  std::vector<RegretRow> rows;
  for (auto n : n_list) {
    const std::uint64_t s = successes_for_ratio(n, ratio);
    for (auto k : k_list) rows.push_back(regret_row(prior, n, s, k));
  }
  return rows;
}

}  // namespace pmh
