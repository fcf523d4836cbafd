#pragma once

// Data behind the four figures. The first three are exact (no Monte Carlo);
// the asymptotic sweep is seeded and records its seed in a comment line.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pmh/beta_exact.hpp"
#include "pmh/errors.hpp"
#include "pmh/experiments.hpp"
#include "pmh/measures.hpp"
#include "pmh/measures_io.hpp"
#include "pmh/predictive.hpp"
#include "pmh/scoring.hpp"
#include "pmh/table.hpp"

namespace pmh {

inline const std::vector<std::string>& figure_ids() {
  static const std::vector<std::string> ids{"moment-insuff", "scoring-regret", "bayes-plugin-gap", "asymptotic"};
  return ids;
}

struct FigureConfig {
  std::optional<std::uint64_t> seed;  // required by the asymptotic figure
  std::uint64_t replications = 200;
  unsigned threads = 0;
};

namespace detail {

struct NamedPrior {
  std::string name;
  ExactMeasure measure;
};

inline std::vector<NamedPrior> figure_priors() {
  return {{"jeffreys", ExactMeasure::jeffreys()},
          {"uniform", ExactMeasure::uniform()},
          {"beta:2,2", ExactMeasure::beta(Rational(2), Rational(2))}};
}

inline const std::vector<std::uint64_t>& figure_sample_sizes() {
  static const std::vector<std::uint64_t> ns{5, 10, 20, 50, 100};
  return ns;
}

inline const Rational& figure_ratio() {
  static const Rational ratio(2, 5);
  return ratio;
}

// Mean grid 0.05, 0.10, ..., 0.95 as exact rationals.
inline Table moment_insufficiency() {
  Table t({"m", "k", "c", "bayes", "lo", "hi"});
  for (unsigned i = 1; i <= 19; ++i) {
    const Rational m(i, 20);
    for (unsigned k : {2U, 4U, 8U}) {
      const auto range = predictive_range(m, k);
      for (unsigned c : {1U, 2U, 5U, 20U, 100U}) {
        const auto beta = ExactMeasure::beta(Rational(c) * m, Rational(c) * (Rational(1) - m));
        t.add_row({to_exact_string(m), std::to_string(k), std::to_string(c), format_sig(run_prob(beta, k)),
                   format_sig(range.lo), format_sig(range.hi)});
      }
    }
  }
  return t;
}

inline Table scoring_regret() {
  Table t({"prior", "n", "s", "s_over_n", "k", "p_bayes", "p_plugin", "kl_regret", "brier_regret", "variance"});
  std::vector<unsigned> ks;
  for (unsigned k = 2; k <= 10; ++k) ks.push_back(k);
  for (const auto& prior : figure_priors()) {
    for (const auto& r : regret_sweep(prior.measure, figure_sample_sizes(), ks, figure_ratio())) {
      t.add_row({prior.name, std::to_string(r.n), std::to_string(r.s), format_sig(r.s_over_n), std::to_string(r.k),
                 format_sig(r.p_bayes), format_sig(r.p_plugin), format_sig(r.kl_regret),
                 format_sig(r.brier_regret), format_sig(r.variance)});
    }
  }
  return t;
}

inline Table bayes_plugin_gap() {
  Table t({"prior", "n", "s", "k", "bayes", "plugin", "gap", "relative_gap", "variance", "upper_bound"});
  for (const auto& prior : figure_priors()) {
    for (auto n : figure_sample_sizes()) {
      const std::uint64_t s = successes_for_ratio(n, figure_ratio());
      const ExactMeasure post = posterior(prior.measure, n, s);
      for (unsigned k = 2; k <= 10; ++k) {
        const auto g = gap_report(post, k);
        t.add_row({prior.name, std::to_string(n), std::to_string(s), std::to_string(k), format_sig(g.bayes),
                   format_sig(g.plugin), format_sig(g.gap), format_sig(Rational(g.gap / g.bayes)),
                   format_sig(g.variance), format_sig(g.upper_bound)});
      }
    }
  }
  return t;
}

inline Table asymptotic(const FigureConfig& config) {
  if (!config.seed) throw DomainError("the asymptotic figure needs an explicit seed");
  const std::vector<std::uint64_t> n_grid{10, 20, 50, 100, 200, 500, 1000, 2000, 5000, 10000};
  Table t({"panel", "theta0", "c", "n", "k", "mean_gap", "se", "mean_relative_gap", "relative_se"});
  t.comments.push_back("seed=" + std::to_string(*config.seed) +
                       " replications=" + std::to_string(config.replications) + " prior=jeffreys");

  ExperimentSpec spec;
  spec.theta0_list = {0.3, 0.5, 0.7};
  spec.n_grid = n_grid;
  spec.replications = config.replications;
  spec.master_seed = *config.seed;
  spec.threads = config.threads;

  auto emit = [&](const std::string& panel, const std::string& c, const std::vector<ResultRow>& rows) {
    for (const auto& r : rows) {
      t.add_row({panel, format_sig(r.theta0), c, std::to_string(r.n), std::to_string(r.k), format_sig(r.mean_gap),
                 format_sig(r.se), format_sig(r.mean_relative_gap), format_sig(r.relative_se)});
    }
  };

  spec.horizons = FixedHorizons{{2, 4, 8}};
  emit("fixed", "", discrepancy_experiment(spec));
  for (double c : {0.5, 1.0, 2.0}) {
    spec.horizons = SqrtHorizon{c};
    emit("growing", format_sig(c), growing_horizon_experiment(spec));
  }
  return t;
}

}  // namespace detail

inline Table emit_figure_data(std::string_view id, const FigureConfig& config = {}) {
  if (id == "moment-insuff") return detail::moment_insufficiency();
  if (id == "scoring-regret") return detail::scoring_regret();
  if (id == "bayes-plugin-gap") return detail::bayes_plugin_gap();
  if (id == "asymptotic") return detail::asymptotic(config);
  throw UnknownFigure("unknown figure '" + std::string(id) +
                      "' (expected moment-insuff, scoring-regret, bayes-plugin-gap or asymptotic)");
}

}  // namespace pmh
