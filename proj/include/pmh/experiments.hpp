#pragma once

// Frequentist sweeps of the Bayes / plug-in discrepancy: data are i.i.d.
// Bernoulli(theta_0), inference uses the prior, and each replicate path is
// scored with the exact gap E[(1-theta)^k | F_n] - (1 - m_n)^k.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <variant>
#include <vector>

#include "pmh/errors.hpp"
#include "pmh/measures.hpp"
#include "pmh/parallel.hpp"
#include "pmh/predictive.hpp"
#include "pmh/rng.hpp"

namespace pmh {

struct FixedHorizons {
  std::vector<unsigned> ks;
};

// k_n = max(2, round(c sqrt(n))).
struct SqrtHorizon {
  double c;
};

// k_n = max(2, round(c log(n))).
struct LogHorizon {
  double c = 1.0;
};

using HorizonRule = std::variant<FixedHorizons, SqrtHorizon, LogHorizon>;

inline std::vector<unsigned> horizons_at(const HorizonRule& rule, std::uint64_t n) {
  auto floor_two = [](double k) { return std::max(2U, static_cast<unsigned>(std::lround(k))); };
  return std::visit(Overloaded{
                        [](const FixedHorizons& f) { return f.ks; },
                        [&](const SqrtHorizon& s) {
                          return std::vector<unsigned>{floor_two(s.c * std::sqrt(static_cast<double>(n)))};
                        },
                        [&](const LogHorizon& l) {
                          return std::vector<unsigned>{
                              floor_two(n == 0 ? 0.0 : l.c * std::log(static_cast<double>(n)))};
                        },
                    },
                    rule);
}

struct ExperimentSpec {
  RealMeasure prior = RealMeasure::jeffreys();
  std::vector<double> theta0_list;
  std::vector<std::uint64_t> n_grid;
  HorizonRule horizons = FixedHorizons{{2}};
  std::uint64_t replications = 1;
  std::uint64_t master_seed = 0;
  unsigned threads = 0;

  void validate() const {
    if (replications < 1) throw DomainError("replications must be at least 1");
    if (theta0_list.empty() || n_grid.empty()) throw DomainError("experiment grids must be non-empty");
    if (!std::is_sorted(theta0_list.begin(), theta0_list.end()) ||
        !std::is_sorted(n_grid.begin(), n_grid.end())) {
      throw DomainError("experiment grids must be sorted");
    }
    for (double t : theta0_list) {
      if (!(t > 0.0 && t < 1.0)) throw DomainError("theta0 values must lie in (0,1)");
    }
    if (const auto* f = std::get_if<FixedHorizons>(&horizons)) {
      if (f->ks.empty()) throw DomainError("fixed horizon list is empty");
      for (unsigned k : f->ks) {
        if (k < 1) throw DomainError("horizons must be at least 1");
      }
    }
    if (const auto* s = std::get_if<SqrtHorizon>(&horizons); s != nullptr && !(s->c >= 0.0)) {
      throw DomainError("horizon scale c must be non-negative");
    }
    if (const auto* l = std::get_if<LogHorizon>(&horizons); l != nullptr && !(l->c >= 0.0)) {
      throw DomainError("horizon scale c must be non-negative");
    }
  }
};

struct ResultRow {
  double theta0;
  std::uint64_t n;
  unsigned k;
  double mean_gap;
  double se;
  double mean_relative_gap;  // mean of (bayes - plugin) / bayes
  double relative_se;
  double mean_variance;      // mean posterior variance across paths
};

namespace detail {

struct PathSample {
  double gap;
  double relative_gap;
  double variance;
};

inline void mean_and_se(const std::vector<double>& xs, double& mean_out, double& se_out) {
  const double R = static_cast<double>(xs.size());
  double sum = 0.0;
  for (double x : xs) sum += x;
  mean_out = sum / R;
  if (xs.size() < 2) {
    se_out = 0.0;
    return;
  }
  double ss = 0.0;
  for (double x : xs) ss += (x - mean_out) * (x - mean_out);
  se_out = std::sqrt(ss / (R - 1.0) / R);
}

}  // namespace detail

// Per-path exact gap for the posterior after (n, s).
inline GapReport<double> path_gap(const RealMeasure& prior, std::uint64_t n, std::uint64_t s, unsigned k) {
  return gap_report(posterior(prior, n, s), k);
}

// Rows sorted by (theta0, n, k). Replicate r of theta0 index t draws from
// stream (t, r) of the master seed.
inline std::vector<ResultRow> run_sweep(const ExperimentSpec& spec) {
  spec.validate();
  const std::uint64_t R = spec.replications;
  std::vector<ResultRow> rows;
  for (std::size_t t = 0; t < spec.theta0_list.size(); ++t) {
    const double theta0 = spec.theta0_list[t];
    // samples[r][cell], with cells enumerated (n index, k index) in order.
    std::vector<std::vector<detail::PathSample>> samples(R);
    parallel_for(
        R,
        [&](std::size_t r) {
          Philox4x32 engine(spec.master_seed, stream_id(t, r));
          std::uint64_t n = 0;
          std::uint64_t s = 0;
          for (std::uint64_t target : spec.n_grid) {
            for (; n < target; ++n) s += bernoulli(engine, theta0) ? 1 : 0;
            const RealMeasure post = posterior(spec.prior, n, s);
            for (unsigned k : horizons_at(spec.horizons, n)) {
              const auto g = gap_report(post, k);
              samples[r].push_back({g.gap, g.bayes > 0.0 ? g.gap / g.bayes : 0.0, g.variance});
            }
          }
        },
        spec.threads);

    std::size_t cell = 0;
    for (std::uint64_t n : spec.n_grid) {
      for (unsigned k : horizons_at(spec.horizons, n)) {
        std::vector<double> gaps(R), rel(R), var(R);
        for (std::uint64_t r = 0; r < R; ++r) {
          gaps[r] = samples[r][cell].gap;
          rel[r] = samples[r][cell].relative_gap;
          var[r] = samples[r][cell].variance;
        }
        ResultRow row{theta0, n, k, 0, 0, 0, 0, 0};
        detail::mean_and_se(gaps, row.mean_gap, row.se);
        detail::mean_and_se(rel, row.mean_relative_gap, row.relative_se);
        double unused = 0.0;
        detail::mean_and_se(var, row.mean_variance, unused);
        rows.push_back(row);
        ++cell;
      }
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
    if (a.theta0 != b.theta0) return a.theta0 < b.theta0;
    if (a.n != b.n) return a.n < b.n;
    return a.k < b.k;
  });
  return rows;
}

inline std::vector<ResultRow> discrepancy_experiment(const ExperimentSpec& spec) {
  if (!std::holds_alternative<FixedHorizons>(spec.horizons)) {
    throw DomainError("discrepancy experiment needs a fixed horizon list");
  }
  return run_sweep(spec);
}

inline std::vector<ResultRow> growing_horizon_experiment(const ExperimentSpec& spec) {
  if (std::holds_alternative<FixedHorizons>(spec.horizons)) {
    throw DomainError("growing-horizon experiment needs a sqrt or log horizon rule");
  }
  return run_sweep(spec);
}

// Ordinary least squares slope of log y on log x over points with
// x >= min_x and y > 0.
inline double fit_loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys, double min_x = 50.0) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < xs.size() && i < ys.size(); ++i) {
    if (xs[i] >= min_x && ys[i] > 0.0) {
      lx.push_back(std::log(xs[i]));
      ly.push_back(std::log(ys[i]));
    }
  }
  if (lx.size() < 2) throw DomainError("slope fit needs at least two usable points");
  const double N = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= N;
  my /= N;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  if (sxx == 0.0) throw DomainError("slope fit needs distinct x values");
  return sxy / sxx;
}

struct HorizonTrend {
  double first;  // value at the smallest n
  double last;   // value at the largest n
  double ratio;  // last / first
  bool stabilizes;  // last >= 0.5 * first
};

// Trend of one theta0's rows; relative selects the relative-gap column.
inline HorizonTrend horizon_trend(const std::vector<ResultRow>& rows, double theta0, bool relative) {
  const ResultRow* lo = nullptr;
  const ResultRow* hi = nullptr;
  for (const auto& row : rows) {
    if (row.theta0 != theta0) continue;
    if (lo == nullptr || row.n < lo->n) lo = &row;
    if (hi == nullptr || row.n > hi->n) hi = &row;
  }
  if (lo == nullptr) throw DomainError("no rows for the requested theta0");
  const double first = relative ? lo->mean_relative_gap : lo->mean_gap;
  const double last = relative ? hi->mean_relative_gap : hi->mean_gap;
  const double ratio = first > 0.0 ? last / first : 0.0;
  return {first, last, ratio, last >= 0.5 * first};
}

}  // namespace pmh
