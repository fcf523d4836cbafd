#pragma once

// Bounded [0,1]-valued martingales theta_n driving the predictive
// X_{n+1} | F_n ~ Bern(theta_n):
//
//   Counterexample  theta_n = 1/2 + sum_{i<=n} 2^-(i+2) (2 X_i - 1)
//   LearningRate    theta_{n+1} = theta_n + gamma_n (X_{n+1} - theta_n)
//   BayesMean       theta_n = E[theta | X_1..X_n] under a prior
//
// Each satisfies E[theta_{n+1} | F_n] = theta_n. Only the last depends on
// the data through (n, S_n) alone.

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "pmh/errors.hpp"
#include "pmh/measures.hpp"
#include "pmh/parallel.hpp"
#include "pmh/rng.hpp"

namespace pmh {

struct Counterexample {};

// gamma_n = 1 / (n + 1 + c) on the step from n to n + 1, which gives
// theta_n = (S_n + c theta_0) / (n + c).
template <Scalar T>
struct HarmonicRate {
  T c;
  T theta0;
};

// gamma_n = (n + 1)^-alpha on the step from n to n + 1.
template <Scalar T>
struct PowerRate {
  double alpha;
  T theta0;
};

template <Scalar T>
struct BayesMean {
  MixingMeasure<T> prior;
};

template <Scalar T>
using MartingaleScheme = std::variant<Counterexample, HarmonicRate<T>, PowerRate<T>, BayesMean<T>>;

template <Scalar T>
struct SchemeState {
  std::uint64_t n = 0;
  std::uint64_t s = 0;
  T theta{};
};

template <Scalar T>
void validate_scheme(const MartingaleScheme<T>& scheme) {
  std::visit(Overloaded{
                 [](const Counterexample&) {},
                 [](const HarmonicRate<T>& h) {
                   if (!(h.c > T{0})) throw DomainError("harmonic learning rate needs c > 0");
                   if (!(h.theta0 >= T{0} && h.theta0 <= T{1})) throw DomainError("theta0 must lie in [0,1]");
                 },
                 [](const PowerRate<T>& p) {
                   if (!(p.alpha > 0.0)) throw DomainError("power learning rate needs alpha > 0");
                   if (!(p.theta0 >= T{0} && p.theta0 <= T{1})) throw DomainError("theta0 must lie in [0,1]");
                   if constexpr (is_exact_v<T>) {
                     if (p.alpha != std::floor(p.alpha)) {
                       throw DomainError("a non-integer power rate is not exactly representable");
                     }
                   }
                 },
                 [](const BayesMean<T>&) {},
             },
             scheme);
}

template <Scalar T>
SchemeState<T> initial_state(const MartingaleScheme<T>& scheme) {
  validate_scheme(scheme);
  return std::visit(Overloaded{
                        [](const Counterexample&) { return SchemeState<T>{0, 0, T{1} / T{2}}; },
                        [](const HarmonicRate<T>& h) { return SchemeState<T>{0, 0, h.theta0}; },
                        [](const PowerRate<T>& p) { return SchemeState<T>{0, 0, p.theta0}; },
                        [](const BayesMean<T>& b) { return SchemeState<T>{0, 0, mean(b.prior)}; },
                    },
                    scheme);
}

namespace detail {

// 2^-(i+2) for the i-th increment (1-based).
template <Scalar T>
T counterexample_weight(std::uint64_t i) {
  T w{1};
  for (std::uint64_t e = 0; e < i + 2; ++e) w /= T{2};
  return w;
}

}  // namespace detail

template <Scalar T>
SchemeState<T> step_scheme(const MartingaleScheme<T>& scheme, const SchemeState<T>& state, bool x_next) {
  SchemeState<T> next{state.n + 1, state.s + (x_next ? 1U : 0U), state.theta};
  const T x = x_next ? T{1} : T{0};
  std::visit(Overloaded{
                 [&](const Counterexample&) {
                   const T c = detail::counterexample_weight<T>(next.n);
                   next.theta = x_next ? T(state.theta + c) : T(state.theta - c);
                 },
                 [&](const HarmonicRate<T>& h) {
                   const T gamma = T{1} / (T(next.n) + h.c);
                   next.theta = state.theta + gamma * (x - state.theta);
                 },
                 [&](const PowerRate<T>& p) {
                   T gamma;
                   if constexpr (is_exact_v<T>) {
                     gamma = T{1} / ipow(T(next.n), static_cast<unsigned>(p.alpha));
                   } else {
                     gamma = std::pow(static_cast<double>(next.n), -p.alpha);
                   }
                   next.theta = state.theta + gamma * (x - state.theta);
                 },
                 [&](const BayesMean<T>& b) { next.theta = mean(posterior(b.prior, next.n, next.s)); },
             },
             scheme);
  return next;
}

template <Scalar T>
SchemeState<T> run_path(const MartingaleScheme<T>& scheme, const std::vector<std::uint8_t>& path) {
  SchemeState<T> state = initial_state(scheme);
  for (auto x : path) state = step_scheme(scheme, state, x != 0);
  return state;
}

template <Scalar T>
struct OrderDependenceWitness {
  std::vector<std::uint8_t> first;
  std::vector<std::uint8_t> second;
  T first_theta;
  T second_theta;
};

template <Scalar T>
struct OrderDependence {
  bool exchange_consistent = true;
  std::optional<OrderDependenceWitness<T>> witness;
};

// Enumerates all paths up to max_length (shortest first, and within a
// length from 11..1 down to 00..0) and reports the first pair with equal
// (n, S_n) but different theta_n.
template <Scalar T>
OrderDependence<T> order_dependence_check(const MartingaleScheme<T>& scheme, unsigned max_length = 4) {
  if (max_length > 20) throw DomainError("order-dependence enumeration limited to length 20");
  for (unsigned len = 1; len <= max_length; ++len) {
    std::map<unsigned, std::pair<std::vector<std::uint8_t>, T>> first_seen;
    for (std::uint64_t mask = (std::uint64_t{1} << len); mask-- > 0;) {
      std::vector<std::uint8_t> path(len);
      unsigned ones = 0;
      for (unsigned i = 0; i < len; ++i) {
        path[i] = static_cast<std::uint8_t>((mask >> (len - 1 - i)) & 1U);
        ones += path[i];
      }
      const T theta = run_path(scheme, path).theta;
      auto [it, inserted] = first_seen.try_emplace(ones, path, theta);
      if (inserted) continue;
      bool differs;
      if constexpr (is_exact_v<T>) {
        differs = it->second.second != theta;
      } else {
        differs = std::abs(it->second.second - theta) > 1e-12;
      }
      if (differs) {
        return {false, OrderDependenceWitness<T>{it->second.first, path, it->second.second, theta}};
      }
    }
  }
  return {};
}

struct Bounds {
  double min_theta;
  double max_theta;
  std::uint64_t paths;
};

// Range of theta_n over every path of length n.
template <Scalar T>
Bounds enumerate_theta_bounds(const MartingaleScheme<T>& scheme, unsigned n) {
  if (n > 24) throw DomainError("exhaustive enumeration limited to n <= 24");
  Bounds b{1.0, 0.0, 0};
  // Depth-first walk over the binary tree so each prefix is stepped once.
  std::vector<SchemeState<T>> stack{initial_state(scheme)};
  std::vector<unsigned> depth{0};
  while (!stack.empty()) {
    SchemeState<T> state = stack.back();
    const unsigned d = depth.back();
    stack.pop_back();
    depth.pop_back();
    if (d == n) {
      const double t = to_double(state.theta);
      b.min_theta = std::min(b.min_theta, t);
      b.max_theta = std::max(b.max_theta, t);
      ++b.paths;
      continue;
    }
    stack.push_back(step_scheme(scheme, state, false));
    depth.push_back(d + 1);
    stack.push_back(step_scheme(scheme, state, true));
    depth.push_back(d + 1);
  }
  return b;
}

// Reserved stream for generating the conditioning prefix of a check.
inline constexpr std::uint64_t kPrefixStream = ~std::uint64_t{0};

// Simulates n steps of the scheme's own predictive from theta_0.
inline std::vector<std::uint8_t> simulate_path(const MartingaleScheme<double>& scheme, std::uint64_t n,
                                               std::uint64_t seed, std::uint64_t stream = kPrefixStream) {
  Philox4x32 engine(seed, stream);
  SchemeState<double> state = initial_state(scheme);
  std::vector<std::uint8_t> path;
  path.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    const bool x = bernoulli(engine, state.theta);
    path.push_back(x ? 1 : 0);
    state = step_scheme(scheme, state, x);
  }
  return path;
}

struct CidRow {
  unsigned j;
  double estimate;        // mean of X_{n+j} over replicates
  double standard_error;  // sqrt(theta_n (1 - theta_n) / R)
  double deviation;       // estimate - theta_n
  bool within;            // |deviation| <= 3 SE
};

struct CidReport {
  std::vector<std::uint8_t> prefix;
  double theta_n;
  std::vector<CidRow> rows;
  double max_abs_deviation;
  bool pass;
};

// Monte Carlo check that X_{n+j} | F_n ~ Bern(theta_n) for j <= horizon.
// F_n is a prefix drawn from the scheme itself on a reserved stream; each
// replicate continues it on its own stream.
inline CidReport cid_check(const MartingaleScheme<double>& scheme, std::uint64_t n, unsigned horizon,
                           std::uint64_t replications, std::uint64_t seed, unsigned threads = 0) {
  if (replications < 1000) throw DomainError("c.i.d. check needs at least 1000 replications");
  if (horizon < 1) throw DomainError("horizon must be at least 1");
  CidReport report;
  report.prefix = simulate_path(scheme, n, seed);
  const SchemeState<double> start = run_path(scheme, report.prefix);
  report.theta_n = start.theta;

  std::vector<std::uint8_t> draws(replications * horizon, 0);
  parallel_for(
      replications,
      [&](std::size_t r) {
        Philox4x32 engine(seed, r);
        SchemeState<double> state = start;
        for (unsigned j = 0; j < horizon; ++j) {
          const bool x = bernoulli(engine, state.theta);
          draws[r * horizon + j] = x ? 1 : 0;
          state = step_scheme(scheme, state, x);
        }
      },
      threads);

  const double R = static_cast<double>(replications);
  const double se = std::sqrt(report.theta_n * (1.0 - report.theta_n) / R);
  report.max_abs_deviation = 0.0;
  report.pass = true;
  for (unsigned j = 0; j < horizon; ++j) {
    std::uint64_t ones = 0;
    for (std::uint64_t r = 0; r < replications; ++r) ones += draws[r * horizon + j];
    const double estimate = static_cast<double>(ones) / R;
    const double deviation = estimate - report.theta_n;
    const bool within = std::abs(deviation) <= 3.0 * se;
    report.rows.push_back({j + 1, estimate, se, deviation, within});
    report.max_abs_deviation = std::max(report.max_abs_deviation, std::abs(deviation));
    report.pass = report.pass && within;
  }
  return report;
}

// Law of X_{n+1} given F_n used to drive a scheme. The counterexample is a
// martingale under a fair coin; every scheme here is driven by its own
// predictive Bern(theta_n) in the c.i.d. construction.
enum class DrivingLaw { Predictive, FairCoin };

template <Scalar T>
T driving_probability(const SchemeState<T>& state, DrivingLaw law) {
  return law == DrivingLaw::FairCoin ? T(T{1} / T{2}) : state.theta;
}

// E[theta_{n+1} | F_n] - theta_n, exactly.
template <Scalar T>
T exact_drift(const MartingaleScheme<T>& scheme, const SchemeState<T>& state, DrivingLaw law) {
  const T p = driving_probability(state, law);
  const T up = step_scheme(scheme, state, true).theta;
  const T down = step_scheme(scheme, state, false).theta;
  return p * up + (T{1} - p) * down - state.theta;
}

// E[X_{n+j} | F_n] under the predictive law, by enumerating the 2^(j-1)
// intermediate paths. Equals theta_n for every j iff the scheme is c.i.d.
// at this state.
template <Scalar T>
T exact_future_mean(const MartingaleScheme<T>& scheme, const SchemeState<T>& state, unsigned j) {
  if (j < 1) throw DomainError("lead j must be at least 1");
  if (j > 20) throw DomainError("exact future mean limited to j <= 20");
  if (j == 1) return state.theta;
  const T p = state.theta;
  return p * exact_future_mean(scheme, step_scheme(scheme, state, true), j - 1) +
         (T{1} - p) * exact_future_mean(scheme, step_scheme(scheme, state, false), j - 1);
}

struct MartingaleCheck {
  double theta_n;
  double mean_increment;  // MC estimate of E[theta_{n+1} | F_n] - theta_n
  double standard_error;
  bool within;            // |mean_increment| <= 3 SE
};

inline MartingaleCheck martingale_check(const MartingaleScheme<double>& scheme,
                                        const std::vector<std::uint8_t>& prefix, std::uint64_t replications,
                                        std::uint64_t seed, unsigned threads = 0,
                                        DrivingLaw law = DrivingLaw::Predictive) {
  if (replications < 2) throw DomainError("martingale check needs at least 2 replications");
  const SchemeState<double> start = run_path(scheme, prefix);
  std::vector<double> increments(replications);
  parallel_for(
      replications,
      [&](std::size_t r) {
        Philox4x32 engine(seed, r);
        const bool x = bernoulli(engine, driving_probability(start, law));
        increments[r] = step_scheme(scheme, start, x).theta - start.theta;
      },
      threads);
  double sum = 0.0;
  for (double d : increments) sum += d;
  const double R = static_cast<double>(replications);
  const double m = sum / R;
  double ss = 0.0;
  for (double d : increments) ss += (d - m) * (d - m);
  const double se = std::sqrt(ss / (R - 1.0) / R);
  return {start.theta, m, se, std::abs(m) <= 3.0 * se};
}

}  // namespace pmh
