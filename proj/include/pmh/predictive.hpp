#pragma once

// k-step predictives of an exchangeable Bernoulli sequence given its
// (posterior) mixing measure:
//
//   P(next k = pattern) = E[theta^s (1 - theta)^(k - s)],  s = #ones
//
// plus the plug-in counterpart (the same functional under a point mass at
// the posterior mean), the Jensen gap between them, and witnesses that the
// mean alone does not pin down nonlinear functionals.

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/random/beta_distribution.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pmh/beta_exact.hpp"
#include "pmh/errors.hpp"
#include "pmh/measures.hpp"
#include "pmh/parallel.hpp"
#include "pmh/rng.hpp"

namespace pmh {

// Enumeration contexts (all 2^k patterns) stop here.
inline constexpr unsigned kMaxEnumeratedPattern = 30;

class Pattern {
 public:
  explicit Pattern(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    if (bits_.empty()) throw DomainError("pattern must have length >= 1");
    for (auto b : bits_) {
      if (b > 1) throw DomainError("pattern bits must be 0 or 1");
    }
  }

  // "0110" -> (0, 1, 1, 0). Commas are ignored so "0,1,1,0" works too.
  static Pattern parse(std::string_view text) {
    std::vector<std::uint8_t> bits;
    for (char c : text) {
      if (c == '0' || c == '1') {
        bits.push_back(static_cast<std::uint8_t>(c - '0'));
      } else if (c != ',' && c != ' ') {
        throw ParseError("pattern may contain only 0 and 1: '" + std::string(text) + "'");
      }
    }
    return Pattern(std::move(bits));
  }

  static Pattern zeros(unsigned k) { return Pattern(std::vector<std::uint8_t>(k, 0)); }

  // Bit i of the pattern is bit (k-1-i) of mask.
  static Pattern from_mask(std::uint64_t mask, unsigned k) {
    std::vector<std::uint8_t> bits(k);
    for (unsigned i = 0; i < k; ++i) bits[i] = static_cast<std::uint8_t>((mask >> (k - 1 - i)) & 1U);
    return Pattern(std::move(bits));
  }

  unsigned size() const { return static_cast<unsigned>(bits_.size()); }
  unsigned ones() const {
    unsigned s = 0;
    for (auto b : bits_) s += b;
    return s;
  }
  const std::vector<std::uint8_t>& bits() const { return bits_; }

  std::string str() const {
    std::string out;
    for (auto b : bits_) out += static_cast<char>('0' + b);
    return out;
  }

 private:
  std::vector<std::uint8_t> bits_;
};

// E[theta^ones (1 - theta)^zeros]. Beta measures use
// (a)_ones (b)_zeros / (a + b)_(ones + zeros), evaluated as
// [(a)_ones / (a+b)_ones] [(b)_zeros / (a+b+ones)_zeros]; atoms are summed
// directly.
template <Scalar T>
T cylinder_prob(const MixingMeasure<T>& measure, unsigned ones, unsigned zeros) {
  return measure.visit(Overloaded{
      [&](const PointMass<T>& p) { return T(ipow(p.location, ones) * ipow(T(T{1} - p.location), zeros)); },
      [&](const DiscreteMeasure<T>& d) {
        T sum{0};
        for (const auto& a : d.atoms) {
          sum += a.weight * ipow(a.location, ones) * ipow(T(T{1} - a.location), zeros);
        }
        return sum;
      },
      [&](const BetaMeasure<T>& b) {
        const T total = b.alpha + b.beta;
        return T(rising_ratio(b.alpha, total, ones) * rising_ratio(b.beta, T(total + T(ones)), zeros));
      },
  });
}

template <Scalar T>
T pattern_prob(const MixingMeasure<T>& measure, const Pattern& pattern) {
  const unsigned s = pattern.ones();
  return cylinder_prob(measure, s, pattern.size() - s);
}

// P(next k observations are all zero) = E[(1 - theta)^k].
template <Scalar T>
T run_prob(const MixingMeasure<T>& measure, unsigned k) {
  if (k < 1) throw DomainError("run length must be at least 1");
  return cylinder_prob(measure, 0, k);
}

// Plug-in run probability (1 - mean)^k.
template <Scalar T>
T plugin_run_prob(const MixingMeasure<T>& measure, unsigned k) {
  return ipow(T(T{1} - mean(measure)), k);
}

template <Scalar T>
struct GapReport {
  T bayes;
  T plugin;
  T gap;          // bayes - plugin
  T upper_bound;  // k(k-1)/2 * variance
  T variance;
};

// Bayes versus plug-in k-step run probability. Raises std::logic_error if
// 0 <= gap <= k(k-1)/2 sigma^2 fails (beyond roundoff in double mode), or
// if the gap is not strictly positive for a non-degenerate measure at k >= 2.
template <Scalar T>
GapReport<T> gap_report(const MixingMeasure<T>& measure, unsigned k) {
  if (k < 1) throw DomainError("run length must be at least 1");
  const auto mv = mean_variance(measure);
  GapReport<T> r{run_prob(measure, k), ipow(T(T{1} - mv.mean), k), T{0},
                 T(T(k) * T(k - 1) / T{2} * mv.variance), mv.variance};
  // k = 1 is linear in theta: both sides are E[1 - theta], so the roundoff
  // between the two routes is not reported as a gap.
  if (k == 1) r.plugin = r.bayes;
  r.gap = r.bayes - r.plugin;
  T slack{0};
  if constexpr (!is_exact_v<T>) slack = 1e-13 * (1.0 + static_cast<double>(k) * k);
  if (r.gap < T(-slack) || r.gap > T(r.upper_bound + slack)) {
    throw std::logic_error("Jensen gap outside [0, k(k-1)/2 sigma^2]");
  }
  if constexpr (is_exact_v<T>) {
    if (k >= 2 && mv.variance > 0 && !(r.gap > 0)) {
      throw std::logic_error("Jensen gap not strictly positive for a non-degenerate measure");
    }
  }
  return r;
}

template <Scalar T>
struct Interval {
  T lo;
  T hi;
};

// Range of E[(1-theta)^k] over all measures with mean m:
// [(1-m)^k, 1-m], attained by delta_m and (1-m) delta_0 + m delta_1.
template <Scalar T>
Interval<T> predictive_range(const T& m, unsigned k) {
  if (!(m > T{0} && m < T{1})) throw DomainError("mean must lie in (0,1)");
  if (k < 2) throw DomainError("range needs k >= 2");
  return {ipow(T(T{1} - m), k), T(T{1} - m)};
}

template <Scalar T>
MixingMeasure<T> range_upper_measure(const T& m) {
  return two_point_with_mean(T{0}, T{1}, m);
}

// Functionals f(theta) whose expectation the mean does not determine.
struct ZerosRun {  // (1 - theta)^k
  unsigned k;
};
struct OnesRun {  // theta^k
  unsigned k;
};
struct Indicator {  // 1[theta <= t]
  double t;
};
struct Entropy {};  // -theta log theta - (1-theta) log(1-theta), 0 log 0 = 0
using Functional = std::variant<ZerosRun, OnesRun, Indicator, Entropy>;

inline std::string describe(const Functional& f) {
  return std::visit(Overloaded{
                        [](const ZerosRun& z) { return "zeros-run(" + std::to_string(z.k) + ")"; },
                        [](const OnesRun& o) { return "ones-run(" + std::to_string(o.k) + ")"; },
                        [](const Indicator& i) { return "indicator(" + format_sig(i.t) + ")"; },
                        [](const Entropy&) { return std::string("entropy"); },
                    },
                    f);
}

inline double bernoulli_entropy(double theta) {
  auto term = [](double x) { return x <= 0.0 ? 0.0 : -x * std::log(x); };
  return term(theta) + term(1.0 - theta);
}

inline double evaluate_at(const Functional& f, double theta) {
  return std::visit(Overloaded{
                        [&](const ZerosRun& z) { return ipow(1.0 - theta, z.k); },
                        [&](const OnesRun& o) { return ipow(theta, o.k); },
                        [&](const Indicator& i) { return theta <= i.t ? 1.0 : 0.0; },
                        [&](const Entropy&) { return bernoulli_entropy(theta); },
                    },
                    f);
}

// E[f(theta)] in double precision; run functionals use the exact route.
template <Scalar T>
double expectation(const MixingMeasure<T>& measure, const Functional& f) {
  if (const auto* z = std::get_if<ZerosRun>(&f)) return to_double(cylinder_prob(measure, 0, z->k));
  if (const auto* o = std::get_if<OnesRun>(&f)) return to_double(cylinder_prob(measure, o->k, 0));
  return measure.visit(Overloaded{
      [&](const PointMass<T>& p) { return evaluate_at(f, to_double(p.location)); },
      [&](const DiscreteMeasure<T>& d) {
        double sum = 0.0;
        for (const auto& a : d.atoms) sum += to_double(a.weight) * evaluate_at(f, to_double(a.location));
        return sum;
      },
      [&](const BetaMeasure<T>& b) {
        const double a = to_double(b.alpha);
        const double c = to_double(b.beta);
        if (const auto* ind = std::get_if<Indicator>(&f)) {
          if (ind->t <= 0.0) return 0.0;
          if (ind->t >= 1.0) return 1.0;
          return boost::math::ibeta(a, c, ind->t);
        }
        // E[theta log theta] = a/(a+b) (psi(a+1) - psi(a+b+1)).
        using boost::math::digamma;
        const double tail = digamma(a + c + 1.0);
        return -(a / (a + c)) * (digamma(a + 1.0) - tail) - (c / (a + c)) * (digamma(c + 1.0) - tail);
      },
  });
}

template <Scalar T>
struct NonIdWitness {
  MixingMeasure<T> point;      // delta_m
  MixingMeasure<T> two_point;  // mean-m measure on {a, b}
  double point_value;
  double two_point_value;
};

// Two measures with mean m whose expectations of f differ.
template <Scalar T>
NonIdWitness<T> nonid_witness(const T& m, const Functional& f, const T& a, const T& b) {
  if (const auto* z = std::get_if<ZerosRun>(&f); z != nullptr && z->k < 2) {
    throw DomainError("run functional needs k >= 2 to be non-affine");
  }
  if (const auto* o = std::get_if<OnesRun>(&f); o != nullptr && o->k < 2) {
    throw DomainError("run functional needs k >= 2 to be non-affine");
  }
  auto pair = two_point_with_mean(a, b, m);  // validates the bracket
  auto point = MixingMeasure<T>::point(m);
  const double v1 = expectation(point, f);
  const double v2 = expectation(pair, f);
  return {std::move(point), std::move(pair), v1, v2};
}

// Draws theta from the measure with the given engine.
template <class Engine>
double sample_theta(const RealMeasure& measure, Engine& engine) {
  return measure.visit(Overloaded{
      [&](const PointMass<double>& p) { return p.location; },
      [&](const DiscreteMeasure<double>& d) {
        const double u = uniform01(engine);
        double cumulative = 0.0;
        for (const auto& a : d.atoms) {
          cumulative += a.weight;
          if (u < cumulative) return a.location;
        }
        return d.atoms.back().location;
      },
      [&](const BetaMeasure<double>& b) {
        boost::random::beta_distribution<double> dist(b.alpha, b.beta);
        return dist(engine);
      },
  });
}

struct MonteCarloEstimate {
  std::uint64_t hits;
  std::uint64_t replications;
  double estimate;
  double standard_error;  // binomial, at the estimate
};

// Frequency of the pattern in blocks of k conditionally i.i.d.
// Bernoulli(theta) draws, theta drawn from the measure per replicate.
inline MonteCarloEstimate simulate_pattern_frequency(const RealMeasure& measure, const Pattern& pattern,
                                                     std::uint64_t replications, std::uint64_t seed,
                                                     std::uint64_t cell = 0, unsigned threads = 0) {
  if (replications == 0) throw DomainError("replications must be positive");
  std::vector<std::uint8_t> hit(replications, 0);
  parallel_for(
      replications,
      [&](std::size_t r) {
        Philox4x32 engine(seed, stream_id(cell, r));
        const double theta = sample_theta(measure, engine);
        bool match = true;
        for (auto bit : pattern.bits()) {
          const bool x = bernoulli(engine, theta);
          if (x != (bit == 1)) match = false;
        }
        hit[r] = match ? 1 : 0;
      },
      threads);
  std::uint64_t hits = 0;
  for (auto h : hit) hits += h;
  const double p = static_cast<double>(hits) / static_cast<double>(replications);
  return {hits, replications, p, std::sqrt(p * (1.0 - p) / static_cast<double>(replications))};
}

}  // namespace pmh
