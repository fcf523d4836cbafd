#pragma once

// Mixing measures on [0,1] (the de Finetti prior / posterior objects),
// their moments, and conjugate or reweighting posterior updates.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "pmh/errors.hpp"
#include "pmh/rational.hpp"

namespace pmh {

enum class MeasureKind { Point, Discrete, Beta };

template <Scalar T>
struct Atom {
  T location;
  T weight;
  bool operator==(const Atom&) const = default;
};

template <Scalar T>
struct PointMass {
  T location;
  bool operator==(const PointMass&) const = default;
};

template <Scalar T>
struct DiscreteMeasure {
  std::vector<Atom<T>> atoms;  // sorted by location, no exact duplicates
  bool operator==(const DiscreteMeasure&) const = default;
};

template <Scalar T>
struct BetaMeasure {
  T alpha;
  T beta;
  bool operator==(const BetaMeasure&) const = default;
};

// Discrete weights must sum to one within this bound in double mode;
// exact mode requires the sum to be exactly one.
inline constexpr double kWeightSumTolerance = 1e-12;

template <Scalar T>
class MixingMeasure {
 public:
  using scalar_type = T;
  using Variant = std::variant<PointMass<T>, DiscreteMeasure<T>, BetaMeasure<T>>;

  static MixingMeasure point(T location) {
    if (!in_unit_interval(location)) {
      throw InvalidMeasure("point mass location must lie in [0,1]");
    }
    return MixingMeasure(PointMass<T>{std::move(location)});
  }

  // Sorts atoms by location and merges exact duplicates. Near-duplicates
  // stay distinct.
  static MixingMeasure discrete(std::vector<Atom<T>> atoms) {
    if (atoms.empty()) throw InvalidMeasure("discrete measure needs at least one atom");
    for (const auto& atom : atoms) {
      if (!in_unit_interval(atom.location)) {
        throw InvalidMeasure("discrete atom location must lie in [0,1]");
      }
      if (!(atom.weight > T{0})) throw InvalidMeasure("discrete atom weight must be positive");
    }
    std::sort(atoms.begin(), atoms.end(),
              [](const Atom<T>& l, const Atom<T>& r) { return l.location < r.location; });
    std::vector<Atom<T>> merged;
    merged.reserve(atoms.size());
    for (auto& atom : atoms) {
      if (!merged.empty() && merged.back().location == atom.location) {
        merged.back().weight += atom.weight;
      } else {
        merged.push_back(std::move(atom));
      }
    }
    T total{0};
    for (const auto& atom : merged) total += atom.weight;
    if constexpr (is_exact_v<T>) {
      if (total != 1) throw InvalidMeasure("discrete weights must sum to exactly 1 in exact mode");
    } else {
      if (!(std::abs(total - 1.0) <= kWeightSumTolerance)) {
        throw InvalidMeasure("discrete weights must sum to 1 within 1e-12");
      }
    }
    return MixingMeasure(DiscreteMeasure<T>{std::move(merged)});
  }

  static MixingMeasure beta(T alpha, T beta) {
    if (!(alpha > T{0}) || !(beta > T{0})) {
      throw InvalidMeasure("beta parameters must be strictly positive");
    }
    if constexpr (!is_exact_v<T>) {
      if (!std::isfinite(alpha) || !std::isfinite(beta)) {
        throw InvalidMeasure("beta parameters must be finite");
      }
    }
    return MixingMeasure(BetaMeasure<T>{std::move(alpha), std::move(beta)});
  }

  static MixingMeasure jeffreys() { return beta(T{1} / T{2}, T{1} / T{2}); }
  static MixingMeasure uniform() { return beta(T{1}, T{1}); }

  MeasureKind kind() const { return static_cast<MeasureKind>(rep_.index()); }
  const Variant& variant() const { return rep_; }

  template <class Visitor>
  decltype(auto) visit(Visitor&& visitor) const {
    return std::visit(std::forward<Visitor>(visitor), rep_);
  }

  const PointMass<T>* as_point() const { return std::get_if<PointMass<T>>(&rep_); }
  const DiscreteMeasure<T>* as_discrete() const { return std::get_if<DiscreteMeasure<T>>(&rep_); }
  const BetaMeasure<T>* as_beta() const { return std::get_if<BetaMeasure<T>>(&rep_); }

  bool operator==(const MixingMeasure&) const = default;

 private:
  explicit MixingMeasure(Variant rep) : rep_(std::move(rep)) {}

  static bool in_unit_interval(const T& x) {
    if constexpr (is_exact_v<T>) {
      return x >= 0 && x <= 1;
    } else {
      return x >= 0.0 && x <= 1.0;  // false for NaN
    }
  }

  Variant rep_;
};

using ExactMeasure = MixingMeasure<Rational>;
using RealMeasure = MixingMeasure<double>;

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

// Lossy but explicit: the only route from exact to double mode.
inline RealMeasure to_real(const ExactMeasure& measure) {
  return measure.visit(Overloaded{
      [](const PointMass<Rational>& p) { return RealMeasure::point(to_double(p.location)); },
      [](const BetaMeasure<Rational>& b) {
        return RealMeasure::beta(to_double(b.alpha), to_double(b.beta));
      },
      [](const DiscreteMeasure<Rational>& d) {
        std::vector<Atom<double>> atoms;
        double total = 0.0;
        for (const auto& a : d.atoms) {
          atoms.push_back({to_double(a.location), to_double(a.weight)});
          total += atoms.back().weight;
        }
        for (auto& a : atoms) a.weight /= total;
        return RealMeasure::discrete(std::move(atoms));
      },
  });
}

// j-th raw moment. The Beta case uses the product
// prod_{i<j} (alpha + i) / (alpha + beta + i), exact for rational parameters.
template <Scalar T>
T moment(const MixingMeasure<T>& measure, unsigned j) {
  if (j == 0) return T{1};
  return measure.visit(Overloaded{
      [j](const PointMass<T>& p) { return ipow(p.location, j); },
      [j](const DiscreteMeasure<T>& d) {
        T sum{0};
        for (const auto& a : d.atoms) sum += a.weight * ipow(a.location, j);
        return sum;
      },
      [j](const BetaMeasure<T>& b) {
        T product{1};
        const T total = b.alpha + b.beta;
        for (unsigned i = 0; i < j; ++i) product *= (b.alpha + i) / (total + i);
        return product;
      },
  });
}

template <Scalar T>
struct MeanVariance {
  T mean;
  T variance;
};

template <Scalar T>
MeanVariance<T> mean_variance(const MixingMeasure<T>& measure) {
  return measure.visit(Overloaded{
      [](const PointMass<T>& p) { return MeanVariance<T>{p.location, T{0}}; },
      [](const DiscreteMeasure<T>& d) {
        T mean{0};
        for (const auto& a : d.atoms) mean += a.weight * a.location;
        T variance{0};
        for (const auto& a : d.atoms) {
          const T delta = a.location - mean;
          variance += a.weight * delta * delta;
        }
        return MeanVariance<T>{mean, variance};
      },
      [](const BetaMeasure<T>& b) {
        const T total = b.alpha + b.beta;
        const T mean = b.alpha / total;
        const T variance = b.alpha * b.beta / (total * total * (total + 1));
        return MeanVariance<T>{mean, variance};
      },
  });
}

template <Scalar T>
T mean(const MixingMeasure<T>& measure) {
  return mean_variance(measure).mean;
}

template <Scalar T>
T variance(const MixingMeasure<T>& measure) {
  return mean_variance(measure).variance;
}

// (prior, n, S_n): every predictive quantity is a function of this triple.
template <Scalar T>
struct PosteriorState {
  PosteriorState(MixingMeasure<T> prior_measure, std::uint64_t count, std::uint64_t successes)
      : prior(std::move(prior_measure)), n(count), s(successes) {
    if (s > n) throw InvalidCounts("success count exceeds observation count");
  }

  MixingMeasure<T> prior;
  std::uint64_t n;
  std::uint64_t s;
};

namespace detail {

template <Scalar T>
MixingMeasure<T> reweight_discrete(const DiscreteMeasure<T>& d, std::uint64_t n, std::uint64_t s) {
  std::vector<Atom<T>> kept;
  const std::uint64_t failures = n - s;
  if constexpr (is_exact_v<T>) {
    T total{0};
    for (const auto& a : d.atoms) {
      const T likelihood = ipow(a.location, static_cast<unsigned>(s)) *
                           ipow(T(1 - a.location), static_cast<unsigned>(failures));
      if (likelihood == 0) continue;
      kept.push_back({a.location, a.weight * likelihood});
      total += kept.back().weight;
    }
    if (kept.empty()) throw DegeneratePosterior("every atom has zero likelihood");
    for (auto& a : kept) a.weight /= total;
  } else {
    // Log space so long sequences do not underflow every atom.
    std::vector<double> log_weights;
    for (const auto& a : d.atoms) {
      const bool zero = (a.location == 0.0 && s > 0) || (a.location == 1.0 && failures > 0);
      if (zero) continue;
      double lw = std::log(a.weight);
      if (s > 0) lw += static_cast<double>(s) * std::log(a.location);
      if (failures > 0) lw += static_cast<double>(failures) * std::log1p(-a.location);
      kept.push_back({a.location, 0.0});
      log_weights.push_back(lw);
    }
    if (kept.empty()) throw DegeneratePosterior("every atom has zero likelihood");
    const double top = *std::max_element(log_weights.begin(), log_weights.end());
    double total = 0.0;
    for (std::size_t i = 0; i < kept.size(); ++i) {
      kept[i].weight = std::exp(log_weights[i] - top);
      total += kept[i].weight;
    }
    std::vector<Atom<double>> positive;
    for (auto& a : kept) {
      a.weight /= total;
      if (a.weight > 0.0) positive.push_back(a);
    }
    kept = std::move(positive);
  }
  return MixingMeasure<T>::discrete(std::move(kept));
}

}  // namespace detail

template <Scalar T>
MixingMeasure<T> posterior(const PosteriorState<T>& state) {
  return state.prior.visit(Overloaded{
      [&](const PointMass<T>& p) {
        const bool impossible = (p.location == T{0} && state.s > 0) ||
                                (p.location == T{1} && state.s < state.n);
        if (impossible) throw DegeneratePosterior("point mass has zero likelihood for the data");
        return state.prior;
      },
      [&](const DiscreteMeasure<T>& d) { return detail::reweight_discrete(d, state.n, state.s); },
      [&](const BetaMeasure<T>& b) {
        return MixingMeasure<T>::beta(b.alpha + T(state.s), b.beta + T(state.n - state.s));
      },
  });
}

template <Scalar T>
MixingMeasure<T> posterior(const MixingMeasure<T>& prior, std::uint64_t n, std::uint64_t s) {
  return posterior(PosteriorState<T>(prior, n, s));
}

// lambda * delta_a + (1 - lambda) * delta_b with lambda = (b - m) / (b - a),
// the two-point measure on {a, b} whose mean is m.
template <Scalar T>
MixingMeasure<T> two_point_with_mean(const T& a, const T& b, const T& m) {
  if (!(T{0} <= a && a < m && m < b && b <= T{1})) {
    throw InvalidBracket("two-point bracket requires 0 <= a < m < b <= 1");
  }
  const T lambda = (b - m) / (b - a);
  return MixingMeasure<T>::discrete({{a, lambda}, {b, T{1} - lambda}});
}

inline std::string kind_name(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::Point: return "point";
    case MeasureKind::Discrete: return "discrete";
    case MeasureKind::Beta: return "beta";
  }
  return "unknown";
}

}  // namespace pmh
