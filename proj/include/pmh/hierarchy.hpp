#pragma once

// Run probabilities r_k = E[(1-theta)^k] and moments mu_j = E[theta^j] are
// linked by the signed binomial transform
//
//   r_k  = sum_{j<=k} C(k,j) (-1)^j mu_j
//   mu_j = sum_{l<=j} C(j,l) (-1)^l r_l
//
// The transform is triangular with diagonal (-1)^k and is its own inverse.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <type_traits>
#include <vector>

#include "pmh/errors.hpp"
#include "pmh/measures.hpp"
#include "pmh/rational.hpp"

namespace pmh {

// Largest order for which binomials are tabulated. C(64, 32) < 2^63.
inline constexpr unsigned kMaxOrder = 64;

namespace detail {

using BinomialTable = std::array<std::array<std::uint64_t, kMaxOrder + 1>, kMaxOrder + 1>;

inline const BinomialTable& binomial_table() {
  static const BinomialTable table = [] {
    BinomialTable t{};
    for (unsigned n = 0; n <= kMaxOrder; ++n) {
      t[n][0] = 1;
      for (unsigned k = 1; k <= n; ++k) t[n][k] = t[n - 1][k - 1] + (k < n ? t[n - 1][k] : 0);
    }
    return t;
  }();
  return table;
}

// Roundoff scale of an alternating binomial sum of length K+1 in double.
inline double transform_roundoff(std::size_t length) {
  double scale = 1.0;
  for (std::size_t i = 1; i < length; ++i) scale *= 2.0;
  return 1e-12 + 8.0 * std::numeric_limits<double>::epsilon() * scale;
}

template <Scalar T>
void check_sequence(std::span<const T> values, const char* what) {
  if (values.empty()) throw InvalidMeasure(std::string(what) + " sequence is empty");
  if (values.size() > kMaxOrder + 1) {
    throw DomainError(std::string(what) + " sequence longer than the supported order 64");
  }
  T slack{0};
  if constexpr (!is_exact_v<T>) slack = transform_roundoff(values.size());
  if (abs_value(T(values[0] - T{1})) > slack) {
    throw InvalidMeasure(std::string(what) + " sequence must start with 1");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] < T(-slack) || values[i] > T(T{1} + slack)) {
      throw InvalidMeasure(std::string(what) + " values must lie in [0,1]");
    }
    if (i > 0 && values[i] > T(values[i - 1] + slack)) {
      throw InvalidMeasure(std::string(what) + " sequence must be non-increasing");
    }
  }
}

}  // namespace detail

// Exact binomial coefficient; refuses orders beyond the tabulated range.
inline std::uint64_t binomial(unsigned n, unsigned k) {
  if (n > kMaxOrder) throw DomainError("binomial order exceeds 64");
  return k > n ? 0 : detail::binomial_table()[n][k];
}

// Moments mu_0..mu_K of a measure on [0,1]: mu_0 = 1, values in [0,1],
// non-increasing. Double-mode sequences are checked up to the roundoff of
// the transform that produced them.
template <Scalar T>
class MomentSequence {
 public:
  explicit MomentSequence(std::vector<T> values) : values_(std::move(values)) {
    detail::check_sequence<T>(values_, "moment");
  }
  std::span<const T> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  const T& operator[](std::size_t j) const { return values_[j]; }
  bool operator==(const MomentSequence&) const = default;

 private:
  std::vector<T> values_;
};

// Run probabilities r_0..r_K with the same shape constraints as moments.
template <Scalar T>
class RunSequence {
 public:
  explicit RunSequence(std::vector<T> values) : values_(std::move(values)) {
    detail::check_sequence<T>(values_, "run");
  }
  std::span<const T> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  const T& operator[](std::size_t k) const { return values_[k]; }
  bool operator==(const RunSequence&) const = default;

 private:
  std::vector<T> values_;
};

// out_k = sum_{j<=k} C(k,j) (-1)^j in_j.
template <Scalar T>
std::vector<T> signed_binomial_transform(std::span<const T> in) {
  if (in.size() > kMaxOrder + 1) throw DomainError("sequence longer than the supported order 64");
  // Double mode accumulates in long double: the alternating sums cancel
  // terms as large as C(K, K/2).
  using Acc = std::conditional_t<is_exact_v<T>, T, long double>;
  std::vector<T> out(in.size(), T{0});
  for (std::size_t k = 0; k < in.size(); ++k) {
    Acc sum{0};
    for (std::size_t j = 0; j <= k; ++j) {
      const Acc term = Acc(binomial(static_cast<unsigned>(k), static_cast<unsigned>(j))) * Acc(in[j]);
      if (j % 2 == 0) {
        sum += term;
      } else {
        sum -= term;
      }
    }
    out[k] = T(sum);
  }
  return out;
}

template <Scalar T>
RunSequence<T> runs_from_moments(const MomentSequence<T>& moments) {
  return RunSequence<T>(signed_binomial_transform<T>(moments.values()));
}

template <Scalar T>
MomentSequence<T> moments_from_runs(const RunSequence<T>& runs) {
  return MomentSequence<T>(signed_binomial_transform<T>(runs.values()));
}

template <Scalar T>
MomentSequence<T> moment_sequence(const MixingMeasure<T>& measure, unsigned K) {
  if (K > kMaxOrder) throw DomainError("moment order exceeds 64");
  std::vector<T> values;
  values.reserve(K + 1);
  for (unsigned j = 0; j <= K; ++j) values.push_back(moment(measure, j));
  return MomentSequence<T>(std::move(values));
}

// Entry (k, j) is C(k,j)(-1)^j: lower triangular, diagonal (-1)^k.
inline std::vector<std::vector<std::int64_t>> transform_matrix(unsigned K) {
  if (K > 62) throw DomainError("transform matrix order limited to 62");
  std::vector<std::vector<std::int64_t>> m(K + 1, std::vector<std::int64_t>(K + 1, 0));
  for (unsigned k = 0; k <= K; ++k) {
    for (unsigned j = 0; j <= k; ++j) {
      const auto c = static_cast<std::int64_t>(binomial(k, j));
      m[k][j] = (j % 2 == 0) ? c : -c;
    }
  }
  return m;
}

template <Scalar T>
struct MonotonicityWitness {
  unsigned order;         // m
  unsigned index;         // k
  T forward_difference;   // Delta^m seq_k
  T signed_value;         // (-1)^m Delta^m seq_k, below -tol
};

template <Scalar T>
struct MonotonicityVerdict {
  bool pass = true;
  std::optional<MonotonicityWitness<T>> witness;
};

// Double-mode default tolerance for the difference-table screen.
inline double default_monotonicity_tolerance(std::size_t length) {
  return 1e-10 * static_cast<double>(length);
}

// Screens (-1)^m Delta^m seq_k >= -tol for every m + k <= min(max_order,
// length - 1), scanning m outer and k inner, and reports the first failure.
// This is a necessary condition only: a truncated sequence that passes is
// not guaranteed to be the moment sequence of a measure on [0,1].
template <Scalar T>
MonotonicityVerdict<T> check_complete_monotonicity(std::span<const T> seq, unsigned max_order,
                                                   const T& tol) {
  if (seq.empty() || seq[0] != T{1}) throw DomainError("sequence must start with 1");
  if (max_order < 1) throw DomainError("max_order must be at least 1");
  if (tol < T{0}) throw DomainError("tolerance must be non-negative");
  const std::size_t top = std::min<std::size_t>(max_order, seq.size() - 1);

  std::vector<T> level(seq.begin(), seq.begin() + static_cast<std::ptrdiff_t>(top + 1));
  for (std::size_t m = 0; m <= top; ++m) {
    for (std::size_t k = 0; k + m <= top; ++k) {
      const T signed_value = (m % 2 == 0) ? level[k] : T(-level[k]);
      if (signed_value < T(-tol)) {
        return {false, MonotonicityWitness<T>{static_cast<unsigned>(m), static_cast<unsigned>(k),
                                              level[k], signed_value}};
      }
    }
    for (std::size_t k = 0; k + m < top; ++k) level[k] = level[k + 1] - level[k];
  }
  return {};
}

template <Scalar T>
struct RoundtripReport {
  unsigned order;
  std::vector<T> moments;
  std::vector<T> runs;
  std::vector<T> reconstructed;
  T max_abs_error;
  bool runs_completely_monotone;
};

// moments -> runs -> moments; exact mode must reproduce every moment.
template <Scalar T>
RoundtripReport<T> injectivity_roundtrip(const MixingMeasure<T>& measure, unsigned K) {
  if (K < 1) throw DomainError("roundtrip order must be at least 1");
  const MomentSequence<T> moments = moment_sequence(measure, K);
  const RunSequence<T> runs = runs_from_moments(moments);
  const MomentSequence<T> back = moments_from_runs(runs);

  T worst{0};
  for (std::size_t j = 0; j <= K; ++j) {
    const T err = abs_value(T(back[j] - moments[j]));
    if (err > worst) worst = err;
  }
  T tol{0};
  if constexpr (!is_exact_v<T>) tol = default_monotonicity_tolerance(runs.size()) + detail::transform_roundoff(runs.size());
  const bool cm = check_complete_monotonicity<T>(runs.values(), K, tol).pass;
  return {K,
          {moments.values().begin(), moments.values().end()},
          {runs.values().begin(), runs.values().end()},
          {back.values().begin(), back.values().end()},
          worst,
          cm};
}

}  // namespace pmh
