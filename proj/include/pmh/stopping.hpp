#pragma once

// Multi-step prediction values
//   V       = max_{2<=tau<=K} E[(1-theta)^tau]
//   V_tilde = max_{2<=tau<=K} (1 - m)^tau
// Both integrands decrease in tau, so both maxima sit at tau = 2 and
// V - V_tilde is the posterior variance. Thresholding the two families
// gives different effective horizons.

#include <optional>

#include "pmh/errors.hpp"
#include "pmh/measures.hpp"
#include "pmh/predictive.hpp"

namespace pmh {

template <Scalar T>
struct StoppingValue {
  T value_full;
  T value_plugin;
  T gap;
  unsigned argmax_full;
  unsigned argmax_plugin;
};

template <Scalar T>
StoppingValue<T> stopping_value_gap(const MixingMeasure<T>& measure, unsigned K) {
  if (K < 2) throw DomainError("stopping horizon K must be at least 2");
  StoppingValue<T> v{run_prob(measure, 2), plugin_run_prob(measure, 2), T{0}, 2, 2};
  for (unsigned tau = 3; tau <= K; ++tau) {
    const T full = run_prob(measure, tau);
    const T plug = plugin_run_prob(measure, tau);
    if (full > v.value_full) {
      v.value_full = full;
      v.argmax_full = tau;
    }
    if (plug > v.value_plugin) {
      v.value_plugin = plug;
      v.argmax_plugin = tau;
    }
  }
  v.gap = v.value_full - v.value_plugin;
  return v;
}

template <Scalar T>
struct BoundaryWitness {
  T threshold;                         // r
  unsigned tau0;
  T bayes_at_tau0;                     // E[(1-theta)^tau0]
  T plugin_at_tau0;                    // (1-m)^tau0
  std::optional<unsigned> tau_full;    // max{tau : E[(1-theta)^tau] >= r}
  std::optional<unsigned> tau_plugin;  // max{tau : (1-m)^tau >= r}, empty if none
};

// Effective horizon max{2 <= tau <= K : value(tau) >= r}.
template <Scalar T, class ValueAt>
std::optional<unsigned> effective_horizon(unsigned K, const T& r, ValueAt&& value_at) {
  std::optional<unsigned> best;
  for (unsigned tau = 2; tau <= K; ++tau) {
    if (value_at(tau) >= r) best = tau;
  }
  return best;
}

// Threshold r midway between (1-m)^tau0 and E[(1-theta)^tau0], so tau0 is
// feasible for the full posterior but not for the plug-in. Without an
// explicit tau0 the largest gap over [2, K-1] is used (smallest tau on ties).
template <Scalar T>
BoundaryWitness<T> stopping_boundary_witness(const MixingMeasure<T>& measure, unsigned K,
                                             std::optional<unsigned> tau0 = std::nullopt) {
  if (K < 3) throw DomainError("stopping horizon K must be at least 3");
  if (!(variance(measure) > T{0})) throw NoWitness("a degenerate posterior has no boundary distortion");
  if (tau0 && (*tau0 < 2 || *tau0 > K - 1)) throw DomainError("tau0 must lie in [2, K-1]");
  if (!tau0) {
    T best_gap{-1};
    for (unsigned tau = 2; tau <= K - 1; ++tau) {
      const T gap = run_prob(measure, tau) - plugin_run_prob(measure, tau);
      if (gap > best_gap) {
        best_gap = gap;
        tau0 = tau;
      }
    }
  }
  BoundaryWitness<T> w;
  w.tau0 = *tau0;
  w.bayes_at_tau0 = run_prob(measure, w.tau0);
  w.plugin_at_tau0 = plugin_run_prob(measure, w.tau0);
  w.threshold = (w.bayes_at_tau0 + w.plugin_at_tau0) / T{2};
  w.tau_full = effective_horizon(K, w.threshold, [&](unsigned tau) { return run_prob(measure, tau); });
  w.tau_plugin = effective_horizon(K, w.threshold, [&](unsigned tau) { return plugin_run_prob(measure, tau); });
  return w;
}

}  // namespace pmh
