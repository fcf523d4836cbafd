#pragma once

// Bernoulli KL geometry. The likelihood of (n, S_n) is
// exp{-n D(L_n || theta) + n H(L_n)}, so the posterior is the prior tilted
// by the Sanov rate theta -> D(L_n || theta), whose curvature at L_n is the
// Fisher information 1 / (L_n (1 - L_n)).

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "pmh/errors.hpp"
#include "pmh/measures.hpp"

namespace pmh {

namespace detail {

inline double xlogx_ratio(double x, double y) {
  if (x == 0.0) return 0.0;
  return x * std::log(x / y);
}

}  // namespace detail

// D(p || q) in nats, with +infinity where absolute continuity fails
// (q in {0,1} and p != q). Never throws on p, q in [0,1]; grid sweeps use
// this form.
inline double bernoulli_kl_extended(double p, double q) {
  if (!(p >= 0.0 && p <= 1.0 && q >= 0.0 && q <= 1.0)) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  if ((q == 0.0 && p > 0.0) || (q == 1.0 && p < 1.0)) return std::numeric_limits<double>::infinity();
  const double value = detail::xlogx_ratio(p, q) + detail::xlogx_ratio(1.0 - p, 1.0 - q);
  return value < 0.0 ? 0.0 : value;
}

inline double bernoulli_kl(double p, double q) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("KL: p must lie in [0,1]");
  if (!(q >= 0.0 && q <= 1.0)) throw DomainError("KL: q must lie in [0,1]");
  const double value = bernoulli_kl_extended(p, q);
  if (std::isinf(value)) throw DomainError("KL: q on the boundary with mismatched p");
  return value;
}

inline double fisher_info(double theta) {
  if (!(theta > 0.0 && theta < 1.0)) throw DomainError("Fisher information needs theta in (0,1)");
  return 1.0 / (theta * (1.0 - theta));
}

struct KlProfilePoint {
  double theta;
  double rate;              // D(center || theta), possibly +inf at 0 or 1
  double quadratic_approx;  // (theta - center)^2 I(center) / 2
};

struct KlProfile {
  double center;
  std::vector<KlProfilePoint> grid;
};

inline KlProfile kl_profile(double center, const std::vector<double>& grid) {
  const double info = fisher_info(center);
  KlProfile profile{center, {}};
  profile.grid.reserve(grid.size());
  for (double theta : grid) {
    const double delta = theta - center;
    profile.grid.push_back({theta, bernoulli_kl_extended(center, theta), 0.5 * info * delta * delta});
  }
  return profile;
}

struct QuadraticError {
  double exact;
  double approx;
  double error;  // exact - approx, O(|theta - L|^3)
};

inline QuadraticError kl_quadratic_error(double L, double theta) {
  if (!(L > 0.0 && L < 1.0) || !(theta > 0.0 && theta < 1.0)) {
    throw DomainError("quadratic KL comparison needs both arguments in (0,1)");
  }
  const double exact = bernoulli_kl(L, theta);
  const double delta = theta - L;
  const double approx = 0.5 * delta * delta * fisher_info(L);
  return {exact, approx, exact - approx};
}

// Posterior evaluated on a grid (Beta prior) or on the atoms (discrete
// prior). For a density, values integrate to one by the trapezoid rule.
struct SanovPosterior {
  bool is_density;
  std::vector<double> support;
  std::vector<double> values;
};

inline double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
  double total = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) total += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
  return total;
}

// Mean of a SanovPosterior (trapezoid for densities, weighted sum for atoms).
inline double posterior_mean(const SanovPosterior& post) {
  if (!post.is_density) {
    double m = 0.0;
    for (std::size_t i = 0; i < post.support.size(); ++i) m += post.support[i] * post.values[i];
    return m;
  }
  std::vector<double> weighted(post.values.size());
  for (std::size_t i = 0; i < weighted.size(); ++i) weighted[i] = post.support[i] * post.values[i];
  return trapezoid(post.support, weighted);
}

inline double beta_density(double a, double b, double theta) {
  if (theta < 0.0 || theta > 1.0) return 0.0;
  const double log_norm = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
  auto power = [](double base, double e) {
    if (e == 0.0) return 1.0;
    if (base == 0.0) return e > 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return std::pow(base, e);
  };
  return std::exp(log_norm) * power(theta, a - 1.0) * power(1.0 - theta, b - 1.0);
}

// Posterior proportional to exp(-n D(L || theta)) times the prior.
inline SanovPosterior sanov_posterior_density(const RealMeasure& prior, std::uint64_t n, double L,
                                              const std::vector<double>& grid) {
  if (!(L >= 0.0 && L <= 1.0)) throw DomainError("empirical mean must lie in [0,1]");
  const double count = static_cast<double>(n) * L;
  if (std::abs(count - std::round(count)) > 1e-9) {
    throw DomainError("n * L must be an integer success count");
  }
  const double nd = static_cast<double>(n);
  auto tilt = [&](double theta) {
    if (n == 0) return 1.0;
    const double rate = bernoulli_kl_extended(L, theta);
    return std::isinf(rate) ? 0.0 : std::exp(-nd * rate);
  };

  return prior.visit(Overloaded{
      [&](const PointMass<double>& p) {
        if (tilt(p.location) == 0.0) throw DegeneratePosterior("point mass has zero likelihood");
        return SanovPosterior{false, {p.location}, {1.0}};
      },
      [&](const DiscreteMeasure<double>& d) {
        SanovPosterior post{false, {}, {}};
        double total = 0.0;
        for (const auto& a : d.atoms) {
          post.support.push_back(a.location);
          post.values.push_back(a.weight * tilt(a.location));
          total += post.values.back();
        }
        if (!(total > 0.0)) throw DegeneratePosterior("every atom has zero likelihood");
        for (auto& v : post.values) v /= total;
        return post;
      },
      [&](const BetaMeasure<double>& b) {
        if (grid.size() < 2) throw DomainError("density grid needs at least two points");
        for (std::size_t i = 1; i < grid.size(); ++i) {
          if (!(grid[i] > grid[i - 1])) throw DomainError("density grid must be strictly increasing");
        }
        SanovPosterior post{true, grid, std::vector<double>(grid.size())};
        for (std::size_t i = 0; i < grid.size(); ++i) {
          const double t = tilt(grid[i]);
          post.values[i] = t == 0.0 ? 0.0 : t * beta_density(b.alpha, b.beta, grid[i]);
        }
        const double total = trapezoid(post.support, post.values);
        if (!std::isfinite(total) || !(total > 0.0)) {
          throw DomainError("posterior density is not integrable on this grid");
        }
        for (auto& v : post.values) v /= total;
        return post;
      },
  });
}

inline std::vector<double> uniform_grid(double lo, double hi, std::size_t points) {
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i) {
    grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  return grid;
}

}  // namespace pmh
