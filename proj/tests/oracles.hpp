#pragma once

// Reference computations used only by the tests. They avoid the library's
// own code paths: Beta expectations by adaptive quadrature, mixture sums by
// hand, and rising factorials by naive products.

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "pmh/rational.hpp"

namespace oracle {

// E[f(theta)] for theta ~ Beta(a, b).
inline double beta_expectation(double a, double b, const std::function<double(double)>& f) {
  boost::math::quadrature::tanh_sinh<double> integrator;
  const double norm = boost::math::beta(a, b);
  auto integrand = [&](double t) { return f(t) * std::pow(t, a - 1.0) * std::pow(1.0 - t, b - 1.0); };
  return integrator.integrate(integrand, 0.0, 1.0) / norm;
}

// P(theta <= t) by integrating the density over [0, t].
inline double beta_cdf(double a, double b, double t) {
  boost::math::quadrature::tanh_sinh<double> integrator;
  auto density = [&](double x) { return std::pow(x, a - 1.0) * std::pow(1.0 - x, b - 1.0); };
  return integrator.integrate(density, 0.0, t) / boost::math::beta(a, b);
}

// E[f(theta)] for a finite mixture of (location, weight) atoms.
inline double atom_expectation(const std::vector<std::pair<double, double>>& atoms,
                               const std::function<double(double)>& f) {
  double total = 0.0;
  for (const auto& [x, w] : atoms) total += w * f(x);
  return total;
}

inline pmh::Rational rising(const pmh::Rational& x, unsigned k) {
  pmh::Rational out = 1;
  for (unsigned i = 0; i < k; ++i) out *= x + i;
  return out;
}

// (b)_k / (a + b)_k, the Beta k-step run probability.
inline pmh::Rational beta_run(const pmh::Rational& a, const pmh::Rational& b, unsigned k) {
  return rising(b, k) / rising(a + b, k);
}

inline pmh::Rational power(const pmh::Rational& x, unsigned k) {
  pmh::Rational out = 1;
  for (unsigned i = 0; i < k; ++i) out *= x;
  return out;
}

}  // namespace oracle
