#pragma once

// Property suite behind `pmh verify`: one named check per invariant, each
// returning pass/fail and a short detail string. Randomized checks draw
// from a Philox stream keyed by the suite seed.

#include <array>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "pmh/beta_exact.hpp"
#include "pmh/dynamics.hpp"
#include "pmh/experiments.hpp"
#include "pmh/hierarchy.hpp"
#include "pmh/kl_geometry.hpp"
#include "pmh/measures.hpp"
#include "pmh/measures_io.hpp"
#include "pmh/predictive.hpp"
#include "pmh/rng.hpp"
#include "pmh/scoring.hpp"
#include "pmh/stopping.hpp"

namespace pmh {

inline constexpr std::uint64_t kDefaultVerifySeed = 20240611;

// Uniform integer in [lo, hi].
template <class Engine>
std::uint64_t uniform_int(Engine& engine, std::uint64_t lo, std::uint64_t hi) {
  return lo + static_cast<std::uint64_t>(uniform01(engine) * static_cast<double>(hi - lo + 1));
}

// Beta with parameters p/q (p <= 20, q <= 4), or a discrete measure with at
// most five atoms at multiples of 1/20 and integer-proportional weights.
template <class Engine>
ExactMeasure random_exact_measure(Engine& engine) {
  if (uniform01(engine) < 0.5) {
    const Rational a(static_cast<long>(uniform_int(engine, 1, 20)), static_cast<long>(uniform_int(engine, 1, 4)));
    const Rational b(static_cast<long>(uniform_int(engine, 1, 20)), static_cast<long>(uniform_int(engine, 1, 4)));
    return ExactMeasure::beta(a, b);
  }
  const auto count = uniform_int(engine, 1, 5);
  std::vector<Atom<Rational>> atoms;
  std::uint64_t total = 0;
  std::vector<std::uint64_t> raw;
  for (std::uint64_t i = 0; i < count; ++i) {
    raw.push_back(uniform_int(engine, 1, 9));
    total += raw.back();
  }
  for (std::uint64_t i = 0; i < count; ++i) {
    atoms.push_back({Rational(static_cast<long>(uniform_int(engine, 0, 20)), 20),
                     Rational(static_cast<long>(raw[i]), static_cast<long>(total))});
  }
  return ExactMeasure::discrete(std::move(atoms));
}

struct PropertyResult {
  std::string module;
  std::string name;
  bool pass;
  std::string detail;
};

struct PropertyOptions {
  std::uint64_t seed = kDefaultVerifySeed;
  unsigned threads = 0;
};

namespace detail {

struct Verdict {
  bool pass;
  std::string detail;
};

inline Verdict ok(std::string detail = {}) { return {true, std::move(detail)}; }
inline Verdict bad(std::string detail) { return {false, std::move(detail)}; }

// Central moments of theta: variance, third and fourth.
template <Scalar T>
std::array<T, 3> central_moments(const MixingMeasure<T>& m) {
  const T m1 = moment(m, 1), m2 = moment(m, 2), m3 = moment(m, 3), m4 = moment(m, 4);
  const T var = m2 - m1 * m1;
  const T c3 = m3 - T{3} * m1 * m2 + T{2} * m1 * m1 * m1;
  const T c4 = m4 - T{4} * m1 * m3 + T{6} * m1 * m1 * m2 - T{3} * m1 * m1 * m1 * m1;
  return {var, c3, c4};
}

inline std::vector<ExactMeasure> property_measures(std::uint64_t seed, std::size_t count) {
  Philox4x32 engine(seed, stream_id(7, 0));
  std::vector<ExactMeasure> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(random_exact_measure(engine));
  return out;
}

}  // namespace detail

inline std::vector<PropertyResult> run_property_suite(const PropertyOptions& options = {}) {
  using detail::bad;
  using detail::ok;
  using detail::Verdict;
  const auto measures = detail::property_measures(options.seed, 60);
  const ExactMeasure jeffreys = ExactMeasure::jeffreys();

  struct Check {
    std::string module;
    std::string name;
    std::function<Verdict()> run;
  };
  std::vector<Check> checks;

  // measures
  checks.push_back({"measures", "posterior keeps the prior family", [&] {
                      for (const auto& m : measures) {
                        for (auto [n, s] : {std::pair<std::uint64_t, std::uint64_t>{3, 1}, {7, 7}, {4, 0}}) {
                          try {
                            if (posterior(m, n, s).kind() != m.kind()) return bad(describe(m));
                          } catch (const DegeneratePosterior&) {
                            // every atom ruled out by the data; no posterior to compare
                          }
                        }
                      }
                      return ok();
                    }});
  checks.push_back({"measures", "sequential updating equals batch updating", [&] {
                      for (const auto& m : measures) {
                        ExactMeasure step = m;
                        std::uint64_t s = 0;
                        const std::uint8_t path[] = {1, 0, 0, 1, 0};
                        bool alive = true;
                        for (std::size_t i = 0; i < 5 && alive; ++i) {
                          try {
                            step = posterior(step, 1, path[i]);
                          } catch (const DegeneratePosterior&) {
                            alive = false;
                          }
                          s += path[i];
                        }
                        if (!alive) continue;
                        if (!(step == posterior(m, 5, s))) return bad(describe(m));
                      }
                      return ok();
                    }});
  checks.push_back({"measures", "Beta posterior mean is (a+s)/(a+b+n)", [&] {
                      for (const auto& m : measures) {
                        if (m.kind() != MeasureKind::Beta) continue;
                        const auto& b = *m.as_beta();
                        for (std::uint64_t n : {0U, 1U, 7U, 30U}) {
                          for (std::uint64_t s = 0; s <= n; s += 3) {
                            const Rational expect = (b.alpha + s) / (b.alpha + b.beta + n);
                            if (mean_variance(posterior(m, n, s)).mean != expect) return bad(describe(m));
                          }
                        }
                      }
                      return ok();
                    }});
  checks.push_back({"measures", "two_point_with_mean has mean m", [&] {
                      for (int a = 0; a < 10; ++a) {
                        for (int m = a + 1; m < 19; ++m) {
                          for (int b = m + 1; b <= 20; ++b) {
                            const Rational mm(m, 20);
                            if (mean(two_point_with_mean(Rational(a, 20), Rational(b, 20), mm)) != mm) {
                              return bad("bracket " + std::to_string(a) + "," + std::to_string(b));
                            }
                            const double md = m / 20.0;
                            if (std::abs(mean(two_point_with_mean(a / 20.0, b / 20.0, md)) - md) > 1e-14) {
                              return bad("double bracket");
                            }
                          }
                        }
                      }
                      return ok();
                    }});
  checks.push_back({"measures", "moments are non-increasing", [&] {
                      for (const auto& m : measures) {
                        for (unsigned j = 0; j < 12; ++j) {
                          if (moment(m, j + 1) > moment(m, j)) return bad(describe(m));
                        }
                      }
                      return ok();
                    }});

  // hierarchy
  checks.push_back({"hierarchy", "exact roundtrip for lengths up to 32", [&] {
                      for (std::size_t i = 0; i < measures.size(); ++i) {
                        const auto K = static_cast<unsigned>(1 + i % 31);
                        if (injectivity_roundtrip(measures[i], K).max_abs_error != 0) return bad(describe(measures[i]));
                      }
                      return ok();
                    }});
  checks.push_back({"hierarchy", "run sequences are completely monotone at tol 0", [&] {
                      for (const auto& m : measures) {
                        const auto runs = runs_from_moments(moment_sequence(m, 12));
                        if (!check_complete_monotonicity<Rational>(runs.values(), 12, Rational(0)).pass) {
                          return bad(describe(m));
                        }
                      }
                      return ok();
                    }});
  checks.push_back({"hierarchy", "transform matrix is triangular with unit diagonal and involutive", [&] {
                      for (unsigned K = 0; K <= 16; ++K) {
                        const auto M = transform_matrix(K);
                        for (unsigned i = 0; i <= K; ++i) {
                          if (std::abs(M[i][i]) != 1) return bad("diagonal at K=" + std::to_string(K));
                          for (unsigned j = 0; j <= K; ++j) {
                            if (j > i && M[i][j] != 0) return bad("upper entry at K=" + std::to_string(K));
                            std::int64_t sum = 0;
                            for (unsigned l = 0; l <= K; ++l) sum += M[i][l] * M[l][j];
                            if (sum != (i == j ? 1 : 0)) return bad("M*M != I at K=" + std::to_string(K));
                          }
                        }
                      }
                      return ok();
                    }});
  checks.push_back({"hierarchy", "perturbing mu_k moves r_k by (-1)^k eps", [&] {
                      const Rational eps(1, 1000);
                      for (const auto& m : measures) {
                        const auto base = moment_sequence(m, 10);
                        const std::vector<Rational> mu(base.values().begin(), base.values().end());
                        const auto r0 = signed_binomial_transform<Rational>(mu);
                        for (unsigned k = 1; k <= 10; ++k) {
                          auto bumped = mu;
                          bumped[k] += eps;
                          const auto r1 = signed_binomial_transform<Rational>(bumped);
                          const Rational expect = k % 2 == 0 ? eps : Rational(-eps);
                          if (r1[k] - r0[k] != expect) return bad("k=" + std::to_string(k));
                          for (unsigned l = 0; l < k; ++l) {
                            if (r1[l] != r0[l]) return bad("lower run moved");
                          }
                        }
                      }
                      return ok();
                    }});

  // predictive
  checks.push_back({"predictive", "pattern probabilities sum to one", [&] {
                      for (std::size_t i = 0; i < 12; ++i) {
                        for (unsigned k = 1; k <= 10; ++k) {
                          Rational total = 0;
                          for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
                            total += pattern_prob(measures[i], Pattern::from_mask(mask, k));
                          }
                          if (total != 1) return bad(describe(measures[i]));
                          double dtotal = 0.0;
                          const RealMeasure real = to_real(measures[i]);
                          for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
                            dtotal += pattern_prob(real, Pattern::from_mask(mask, k));
                          }
                          if (std::abs(dtotal - 1.0) > 1e-12) return bad("double " + describe(measures[i]));
                        }
                      }
                      return ok();
                    }});
  checks.push_back({"predictive", "Jensen gap strict for k>=2, zero at k=1", [&] {
                      for (const auto& m : measures) {
                        if (gap_report(m, 1).gap != 0) return bad("k=1 " + describe(m));
                        const bool spread = variance(m) > 0;
                        for (unsigned k = 2; k <= 8; ++k) {
                          const auto g = gap_report(m, k);
                          if (spread ? !(g.gap > 0) : g.gap != 0) return bad(describe(m));
                        }
                      }
                      return ok();
                    }});
  checks.push_back({"predictive", "k=2 gap equals the variance", [&] {
                      for (const auto& m : measures) {
                        if (gap_report(m, 2).gap != variance(m)) return bad(describe(m));
                      }
                      return ok();
                    }});
  checks.push_back({"predictive", "k=4 gap from central moments", [&] {
                      // gap_4 = 6 (1-mu1)^2 var - 4 c3 (1-mu1) + c4, with c3 and c4 the
                      // third and fourth central moments of theta.
                      for (const auto& m : measures) {
                        const RealMeasure real = to_real(m);
                        const auto [var, c3, c4] = detail::central_moments(real);
                        const double q = 1.0 - mean(real);
                        const double rhs = 6.0 * q * q * var - 4.0 * c3 * q + c4;
                        if (std::abs(gap_report(real, 4).gap - rhs) > 1e-12) return bad(describe(m));
                      }
                      return ok();
                    }});
  checks.push_back({"predictive", "block simulation matches pattern_prob", [&] {
                      Philox4x32 engine(options.seed, stream_id(11, 0));
                      for (std::uint64_t c = 0; c < 4; ++c) {
                        const RealMeasure m = to_real(measures[c]);
                        const auto k = static_cast<unsigned>(uniform_int(engine, 1, 5));
                        const Pattern p = Pattern::from_mask(uniform_int(engine, 0, (1U << k) - 1), k);
                        const double exact = pattern_prob(m, p);
                        const auto mc = simulate_pattern_frequency(m, p, 100000, options.seed, c, options.threads);
                        const double se = std::sqrt(exact * (1.0 - exact) / 100000.0);
                        if (std::abs(mc.estimate - exact) > 3.0 * se + 1e-15) {
                          return bad(describe(measures[c]) + " pattern " + p.str());
                        }
                      }
                      return ok();
                    }});
  checks.push_back({"predictive", "range endpoints are attained", [&] {
                      for (int i = 1; i < 20; ++i) {
                        const Rational m(i, 20);
                        for (unsigned k = 2; k <= 8; ++k) {
                          const auto r = predictive_range(m, k);
                          if (run_prob(ExactMeasure::point(m), k) != r.lo) return bad("lo");
                          if (run_prob(range_upper_measure(m), k) != r.hi) return bad("hi");
                        }
                      }
                      return ok();
                    }});

  // beta_exact
  checks.push_back({"beta_exact", "Hill run probability equals the Jeffreys posterior run probability", [&] {
                      for (std::uint64_t n = 0; n <= 50; ++n) {
                        for (std::uint64_t s = 0; s <= n; ++s) {
                          const ExactMeasure post = posterior(jeffreys, n, s);
                          for (unsigned k = 1; k <= 12; ++k) {
                            if (hill_run_prob(n, s, k) != run_prob(post, k)) {
                              return bad("n=" + std::to_string(n) + " s=" + std::to_string(s));
                            }
                          }
                        }
                      }
                      return ok();
                    }});
  checks.push_back({"beta_exact", "chain rule for Hill run probabilities", [&] {
                      for (std::uint64_t n = 0; n <= 30; ++n) {
                        for (std::uint64_t s = 0; s <= n; ++s) {
                          const Rational b = Rational(2 * (n - s) + 1, 2);
                          for (unsigned k = 1; k <= 10; ++k) {
                            if (hill_run_prob(n, s, k + 1) != hill_run_prob(n, s, k) * (b + k) / Rational(n + 1 + k)) {
                              return bad("n=" + std::to_string(n));
                            }
                          }
                        }
                      }
                      return ok();
                    }});
  checks.push_back({"beta_exact", "k=2 identity against the closed-form variance", [&] {
                      for (std::uint64_t n = 0; n <= 50; ++n) {
                        for (std::uint64_t s = 0; s <= n; ++s) {
                          const Rational miss = Rational(1) - hill_one_step(n, s);
                          if (hill_run_prob(n, s, 2) - miss * miss != beta_posterior_variance(BetaParams::jeffreys(), n, s)) {
                            return bad("n=" + std::to_string(n));
                          }
                        }
                      }
                      return ok();
                    }});
  checks.push_back({"beta_exact", "Beta moments through the transform give Hill run probabilities", [&] {
                      for (std::uint64_t n = 0; n <= 20; ++n) {
                        for (std::uint64_t s = 0; s <= n; ++s) {
                          std::vector<Rational> mu;
                          for (unsigned j = 0; j <= 10; ++j) mu.push_back(beta_moment(BetaParams::jeffreys(), n, s, j));
                          const auto runs = runs_from_moments(MomentSequence<Rational>(mu));
                          for (unsigned k = 1; k <= 10; ++k) {
                            if (runs[k] != hill_run_prob(n, s, k)) return bad("n=" + std::to_string(n));
                          }
                        }
                      }
                      return ok();
                    }});
  checks.push_back({"beta_exact", "outputs lie strictly inside (0,1)", [&] {
                      for (std::uint64_t n = 0; n <= 40; ++n) {
                        for (std::uint64_t s = 0; s <= n; ++s) {
                          const Rational h = hill_one_step(n, s);
                          const Rational v = beta_posterior_variance(BetaParams::uniform(), n, s);
                          if (!(h > 0 && h < 1 && v > 0 && v < 1)) return bad("n=" + std::to_string(n));
                          for (unsigned k = 1; k <= 6; ++k) {
                            const Rational r = hill_run_prob(n, s, k);
                            const Rational mu = beta_moment(BetaParams{3, 5}, n, s, k);
                            if (!(r > 0 && r < 1 && mu > 0 && mu < 1)) return bad("n=" + std::to_string(n));
                          }
                        }
                      }
                      return ok();
                    }});

  // geometry_scoring
  checks.push_back({"geometry_scoring", "log-score regret positive over a Beta grid", [&] {
                      for (int a = 1; a <= 6; ++a) {
                        for (int b = 1; b <= 6; ++b) {
                          const auto m = ExactMeasure::beta(Rational(a, 2), Rational(b, 2));
                          for (unsigned k = 2; k <= 8; ++k) {
                            const auto g = gap_report(m, k);
                            if (!(log_score_regret(to_double(g.bayes), to_double(g.plugin)) > 0.0)) {
                              return bad(describe(m));
                            }
                          }
                        }
                      }
                      return ok();
                    }});
  checks.push_back({"geometry_scoring", "Pinsker floor KL >= 2 (p-q)^2", [&] {
                      for (int i = 0; i <= 100; ++i) {
                        for (int j = 1; j < 100; ++j) {
                          const double p = i / 100.0, q = j / 100.0;
                          if (bernoulli_kl(p, q) < 2.0 * (p - q) * (p - q) - 1e-15) return bad("p=" + format_sig(p));
                        }
                      }
                      return ok();
                    }});
  checks.push_back({"geometry_scoring", "quadratic KL error scales cubically", [&] {
                      std::vector<double> xs, ys;
                      for (int i = 0; i <= 12; ++i) {
                        const double delta = std::pow(10.0, -4.0 + 3.0 * i / 12.0);
                        xs.push_back(delta);
                        ys.push_back(std::abs(kl_quadratic_error(0.4, 0.4 + delta).error));
                      }
                      const double slope = fit_loglog_slope(xs, ys, 0.0);
                      const bool pass = std::abs(slope - 3.0) <= 0.2;
                      return Verdict{pass, "slope " + format_sig(slope, 6)};
                    }});
  checks.push_back({"geometry_scoring", "Sanov tilt reproduces the conjugate posterior", [&] {
                      const auto grid = uniform_grid(1e-4, 1.0 - 1e-4, 10000);
                      for (auto [a, b, n, s] : {std::array<double, 4>{0.5, 0.5, 5, 2}, {1, 1, 12, 6}, {2, 3, 20, 15}}) {
                        const auto post = sanov_posterior_density(RealMeasure::beta(a, b), static_cast<std::uint64_t>(n),
                                                                  s / n, grid);
                        std::vector<double> conj(grid.size());
                        for (std::size_t i = 0; i < grid.size(); ++i) conj[i] = beta_density(a + s, b + n - s, grid[i]);
                        const double z = trapezoid(grid, conj);
                        for (std::size_t i = 0; i < grid.size(); ++i) {
                          if (std::abs(post.values[i] - conj[i] / z) > 1e-6) return bad("theta=" + format_sig(grid[i]));
                        }
                      }
                      return ok();
                    }});
  checks.push_back({"geometry_scoring", "plug-in strictly dominated under Jeffreys", [&] {
                      for (std::uint64_t n = 1; n <= 30; ++n) {
                        for (std::uint64_t s = 0; s <= n; ++s) {
                          for (unsigned k = 2; k <= 6; ++k) {
                            const auto r = regret_row(jeffreys, n, s, k);
                            if (!(r.kl_regret > 0.0 && r.brier_regret > 0.0)) return bad("n=" + std::to_string(n));
                          }
                        }
                      }
                      return ok();
                    }});

  // dynamics
  checks.push_back({"dynamics", "martingale increments average to zero", [&] {
                      const std::vector<MartingaleScheme<double>> schemes{
                          Counterexample{}, HarmonicRate<double>{2.0, 0.3}, PowerRate<double>{0.7, 0.6},
                          BayesMean<double>{RealMeasure::jeffreys()}};
                      const std::vector<std::uint8_t> prefix{1, 0, 0, 1, 1};
                      for (std::size_t i = 0; i < schemes.size(); ++i) {
                        // The counterexample is a martingale under its fair-coin construction.
                        const DrivingLaw law = i == 0 ? DrivingLaw::FairCoin : DrivingLaw::Predictive;
                        const auto c = martingale_check(schemes[i], prefix, 100000, options.seed + i, options.threads, law);
                        if (!c.within) return bad("scheme " + std::to_string(i));
                      }
                      return ok();
                    }});
  checks.push_back({"dynamics", "counterexample stays in [1/4, 3/4]", [&] {
                      for (unsigned n = 0; n <= 12; ++n) {
                        const auto b = enumerate_theta_bounds(MartingaleScheme<Rational>{Counterexample{}}, n);
                        if (b.min_theta < 0.25 || b.max_theta > 0.75) return bad("n=" + std::to_string(n));
                      }
                      return ok();
                    }});
  checks.push_back({"dynamics", "harmonic rate reproduces the Beta posterior mean", [&] {
                      const Rational c(3), theta0(2, 5);
                      const MartingaleScheme<Rational> scheme = HarmonicRate<Rational>{c, theta0};
                      const ExactMeasure prior = ExactMeasure::beta(c * theta0, c * (Rational(1) - theta0));
                      for (unsigned len = 0; len <= 8; ++len) {
                        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << len); ++mask) {
                          const Pattern p = len == 0 ? Pattern::zeros(1) : Pattern::from_mask(mask, len);
                          const std::vector<std::uint8_t> path = len == 0 ? std::vector<std::uint8_t>{} : p.bits();
                          const auto state = run_path(scheme, path);
                          if (state.theta != mean(posterior(prior, state.n, state.s))) return bad("len=" + std::to_string(len));
                        }
                      }
                      return ok();
                    }});
  checks.push_back({"dynamics", "stopping value gap equals the variance", [&] {
                      for (const auto& m : measures) {
                        if (stopping_value_gap(m, 6).gap != variance(m)) return bad(describe(m));
                      }
                      return ok();
                    }});
  checks.push_back({"dynamics", "experiment gaps respect the quadratic bound", [&] {
                      ExperimentSpec spec;
                      spec.theta0_list = {0.2, 0.5};
                      spec.n_grid = {5, 20, 100};
                      spec.horizons = FixedHorizons{{2, 3, 5}};
                      spec.replications = 50;
                      spec.master_seed = options.seed;
                      spec.threads = options.threads;
                      // gap_report throws when a single path breaks the bound.
                      for (const auto& row : discrepancy_experiment(spec)) {
                        const double bound = row.k * (row.k - 1) / 2.0 * row.mean_variance;
                        if (row.mean_gap < 0.0 || row.mean_gap > bound * (1.0 + 1e-12)) return bad("n=" + std::to_string(row.n));
                      }
                      return ok();
                    }});

  std::vector<PropertyResult> results;
  for (const auto& check : checks) {
    try {
      const Verdict v = check.run();
      results.push_back({check.module, check.name, v.pass, v.detail});
    } catch (const std::exception& e) {
      results.push_back({check.module, check.name, false, std::string("threw: ") + e.what()});
    }
  }
  return results;
}

}  // namespace pmh
