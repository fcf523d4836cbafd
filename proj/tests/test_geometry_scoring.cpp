#include <gtest/gtest.h>

#include <boost/math/distributions/beta.hpp>

#include <cmath>
#include <limits>
#include <vector>

#include "pmh/beta_exact.hpp"
#include "pmh/kl_geometry.hpp"
#include "pmh/scoring.hpp"

namespace {

using pmh::ExactMeasure;
using pmh::Rational;
using pmh::RealMeasure;

// Long-double evaluation of the same sum, used as the reference.
double kl_reference(long double p, long double q) {
  long double out = 0;
  if (p > 0) out += p * std::log(p / q);
  if (p < 1) out += (1 - p) * std::log((1 - p) / (1 - q));
  return static_cast<double>(out);
}

TEST(BernoulliKl, Examples) {
  EXPECT_EQ(pmh::bernoulli_kl(0.4, 0.4), 0.0);
  EXPECT_NEAR(pmh::bernoulli_kl(0.4, 0.5), 0.020136, 5e-7);
  EXPECT_NEAR(pmh::bernoulli_kl(0.4, 0.5), kl_reference(0.4L, 0.5L), 1e-15);
  EXPECT_DOUBLE_EQ(pmh::bernoulli_kl(0.0, 0.5), std::log(2.0));
}

TEST(BernoulliKl, BoundaryHandling) {
  EXPECT_THROW(pmh::bernoulli_kl(0.3, 0.0), pmh::DomainError);
  EXPECT_THROW(pmh::bernoulli_kl(0.3, 1.0), pmh::DomainError);
  EXPECT_EQ(pmh::bernoulli_kl(1.0, 1.0), 0.0);
  EXPECT_TRUE(std::isinf(pmh::bernoulli_kl_extended(0.3, 0.0)));
}

TEST(FisherInfo, Examples) {
  EXPECT_DOUBLE_EQ(pmh::fisher_info(0.5), 4.0);
  EXPECT_NEAR(pmh::fisher_info(0.4), 25.0 / 6.0, 1e-14);
  EXPECT_NEAR(pmh::fisher_info(0.1), 100.0 / 9.0, 1e-13);
  EXPECT_THROW(pmh::fisher_info(0.0), pmh::DomainError);
  EXPECT_THROW(pmh::fisher_info(1.0), pmh::DomainError);
}

TEST(KlQuadraticError, Examples) {
  const auto e = pmh::kl_quadratic_error(0.4, 0.5);
  EXPECT_NEAR(e.exact, 0.020136, 5e-7);
  EXPECT_NEAR(e.approx, 0.020833, 5e-7);
  // -0.000697 is the difference of the rounded values; unrounded it is -0.000698.
  EXPECT_NEAR(e.error, -0.000697, 1e-6);
  EXPECT_NEAR(e.error, e.exact - e.approx, 0.0);
  const auto zero = pmh::kl_quadratic_error(0.4, 0.4);
  EXPECT_EQ(zero.exact, 0.0);
  EXPECT_EQ(zero.approx, 0.0);
  EXPECT_EQ(zero.error, 0.0);
  EXPECT_LE(std::abs(pmh::kl_quadratic_error(0.5, 0.501).error), 1e-8);
  EXPECT_THROW(pmh::kl_quadratic_error(0.0, 0.5), pmh::DomainError);
}

TEST(KlQuadraticError, CubicScaling) {
  std::vector<double> lx, ly;
  for (int i = 0; i <= 12; ++i) {
    const double delta = std::pow(10.0, -4.0 + 3.0 * i / 12.0);
    lx.push_back(std::log(delta));
    ly.push_back(std::log(std::abs(pmh::kl_quadratic_error(0.4, 0.4 + delta).error)));
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= lx.size();
  my /= ly.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  EXPECT_NEAR(sxy / sxx, 3.0, 0.2);
}

TEST(KlProfile, RateVanishesOnlyAtCenter) {
  const auto profile = pmh::kl_profile(0.3, pmh::uniform_grid(0.0, 1.0, 11));
  for (const auto& point : profile.grid) {
    if (std::abs(point.theta - 0.3) < 1e-12) {
      EXPECT_EQ(point.rate, 0.0);
    } else {
      EXPECT_GT(point.rate, 0.0);
      EXPECT_GT(point.quadratic_approx, 0.0);
    }
  }
  EXPECT_TRUE(std::isinf(profile.grid.front().rate));
}

TEST(SanovPosterior, JeffreysMeanMatchesHill) {
  const auto grid = pmh::uniform_grid(0.0, 1.0, 20001);
  const auto post = pmh::sanov_posterior_density(RealMeasure::jeffreys(), 5, 0.4, grid);
  EXPECT_NEAR(pmh::posterior_mean(post), pmh::to_double(pmh::hill_one_step(5, 2)), 1e-3);
}

TEST(SanovPosterior, NoDataReturnsPrior) {
  const auto grid = pmh::uniform_grid(0.0, 1.0, 1001);
  const auto post = pmh::sanov_posterior_density(RealMeasure::beta(2, 3), 0, 0.0, grid);
  const boost::math::beta_distribution<double> prior(2, 3);
  for (std::size_t i = 0; i < grid.size(); i += 50) {
    EXPECT_NEAR(post.values[i], boost::math::pdf(prior, grid[i]), 1e-5);
  }
}

TEST(SanovPosterior, SymmetricAtomsGetEqualWeight) {
  const auto prior = RealMeasure::discrete({{0.2, 0.5}, {0.8, 0.5}});
  const auto post = pmh::sanov_posterior_density(prior, 12, 0.5, {});
  ASSERT_EQ(post.values.size(), 2u);
  EXPECT_NEAR(post.values[0], 0.5, 1e-15);
  EXPECT_NEAR(post.values[1], 0.5, 1e-15);
}

TEST(SanovPosterior, MatchesConjugateDensity) {
  const auto grid = pmh::uniform_grid(0.0, 1.0, 10000);
  const auto post = pmh::sanov_posterior_density(RealMeasure::beta(2, 2), 20, 0.35, grid);
  const boost::math::beta_distribution<double> conjugate(2 + 7, 2 + 13);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    ASSERT_NEAR(post.values[i], boost::math::pdf(conjugate, grid[i]), 1e-6) << grid[i];
  }
}

TEST(SanovPosterior, NonIntegerCountRejected) {
  EXPECT_THROW(pmh::sanov_posterior_density(RealMeasure::jeffreys(), 5, 0.3, pmh::uniform_grid(0, 1, 11)),
               pmh::DomainError);
}

TEST(LogScoreRegret, Examples) {
  EXPECT_NEAR(pmh::log_score_regret(0.375, 0.340278), 0.0026, 1e-4);
  EXPECT_NEAR(pmh::log_score_regret(0.186, 0.1158), 0.021, 1e-3);
  EXPECT_EQ(pmh::log_score_regret(0.2, 0.2), 0.0);
  EXPECT_THROW(pmh::log_score_regret(1.0, 0.5), pmh::DomainError);
}

TEST(LogScoreRegret, ExactInputsNearPublishedValue) {
  const double pb = pmh::to_double(pmh::hill_run_prob(5, 2, 2));
  const double pp = pmh::to_double(Rational(49, 144));
  EXPECT_NEAR(pmh::log_score_regret(pb, pp), 0.00264439, 1e-8);
  EXPECT_NEAR(pmh::log_score_regret(pb, pp), 0.0026, 2e-4);
  EXPECT_NEAR(pmh::log_score_regret(pb, pp), kl_reference(3.0L / 8, 49.0L / 144), 1e-15);
}

TEST(BrierRegret, Examples) {
  const auto row = pmh::regret_row(ExactMeasure::jeffreys(), 5, 2, 2);
  EXPECT_NEAR(row.brier_regret, std::pow(35.0 / 1008.0, 2), 1e-16);
  EXPECT_NEAR(row.brier_regret, 1.2056e-3, 5e-8);
  EXPECT_EQ(pmh::brier_regret(0.3, 0.3), 0.0);
  EXPECT_EQ(pmh::brier_regret(1.0, 0.0), 1.0);
}

TEST(Scoring, SuccessesForRatioRoundsHalfUp) {
  EXPECT_EQ(pmh::successes_for_ratio(5, Rational(2, 5)), 2u);
  EXPECT_EQ(pmh::successes_for_ratio(5, Rational(1, 2)), 3u);
  EXPECT_EQ(pmh::successes_for_ratio(0, Rational(2, 5)), 0u);
}

TEST(Scoring, DominanceOnJeffreysGrid) {
  for (std::uint64_t n : {1, 5, 20, 80}) {
    for (std::uint64_t s = 0; s <= n; s += std::max<std::uint64_t>(1, n / 5)) {
      for (unsigned k = 2; k <= 8; ++k) {
        const auto row = pmh::regret_row(ExactMeasure::jeffreys(), n, s, k);
        EXPECT_GT(row.kl_regret, 0.0);
        EXPECT_GT(row.brier_regret, 0.0);
      }
    }
  }
}

TEST(Scoring, PinskerFloor) {
  for (double p = 0.0; p <= 1.0; p += 0.05) {
    for (double qv = 0.05; qv < 1.0; qv += 0.05) {
      EXPECT_GE(pmh::bernoulli_kl(p, qv) + 1e-15, 2 * (p - qv) * (p - qv));
    }
  }
}

}  // namespace
