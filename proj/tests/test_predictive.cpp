#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "pmh/predictive.hpp"

namespace {

using pmh::ExactMeasure;
using pmh::Pattern;
using pmh::Rational;
using pmh::RealMeasure;

Rational q(const char* text) { return pmh::parse_rational(text); }

ExactMeasure symmetric_pair() {
  return ExactMeasure::discrete({{q("0.2"), q("0.5")}, {q("0.8"), q("0.5")}});
}

ExactMeasure motivating_pair() {
  return ExactMeasure::discrete({{q("0.01"), q("0.5")}, {q("0.19"), q("0.5")}});
}

TEST(PatternProb, JeffreysPosteriorDoubleZero) {
  EXPECT_EQ(pmh::pattern_prob(ExactMeasure::beta(q("2.5"), q("3.5")), Pattern::parse("00")), q("0.375"));
}

TEST(PatternProb, PointMassIsProductLaw) {
  const Rational theta = q("0.3");
  const auto p = pmh::pattern_prob(ExactMeasure::point(theta), Pattern::parse("10110"));
  EXPECT_EQ(p, oracle::power(theta, 3) * oracle::power(1 - theta, 2));
}

TEST(PatternProb, DiscreteMixtureSum) {
  EXPECT_EQ(pmh::pattern_prob(symmetric_pair(), Pattern::parse("10")), q("0.16"));
}

TEST(PatternProb, BetaAgreesWithQuadrature) {
  const double a = 1.7, b = 0.6;
  const double quad = oracle::beta_expectation(a, b, [](double t) { return t * t * (1 - t) * (1 - t) * (1 - t); });
  EXPECT_NEAR(pmh::pattern_prob(RealMeasure::beta(a, b), Pattern::parse("01010")), quad, 1e-12);
}

TEST(PatternProb, ParsingRejectsJunk) {
  EXPECT_THROW(Pattern::parse("01x"), pmh::ParseError);
  EXPECT_THROW(Pattern::parse(""), pmh::DomainError);
  EXPECT_EQ(Pattern::parse("0,1,1").str(), "011");
}

TEST(RunProb, UniformTwoSteps) {
  EXPECT_EQ(pmh::run_prob(ExactMeasure::uniform(), 2), q("1/3"));
}

TEST(RunProb, PointMassFourSteps) {
  // The 0.1^4 example is the all-ones block; the zeros run is 0.9^4.
  EXPECT_EQ(pmh::pattern_prob(ExactMeasure::point(q("0.1")), Pattern::parse("1111")), q("1e-4"));
  EXPECT_EQ(pmh::run_prob(ExactMeasure::point(q("0.1")), 4), q("0.6561"));
}

TEST(RunProb, MotivatingPairOnesRun) {
  const auto p = pmh::pattern_prob(motivating_pair(), Pattern::parse("1111"));
  const double direct = oracle::atom_expectation({{0.01, 0.5}, {0.19, 0.5}}, [](double t) { return std::pow(t, 4); });
  EXPECT_NEAR(pmh::to_double(p), direct, 1e-15);
  EXPECT_EQ(p, q("6.5161e-4"));
  EXPECT_NEAR(pmh::to_double(p), 6.6e-4, 5e-5);
}

TEST(RunProb, EqualsAllZerosPattern) {
  const auto m = ExactMeasure::beta(q("3/2"), q("7/3"));
  for (unsigned k = 1; k <= 6; ++k) EXPECT_EQ(pmh::run_prob(m, k), pmh::pattern_prob(m, Pattern::zeros(k)));
}

TEST(GapReport, JeffreysSecondStepEqualsVariance) {
  const auto post = pmh::posterior(ExactMeasure::jeffreys(), 5, 2);
  const auto g = pmh::gap_report(post, 2);
  EXPECT_EQ(g.gap, q("35/1008"));
  EXPECT_NEAR(pmh::to_double(g.gap), 0.03472, 5e-6);
}

TEST(GapReport, PointMassHasNoGap) {
  for (unsigned k = 1; k <= 7; ++k) {
    const auto g = pmh::gap_report(ExactMeasure::point(q("0.42")), k);
    EXPECT_EQ(g.gap, 0);
    EXPECT_EQ(g.upper_bound, 0);
  }
}

TEST(GapReport, BetaTwoTwo) {
  const auto g = pmh::gap_report(ExactMeasure::beta(2, 2), 2);
  EXPECT_EQ(g.bayes, q("0.3"));
  EXPECT_EQ(g.plugin, q("0.25"));
  EXPECT_EQ(g.gap, q("0.05"));
  EXPECT_EQ(g.gap, g.variance);
  EXPECT_EQ(g.upper_bound, q("0.05"));
}

TEST(PredictiveRange, HalfMeanTwoSteps) {
  const auto r = pmh::predictive_range(q("0.5"), 2);
  EXPECT_EQ(r.lo, q("0.25"));
  EXPECT_EQ(r.hi, q("0.5"));
}

TEST(PredictiveRange, EndpointsShrinkNearOne) {
  const auto r = pmh::predictive_range(1.0 - 1e-9, 3);
  EXPECT_LT(r.lo, 1e-20);
  EXPECT_LT(r.hi, 1e-8);
}

TEST(PredictiveRange, EndpointMeasuresAttainBounds) {
  const Rational m = q("0.4");
  const auto r = pmh::predictive_range(m, 3);
  EXPECT_EQ(r.lo, q("0.216"));
  EXPECT_EQ(r.hi, q("0.6"));
  EXPECT_EQ(pmh::run_prob(pmh::two_point_with_mean<Rational>(0, 1, m), 3), q("0.6"));
  EXPECT_EQ(pmh::run_prob(ExactMeasure::point(m), 3), r.lo);
}

TEST(PredictiveRange, Preconditions) {
  EXPECT_THROW(pmh::predictive_range(q("0"), 3), pmh::DomainError);
  EXPECT_THROW(pmh::predictive_range(q("0.5"), 1), pmh::DomainError);
}

TEST(PredictiveRange, BetaInteriorPointsLieInside) {
  for (int c : {1, 2, 5, 20, 100}) {
    const Rational m = q("0.35");
    const auto r = pmh::predictive_range(m, 4);
    const auto v = pmh::run_prob(ExactMeasure::beta(c * m, c * (1 - m)), 4);
    EXPECT_GT(v, r.lo);
    EXPECT_LT(v, r.hi);
  }
}

TEST(NonIdWitness, SquaredMissAtHalf) {
  const auto w = pmh::nonid_witness<Rational>(q("0.5"), pmh::ZerosRun{2}, 0, 1);
  EXPECT_DOUBLE_EQ(w.point_value, 0.25);
  EXPECT_DOUBLE_EQ(w.two_point_value, 0.5);
  EXPECT_EQ(pmh::mean(w.two_point), q("0.5"));
}

TEST(NonIdWitness, MotivatingOnesRun) {
  const auto w = pmh::nonid_witness(q("0.1"), pmh::OnesRun{4}, q("0.01"), q("0.19"));
  EXPECT_NEAR(w.point_value, 1e-4, 1e-18);
  EXPECT_NEAR(w.two_point_value, 6.6e-4, 5e-5);
  EXPECT_GT(w.two_point_value, 6 * w.point_value);
}

TEST(NonIdWitness, IndicatorBelowThreshold) {
  const auto w = pmh::nonid_witness(q("0.5"), pmh::Indicator{0.3}, q("0.2"), q("0.8"));
  EXPECT_EQ(w.point_value, 0.0);
  EXPECT_EQ(w.two_point_value, 0.5);
}

TEST(NonIdWitness, EntropyIsConcave) {
  const auto w = pmh::nonid_witness(q("0.3"), pmh::Entropy{}, q("0"), q("1"));
  EXPECT_NEAR(w.point_value, -0.3 * std::log(0.3) - 0.7 * std::log(0.7), 1e-15);
  EXPECT_EQ(w.two_point_value, 0.0);
}

TEST(NonIdWitness, BadBracketRejected) {
  EXPECT_THROW(pmh::nonid_witness(q("0.5"), pmh::ZerosRun{2}, q("0.6"), q("0.9")), pmh::InvalidBracket);
  EXPECT_THROW(pmh::nonid_witness(q("0.5"), pmh::ZerosRun{1}, q("0"), q("1")), pmh::DomainError);
}

TEST(Expectation, BetaFunctionalsAgainstQuadrature) {
  const RealMeasure beta = RealMeasure::beta(2.5, 3.5);
  const double entropy = oracle::beta_expectation(2.5, 3.5, [](double t) { return pmh::bernoulli_entropy(t); });
  EXPECT_NEAR(pmh::expectation(beta, pmh::Entropy{}), entropy, 1e-10);
  EXPECT_NEAR(pmh::expectation(beta, pmh::Indicator{0.4}), oracle::beta_cdf(2.5, 3.5, 0.4), 1e-10);
}

TEST(MonteCarlo, SingleCaseWithinThreeStandardErrors) {
  const RealMeasure post = pmh::to_real(pmh::posterior(ExactMeasure::jeffreys(), 5, 2));
  const Pattern pattern = Pattern::parse("010");
  const double exact = pmh::pattern_prob(post, pattern);
  const auto mc = pmh::simulate_pattern_frequency(post, pattern, 100000, 99);
  const double se = std::sqrt(exact * (1 - exact) / 1e5);
  EXPECT_LE(std::abs(mc.estimate - exact), 3 * se);
}

TEST(MonteCarlo, ThreadCountDoesNotChangeHits) {
  const RealMeasure m = RealMeasure::beta(0.7, 1.3);
  const Pattern pattern = Pattern::parse("0110");
  const auto one = pmh::simulate_pattern_frequency(m, pattern, 20000, 5, 3, 1);
  const auto many = pmh::simulate_pattern_frequency(m, pattern, 20000, 5, 3, 7);
  EXPECT_EQ(one.hits, many.hits);
}

}  // namespace
