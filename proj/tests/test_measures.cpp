#include <gtest/gtest.h>

#include "oracles.hpp"
#include "pmh/measures.hpp"
#include "pmh/measures_io.hpp"

namespace {

using pmh::Atom;
using pmh::ExactMeasure;
using pmh::Rational;
using pmh::RealMeasure;

Rational q(const char* text) { return pmh::parse_rational(text); }

ExactMeasure symmetric_pair() {
  return ExactMeasure::discrete({{q("0.2"), q("0.5")}, {q("0.8"), q("0.5")}});
}

TEST(Moment, BetaTwoTwoSecondMoment) {
  EXPECT_EQ(pmh::moment(ExactMeasure::beta(2, 2), 2), q("0.3"));
  const double quad = oracle::beta_expectation(2, 2, [](double t) { return t * t; });
  EXPECT_NEAR(pmh::moment(RealMeasure::beta(2, 2), 2), quad, 1e-13);
}

TEST(Moment, PointMassCube) {
  EXPECT_EQ(pmh::moment(ExactMeasure::point(q("0.4")), 3), q("0.064"));
}

TEST(Moment, DiscreteDirectSum) {
  const double direct = oracle::atom_expectation({{0.2, 0.5}, {0.8, 0.5}}, [](double t) { return t * t; });
  EXPECT_EQ(pmh::moment(symmetric_pair(), 2), q("0.34"));
  EXPECT_NEAR(direct, 0.34, 1e-15);
}

TEST(Moment, ZerothMomentIsOne) {
  EXPECT_EQ(pmh::moment(ExactMeasure::jeffreys(), 0), 1);
  EXPECT_EQ(pmh::moment(RealMeasure::beta(0.3, 7.0), 0), 1.0);
}

TEST(MeanVariance, BetaFamilies) {
  const auto b22 = pmh::mean_variance(ExactMeasure::beta(2, 2));
  EXPECT_EQ(b22.mean, q("0.5"));
  EXPECT_EQ(b22.variance, q("1/20"));
  const auto b11 = pmh::mean_variance(ExactMeasure::uniform());
  EXPECT_EQ(b11.mean, q("0.5"));
  EXPECT_EQ(b11.variance, q("1/12"));
}

TEST(MeanVariance, PointMassHasNoSpread) {
  const auto mv = pmh::mean_variance(ExactMeasure::point(q("0.7")));
  EXPECT_EQ(mv.mean, q("0.7"));
  EXPECT_EQ(mv.variance, 0);
}

TEST(Posterior, JeffreysAfterFiveObservations) {
  const auto post = pmh::posterior(ExactMeasure::jeffreys(), 5, 2);
  ASSERT_NE(post.as_beta(), nullptr);
  EXPECT_EQ(post.as_beta()->alpha, q("2.5"));
  EXPECT_EQ(post.as_beta()->beta, q("3.5"));
}

TEST(Posterior, PointMassIsFixed) {
  const auto prior = ExactMeasure::point(q("0.3"));
  EXPECT_EQ(pmh::posterior(prior, 10, 4), prior);
}

TEST(Posterior, DiscreteReweighting) {
  const auto post = pmh::posterior(symmetric_pair(), 1, 1);
  const auto expected = ExactMeasure::discrete({{q("0.2"), q("0.2")}, {q("0.8"), q("0.8")}});
  EXPECT_EQ(post, expected);
}

TEST(Posterior, ZeroLikelihoodAtomsAreDropped) {
  const auto prior = ExactMeasure::discrete({{0, q("0.5")}, {q("0.5"), q("0.5")}});
  const auto post = pmh::posterior(prior, 3, 1);
  ASSERT_NE(post.as_discrete(), nullptr);
  ASSERT_EQ(post.as_discrete()->atoms.size(), 1u);
  EXPECT_EQ(post.as_discrete()->atoms[0].weight, 1);
}

TEST(Posterior, AllAtomsExcludedIsDegenerate) {
  const auto prior = ExactMeasure::discrete({{0, 1}});
  EXPECT_THROW(pmh::posterior(prior, 2, 1), pmh::DegeneratePosterior);
}

TEST(Posterior, CountsAreValidated) {
  EXPECT_THROW(pmh::posterior(ExactMeasure::uniform(), 3, 4), pmh::Error);
}

TEST(TwoPoint, EndpointBracket) {
  const auto m = q("0.3");
  const auto pair = pmh::two_point_with_mean<Rational>(0, 1, m);
  EXPECT_EQ(pair, ExactMeasure::discrete({{0, q("0.7")}, {1, q("0.3")}}));
}

TEST(TwoPoint, MotivatingBracket) {
  const auto pair = pmh::two_point_with_mean(q("0.01"), q("0.19"), q("0.1"));
  EXPECT_EQ(pair, ExactMeasure::discrete({{q("0.01"), q("0.5")}, {q("0.19"), q("0.5")}}));
}

TEST(TwoPoint, SymmetricBracket) {
  const auto pair = pmh::two_point_with_mean(q("0.4"), q("0.6"), q("0.5"));
  EXPECT_EQ(pair, ExactMeasure::discrete({{q("0.4"), q("0.5")}, {q("0.6"), q("0.5")}}));
}

TEST(TwoPoint, BadOrderingThrows) {
  EXPECT_THROW(pmh::two_point_with_mean(q("0.5"), q("0.6"), q("0.4")), pmh::InvalidBracket);
  EXPECT_THROW(pmh::two_point_with_mean(q("0.4"), q("0.4"), q("0.4")), pmh::InvalidBracket);
}

TEST(Construction, InvariantsAreEnforced) {
  EXPECT_THROW(ExactMeasure::beta(0, 1), pmh::InvalidMeasure);
  EXPECT_THROW(ExactMeasure::point(q("1.5")), pmh::InvalidMeasure);
  EXPECT_THROW(ExactMeasure::discrete({{q("0.2"), q("0.4")}}), pmh::InvalidMeasure);
  EXPECT_THROW(RealMeasure::discrete({{0.2, 0.5}, {0.3, 0.5 + 1e-9}}), pmh::InvalidMeasure);
  EXPECT_NO_THROW(RealMeasure::discrete({{0.2, 0.5}, {0.3, 0.5 + 1e-14}}));
}

TEST(Construction, ExactDuplicatesMerge) {
  const auto m = ExactMeasure::discrete({{q("0.3"), q("0.25")}, {q("0.1"), q("0.5")}, {q("0.3"), q("0.25")}});
  ASSERT_EQ(m.as_discrete()->atoms.size(), 2u);
  EXPECT_EQ(m.as_discrete()->atoms[0].location, q("0.1"));
  EXPECT_EQ(m.as_discrete()->atoms[1].weight, q("0.5"));
}

TEST(MeasureIo, SpecRoundTrip) {
  for (const char* spec : {"beta:2.5,3.5", "point:0.3", "discrete:0.01,0.5;0.19,0.5", "beta:1/3,2"}) {
    const auto m = pmh::parse_measure_spec<Rational>(spec);
    EXPECT_EQ(pmh::parse_measure_spec<Rational>(pmh::describe(m)), m) << spec;
  }
  EXPECT_EQ(pmh::parse_measure_spec<Rational>("jeffreys"), ExactMeasure::jeffreys());
  EXPECT_THROW(pmh::parse_measure_spec<Rational>("gamma:1,2"), pmh::ParseError);
  EXPECT_THROW(pmh::parse_measure_spec<Rational>("beta:1"), pmh::ParseError);
}

TEST(MeasureIo, JsonKeepsRationalsExact) {
  const auto m = ExactMeasure::discrete({{q("1/3"), q("0.5")}, {q("0.75"), q("0.5")}});
  const auto j = pmh::to_json(m);
  EXPECT_EQ(j.at("type"), "discrete");
  EXPECT_EQ(pmh::measure_from_json<Rational>(j), m);
  const auto beta = pmh::to_json(ExactMeasure::beta(q("2.5"), q("3.5")));
  EXPECT_EQ(beta.at("alpha"), "2.5");
}

TEST(Rendering, RoundHalfEven) {
  EXPECT_EQ(pmh::to_fixed(q("0.0625"), 3), "0.062");
  EXPECT_EQ(pmh::to_fixed(q("0.0635"), 3), "0.064");
  EXPECT_EQ(pmh::to_fixed(q("343/1728"), 3), "0.198");
  EXPECT_EQ(pmh::to_fixed(q("-1/8"), 2), "-0.12");
  EXPECT_EQ(pmh::to_exact_string(q("3/8")), "0.375");
  EXPECT_EQ(pmh::to_exact_string(q("1/3")), "1/3");
  EXPECT_EQ(pmh::to_fraction_string(q("0.375")), "3/8");
}

TEST(Rendering, ParseRationalForms) {
  EXPECT_EQ(q("2.5e-3"), Rational(1, 400));
  EXPECT_EQ(q("-7/12"), Rational(-7, 12));
  EXPECT_EQ(q(" 4 "), 4);
  EXPECT_THROW(q("abc"), pmh::ParseError);
  EXPECT_THROW(q("1/0"), pmh::ParseError);
  EXPECT_THROW(q("1.2.3"), pmh::ParseError);
}

}  // namespace
