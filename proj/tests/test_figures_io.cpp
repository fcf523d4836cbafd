#include <gtest/gtest.h>

#include <set>
#include <sstream>
#include <string>

#include "pmh/figures.hpp"
#include "pmh/table.hpp"

namespace {

using pmh::Rational;
using pmh::Table;

double num(const std::string& text) { return std::stod(text); }

std::string csv(const Table& t) {
  std::ostringstream os;
  pmh::write_csv(os, t);
  return os.str();
}

TEST(Figures, MomentInsufficiencyGrid) {
  const Table t = pmh::emit_figure_data("moment-insuff");
  EXPECT_EQ(t.columns, (std::vector<std::string>{"m", "k", "c", "bayes", "lo", "hi"}));
  EXPECT_EQ(t.rows.size(), 19u * 3u * 5u);
  std::set<std::string> concentrations;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const double m = num(t.at(i, "m"));
    const int k = std::stoi(t.at(i, "k"));
    concentrations.insert(t.at(i, "c"));
    EXPECT_NEAR(num(t.at(i, "lo")), std::pow(1 - m, k), 1e-11);
    EXPECT_NEAR(num(t.at(i, "hi")), 1 - m, 1e-12);
    EXPECT_GT(num(t.at(i, "bayes")), num(t.at(i, "lo")));
    EXPECT_LT(num(t.at(i, "bayes")), num(t.at(i, "hi")));
  }
  EXPECT_EQ(concentrations, (std::set<std::string>{"1", "2", "5", "20", "100"}));
}

TEST(Figures, ScoringRegretSampleSizes) {
  const Table t = pmh::emit_figure_data("scoring-regret");
  std::set<std::string> ns;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    ns.insert(t.at(i, "n"));
    EXPECT_GT(num(t.at(i, "kl_regret")), 0.0);
    EXPECT_GT(num(t.at(i, "brier_regret")), 0.0);
  }
  EXPECT_EQ(ns, (std::set<std::string>{"5", "10", "20", "50", "100"}));
}

TEST(Figures, BayesPluginGapWithinBound) {
  const Table t = pmh::emit_figure_data("bayes-plugin-gap");
  ASSERT_FALSE(t.rows.empty());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    EXPECT_GT(num(t.at(i, "gap")), 0.0);
    EXPECT_LE(num(t.at(i, "gap")), num(t.at(i, "upper_bound")) * (1 + 1e-11));
  }
  EXPECT_EQ(t.at(0, "prior"), "jeffreys");
  EXPECT_EQ(t.at(0, "n"), "5");
  EXPECT_EQ(t.at(0, "gap"), pmh::format_sig(35.0 / 1008.0));
}

TEST(Figures, ExactFiguresAreDeterministic) {
  for (const char* id : {"moment-insuff", "scoring-regret", "bayes-plugin-gap"}) {
    EXPECT_EQ(csv(pmh::emit_figure_data(id)), csv(pmh::emit_figure_data(id))) << id;
  }
}

TEST(Figures, AsymptoticNeedsSeedAndRecordsIt) {
  EXPECT_THROW(pmh::emit_figure_data("asymptotic"), pmh::DomainError);
  pmh::FigureConfig config;
  config.seed = 31;
  config.replications = 4;
  config.threads = 1;
  const Table one = pmh::emit_figure_data("asymptotic", config);
  ASSERT_FALSE(one.comments.empty());
  EXPECT_NE(one.comments[0].find("seed=31"), std::string::npos);
  config.threads = 5;
  EXPECT_EQ(csv(one), csv(pmh::emit_figure_data("asymptotic", config)));
}

TEST(Figures, UnknownId) {
  EXPECT_THROW(pmh::emit_figure_data("histogram"), pmh::UnknownFigure);
}

TEST(TableIo, CsvQuotingAndComments) {
  Table t({"a", "b"});
  t.comments.push_back("seed=1");
  t.add_row({"x,y", "say \"hi\""});
  EXPECT_EQ(csv(t), "# seed=1\na,b\n\"x,y\",\"say \"\"hi\"\"\"\n");
  EXPECT_THROW(t.add_row({"only one"}), std::logic_error);
}

TEST(TableIo, AlignedAndJson) {
  Table t({"k", "value"});
  t.add_row({"2", "0.375"});
  std::ostringstream aligned;
  pmh::write_table(aligned, t, pmh::Format::Table);
  EXPECT_EQ(aligned.str(), "k  value\n-  -----\n2  0.375\n");
  const auto j = pmh::table_to_json(t);
  EXPECT_EQ(j.at("rows").at(0).at("value"), "0.375");
  EXPECT_THROW(pmh::parse_format("xml"), pmh::ParseError);
}

TEST(TableIo, ReadSequence) {
  std::istringstream in("index,value\n# comment\n0,1\n1,1/2\n\n2,0.25\r\n");
  EXPECT_EQ(pmh::read_sequence<Rational>(in), (std::vector<Rational>{1, Rational(1, 2), Rational(1, 4)}));
  std::istringstream gap("0,1\n2,0.5\n");
  EXPECT_THROW(pmh::read_sequence<Rational>(gap), pmh::ParseError);
  std::istringstream empty("index,value\n");
  EXPECT_THROW(pmh::read_sequence<double>(empty), pmh::ParseError);
}

}  // namespace
