#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <numeric>
#include <vector>

#include "pmh/parallel.hpp"
#include "pmh/rng.hpp"

namespace {

using Block = pmh::Philox4x32::Block;

TEST(Philox, KnownAnswerZero) {
  EXPECT_EQ(pmh::Philox4x32::generate({0, 0, 0, 0}, {0, 0}),
            (Block{0x6627e8d5U, 0xe169c58dU, 0xbc57ac4cU, 0x9b00dbd8U}));
}

TEST(Philox, KnownAnswerOnes) {
  EXPECT_EQ(pmh::Philox4x32::generate({0xffffffffU, 0xffffffffU, 0xffffffffU, 0xffffffffU},
                                      {0xffffffffU, 0xffffffffU}),
            (Block{0x408f276dU, 0x41c83b0eU, 0xa20bc7c6U, 0x6d5451fdU}));
}

TEST(Philox, KnownAnswerPi) {
  EXPECT_EQ(pmh::Philox4x32::generate({0x243f6a88U, 0x85a308d3U, 0x13198a2eU, 0x03707344U},
                                      {0xa4093822U, 0x299f31d0U}),
            (Block{0xd16cfe09U, 0x94fdccebU, 0x5001e420U, 0x24126ea1U}));
}

TEST(Philox, StreamsAreReproducibleAndDistinct) {
  pmh::Philox4x32 a(42, 3), b(42, 3), c(42, 4), d(43, 3);
  for (int i = 0; i < 10; ++i) {
    const auto x = a();
    EXPECT_EQ(x, b());
    EXPECT_NE(x, c());
    EXPECT_NE(x, d());
  }
}

TEST(Philox, UniformMeanAndRange) {
  pmh::Philox4x32 engine(1, 0);
  double sum = 0;
  for (int i = 0; i < 100000; ++i) {
    const double u = pmh::uniform01(engine);
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 1e5, 0.5, 3 * std::sqrt(1.0 / 12.0 / 1e5));
}

TEST(StreamId, CellsDoNotCollide) {
  EXPECT_NE(pmh::stream_id(0, 1), pmh::stream_id(1, 0));
  EXPECT_EQ(pmh::stream_id(2, 5), (std::uint64_t{2} << 32) ^ 5);
}

TEST(ParallelFor, EveryIndexOnce) {
  std::vector<int> hits(1000, 0);
  pmh::parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; }, 7);
  EXPECT_EQ(std::accumulate(hits.begin(), hits.end(), 0), 1000);
  EXPECT_EQ(*std::min_element(hits.begin(), hits.end()), 1);
}

TEST(ParallelFor, ExceptionsPropagate) {
  EXPECT_THROW(pmh::parallel_for(
                   100, [](std::size_t i) {
                     if (i == 57) throw std::runtime_error("boom");
                   },
                   4),
               std::runtime_error);
}

}  // namespace
