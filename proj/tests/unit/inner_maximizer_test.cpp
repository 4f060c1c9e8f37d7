#include "gencur/inner_maximizer.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "gencur/bench.hpp"
#include "gencur/errors.hpp"

namespace gencur {
namespace {

TEST(InnerMaximizerTest, FindsUnimodalGridArgmax) {
  const auto s = ActionSpace::Grid({GridAxis{0.0, 1.0, 200}});
  Rng rng = make_rng(1);
  auto score = [&](std::size_t i) { return -std::abs(s.point(i).coords()[0] - 0.6231); };
  const auto r = maximize(s, {}, score, rng);
  EXPECT_EQ(r.index, s.snap(ActionPoint::Continuous({0.6231})));
}

TEST(InnerMaximizerTest, FindsTwoDimensionalArgmax) {
  const auto s = ActionSpace::Grid({GridAxis{-3.0, 3.0, 60}, GridAxis{-3.0, 3.0, 60}});
  Rng rng = make_rng(2);
  auto score = [&](std::size_t i) {
    const auto& c = s.point(i).coords();
    return -(c[0] - 1.1) * (c[0] - 1.1) - 2.0 * (c[1] + 0.4) * (c[1] + 0.4);
  };
  const auto r = maximize(s, {}, score, rng);
  EXPECT_EQ(r.index, s.snap(ActionPoint::Continuous({1.1, -0.4})));
  EXPECT_DOUBLE_EQ(r.score, score(r.index));
}

TEST(InnerMaximizerTest, AnnealingSolvesSmallKnapsacks) {
  int solved = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Problem p = make_knapsack(10, 20, seed);
    Rng rng = make_rng(seed + 100);
    const auto r = maximize(p.space, {}, [&](std::size_t i) { return p.y_values[i]; }, rng);
    const double best = *std::max_element(p.y_values.begin(), p.y_values.end());
    solved += p.y_values[r.index] == best;
  }
  // The fixed 2000-step schedule occasionally stalls one swap short.
  EXPECT_GE(solved, 15);
}

TEST(InnerMaximizerTest, DeterministicGivenRngState) {
  const Problem p = make_knapsack(10, 20, 4);
  Rng a = make_rng(9);
  Rng b = make_rng(9);
  auto score = [&](std::size_t i) { return p.y_values[i]; };
  EXPECT_EQ(maximize(p.space, {}, score, a).index, maximize(p.space, {}, score, b).index);
}

TEST(InnerMaximizerTest, ConfigValidation) {
  InnerMaximizerConfig c;
  c.restarts = 0;
  EXPECT_THROW(c.validate(), ArgumentError);
  c = {};
  c.initial_stride = 0.0;
  EXPECT_THROW(c.validate(), ArgumentError);
  c = {};
  c.anneal_steps = 0;
  EXPECT_THROW(c.validate(), ArgumentError);
}

}  // namespace
}  // namespace gencur
