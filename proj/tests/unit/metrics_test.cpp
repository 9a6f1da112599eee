#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "synth.hpp"
#include "vfc/error.hpp"
#include "vfc/metrics.hpp"

namespace {

using namespace vfc;
using namespace vfc::metrics;

std::vector<ScoredPrediction> four() {
  return {{"a", 0.9, true}, {"b", 0.4, true}, {"c", 0.6, false}, {"d", 0.1, false}};
}

TEST(F1, HandConfusion) {
  const auto p = f1_at(four());
  EXPECT_EQ(p.tp, 1u);
  EXPECT_EQ(p.fn, 1u);
  EXPECT_EQ(p.fp, 1u);
  EXPECT_EQ(p.tn, 1u);
  EXPECT_DOUBLE_EQ(p.f1, 0.5);
}

TEST(F1, DegenerateCases) {
  EXPECT_DOUBLE_EQ(f1_at({{"a", 0.9, true}, {"b", 0.1, false}}).f1, 1.0);
  const auto none = f1_at({{"a", 0.1, true}, {"b", 0.1, false}});
  EXPECT_DOUBLE_EQ(none.recall, 0.0);
  EXPECT_DOUBLE_EQ(none.f1, 0.0);
  EXPECT_DOUBLE_EQ(none.precision, 0.0);
  EXPECT_THROW(f1_at({}), DataError);
}

TEST(PdS, WorkedExample) {
  EXPECT_DOUBLE_EQ(pd_s(four(), 0.0), 0.5);
  EXPECT_DOUBLE_EQ(pd_s(four(), 0.5), 0.0);
  EXPECT_DOUBLE_EQ(pd_s(four()), 0.5);
}

TEST(PdS, SeparableIsZero) {
  const std::vector<ScoredPrediction> p = {{"a", 0.9, true}, {"b", 0.8, true}, {"c", 0.2, false}};
  for (double r : {0.0, 0.005, 0.5, 1.0}) EXPECT_DOUBLE_EQ(pd_s(p, r), 0.0);
}

TEST(PdS, Errors) {
  EXPECT_THROW(pd_s({{"a", 0.9, true}}, 0.1), DataError);
  EXPECT_THROW(pd_s(four(), 1.5), ConfigError);
  EXPECT_THROW(require_scores({{"a", 1.0, true}, {"b", 0.0, false}}), CapabilityError);
  EXPECT_NO_THROW(require_scores(four()));
}

TEST(PdS, MatchesBruteForceAndMonotone) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 300; ++i) {
    const auto p = vfc::testing::random_predictions(rng, 20);
    double prev = 2.0;
    for (double r : {0.0, 0.005, 0.1, 0.25, 0.5, 1.0}) {
      const double got = pd_s(p, r);
      EXPECT_EQ(got, vfc::testing::brute_force_pd_s(p, r));
      EXPECT_LE(got, prev);
      prev = got;
    }
  }
}

TEST(PdS, MonotoneTransformInvariant) {
  std::mt19937_64 rng(22);
  for (int i = 0; i < 50; ++i) {
    auto p = vfc::testing::random_predictions(rng, 20);
    auto q = p;
    for (auto& x : q) x.score = std::exp(3 * x.score) / 30;
    EXPECT_EQ(pd_s(p, 0.1), pd_s(q, 0.1));
  }
}

TEST(Sweep, PointsAndMonotoneFpr) {
  const auto s = threshold_sweep(four());
  ASSERT_EQ(s.size(), 5u);
  EXPECT_TRUE(std::isinf(s[0].threshold));
  EXPECT_DOUBLE_EQ(s[0].fnr, 1.0);
  for (std::size_t i = 1; i < s.size(); ++i) EXPECT_GE(s[i].fpr, s[i - 1].fpr);
}

TEST(Predictions, ReadJsonl) {
  std::istringstream in("{\"id\":\"a\",\"score\":0.7,\"label\":1}\n\n{\"id\":\"b\",\"score\":0.2,\"label\":\"NonVFC\"}\n");
  const auto p = read_predictions(in);
  ASSERT_EQ(p.size(), 2u);
  EXPECT_TRUE(p[0].positive);
  EXPECT_FALSE(p[1].positive);
  std::istringstream dup("{\"id\":\"a\",\"score\":0.7,\"label\":1}\n{\"id\":\"a\",\"score\":0.2,\"label\":0}\n");
  EXPECT_THROW(read_predictions(dup), DataError);
}

}  // namespace
