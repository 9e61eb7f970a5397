#include <gtest/gtest.h>

#include "ensel/sim/codebleu.hpp"
#include "ensel/sim/pairwise.hpp"
#include "fixtures.hpp"
#include "gen.hpp"

using namespace ensel;
using namespace ensel::sim;

namespace {

CandidatePool pool_of(const std::vector<std::optional<std::string>>& codes) {
  CandidatePool p{"P", {}};
  for (std::size_t i = 0; i < codes.size(); ++i) p.candidates.push_back(fixture::record("P", "QW_L", static_cast<int>(i), codes[i]));
  return p;
}

PairMetric codebleu_on(const CandidatePool& p) {
  return [&p](std::size_t i, std::size_t j) {
    return codebleu(*p.candidates[i].extracted_code, *p.candidates[j].extracted_code, Language::Java);
  };
}

}  // namespace

TEST(PairwiseSum, ThreeIdenticalScoreTwo) {
  const auto p = pool_of({"x = 1;", "x = 1;", "x = 1;"});
  for (const auto& s : pairwise_sum_scores(p, codebleu_on(p))) EXPECT_EQ(*s, 2.0);
}

TEST(PairwiseSum, PairGetsTheMetricValue) {
  const auto p = pool_of({"a;", "b;"});
  const auto s = pairwise_sum_scores(p, [](std::size_t, std::size_t) { return 0.375; });
  EXPECT_EQ(*s[0], 0.375);
  EXPECT_EQ(*s[1], 0.375);
}

TEST(PairwiseSum, MixedPoolEqualsRowSums) {
  const auto p = pool_of({"x = 1;", std::nullopt, "y = x + 1;", "if (a) { b = c; }", "return x;"});
  const auto metric = codebleu_on(p);
  const auto got = pairwise_sum_scores(p, metric);
  EXPECT_FALSE(got[1].has_value());
  for (std::size_t i : {0u, 2u, 3u, 4u}) {
    double want = 0.0;
    for (std::size_t j : {0u, 2u, 3u, 4u}) {
      if (j != i) want += codebleu(*p.candidates[i].extracted_code, *p.candidates[j].extracted_code, Language::Java);
    }
    EXPECT_EQ(*got[i], want);
  }
}

TEST(PairwiseSum, FewerThanTwoScoreableGiveZero) {
  const auto p = pool_of({"x;", std::nullopt, std::nullopt});
  const auto s = pairwise_sum_scores(p, [](std::size_t, std::size_t) -> double { throw std::logic_error("called"); });
  EXPECT_EQ(*s[0], 0.0);
  EXPECT_FALSE(s[1].has_value());
}

TEST(PairwiseSum, AsymmetricMetricIsUsedAsWritten) {
  const auto p = pool_of({"a;", "b;", "c;"});
  const auto s = pairwise_sum_scores(p, [](std::size_t i, std::size_t j) { return 0.1 * static_cast<double>(j) + 0.01 * static_cast<double>(i); });
  EXPECT_DOUBLE_EQ(*s[0], 0.1 + 0.2);
  EXPECT_DOUBLE_EQ(*s[2], 0.02 + 0.0 + 0.02 + 0.1);
}

TEST(PairwiseSum, PermutationInvariantAndBounded) {
  testgen::Rng rng(61);
  const char* snippets[] = {"x = 1;", "x = 2;", "y = x + 1;", "return x;", "if (a) { b = c; }", "f(x);", "x = 1;"};
  for (int t = 0; t < 20; ++t) {
    std::vector<std::optional<std::string>> codes;
    for (int i = rng.range(2, 7); i > 0; --i) codes.push_back(rng.chance(0.15) ? std::nullopt : std::optional<std::string>(snippets[rng.range(0, 6)]));
    const auto p = pool_of(codes);
    const auto base = pairwise_sum_scores(p, codebleu_on(p));
    std::vector<std::size_t> perm(codes.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    rng.shuffle(perm);
    std::vector<std::optional<std::string>> shuffled;
    for (auto i : perm) shuffled.push_back(codes[i]);
    const auto q = pool_of(shuffled);
    const auto moved = pairwise_sum_scores(q, codebleu_on(q));
    for (std::size_t i = 0; i < perm.size(); ++i) {
      ASSERT_EQ(moved[i].has_value(), base[perm[i]].has_value());
      if (moved[i]) {
        // Summation order follows pool position, so permuted sums agree
        // to rounding.
        EXPECT_NEAR(*moved[i], *base[perm[i]], 1e-12);
        EXPECT_GE(*moved[i], 0.0);
        EXPECT_LE(*moved[i], static_cast<double>(codes.size() - 1));
      }
    }
  }
}

TEST(PairwiseSum, ParallelRowsMatchSerial) {
  std::vector<std::optional<std::string>> codes;
  for (int i = 0; i < 23; ++i) codes.push_back("x = " + std::to_string(i % 5) + " + y" + std::to_string(i % 3) + ";");
  const auto p = pool_of(codes);
  EXPECT_EQ(pairwise_sum_scores(p, codebleu_on(p), 1), pairwise_sum_scores(p, codebleu_on(p), 6));
}
