#include <gtest/gtest.h>

#include <cmath>

#include "ensel/confmetrics.hpp"
#include "ensel/error.hpp"
#include "fixtures.hpp"
#include "gen.hpp"

using namespace ensel;
using fixture::trace;

TEST(NllPerByte, Examples) {
  EXPECT_EQ(nll_per_byte(trace({1.0, 2.0}, {0, 0}), 2), 1.5);
  EXPECT_EQ(nll_per_byte(trace({0, 0, 0}, {0, 0, 0}), 7), 0.0);
  // 0.25 + 1.5 + 0.125 + 2.0 + 0.5 = 4.375 (exact in binary), / 17.
  EXPECT_EQ(nll_per_byte(trace({0.25, 1.5, 0.125, 2.0, 0.5}, {0, 0, 0, 0, 0}), 17), 4.375 / 17);
}

TEST(NllPerByte, DegeneratePatch) {
  EXPECT_THROW(nll_per_byte(trace({1.0}, {0}), 0), DataError);
  try {
    nll_per_byte(trace({}, {}), 4);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_STREQ(e.what(), "degenerate patch");
  }
}

TEST(EntropyPerByte, Examples) {
  EXPECT_EQ(entropy_per_byte(trace({0, 0}, {std::log(2.0), std::log(2.0)}), 2), std::log(2.0));
  EXPECT_EQ(entropy_per_byte(trace({1, 1}, {0, 0}), 3), 0.0);
  EXPECT_EQ(entropy_per_byte(trace({1, 1, 1}, {0.5, 0.75, 1.25}), 10), 2.5 / 10);
  EXPECT_THROW(entropy_per_byte(trace({}, {}), 3), DataError);
}

TEST(SumEntropyNorm, Examples) {
  EXPECT_EQ(sum_entropy_norm(trace({0}, {std::log(32000.0)}, 32000)), 1.0);
  EXPECT_EQ(sum_entropy_norm(trace({}, {}, 32000)), 0.0);
  EXPECT_EQ(sum_entropy_norm(trace({0, 0, 0}, {1.0, 2.0, 0.5}, 32000)), 3.5 / std::log(32000.0));
  EXPECT_THROW(sum_entropy_norm(trace({0}, {0}, 1)), DataError);
}

TEST(CrossModelSum, Examples) {
  auto r = fixture::record("P", "QW_L", 0, "ab");  // byte_len 2
  r.trace = trace({2.0}, {0});
  r.cross_traces["CL_S"] = trace({6.0}, {0});
  const EnsembleSpec two{"e", {fixture::model("QW_L"), fixture::model("CL_S")}, 10, 10};
  const EnsembleSpec one{"e", {fixture::model("QW_L")}, 10, 10};
  EXPECT_EQ(cross_model_sum(r, ConfidenceMetric::NllPerByte, two), 4.0);
  EXPECT_EQ(cross_model_sum(r, ConfidenceMetric::NllPerByte, one), 1.0);
}

TEST(CrossModelSum, MissingMemberTraceIsNamed) {
  const auto r = fixture::record("P", "QW_L", 0, "ab");
  const EnsembleSpec spec{"e", {fixture::model("QW_L"), fixture::model("DS_S")}, 10, 10};
  try {
    cross_model_sum(r, ConfidenceMetric::EntropyPerByte, spec);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("DS_S"), std::string::npos);
  }
}

TEST(CrossModelSum, FiveMembersEqualLoopOracle) {
  testgen::Rng rng(71);
  const std::vector<std::string> labels{"CL_S", "DS_L", "GM_S", "MI_L", "QW_S"};
  auto r = fixture::record("P", "CL_S", 0, "x = y + 1;");
  std::map<std::string, TokenTrace> traces;
  for (const auto& l : labels) {
    TokenTrace t{{}, {}, rng.range(2, 100000)};
    for (int i = rng.range(1, 9); i > 0; --i) {
      t.token_nlls.push_back(rng.uniform(0, 4));
      t.token_entropies.push_back(rng.uniform(0, std::log(static_cast<double>(t.vocab_size))));
    }
    traces[l] = t;
    if (l == "CL_S") r.trace = t;
    else r.cross_traces[l] = t;
  }
  EnsembleSpec spec{"e", {}, 10, 10};
  for (const auto& l : labels) spec.members.push_back(fixture::model(l));
  for (auto m : {ConfidenceMetric::NllPerByte, ConfidenceMetric::EntropyPerByte, ConfidenceMetric::SumEntropyNorm}) {
    double want = 0.0;
    for (const auto& l : labels) {
      const auto& t = traces[l];
      double s = 0.0;
      for (double x : m == ConfidenceMetric::NllPerByte ? t.token_nlls : t.token_entropies) s += x;
      want += m == ConfidenceMetric::SumEntropyNorm ? s / std::log(static_cast<double>(t.vocab_size))
                                                    : s / static_cast<double>(r.byte_len);
    }
    EXPECT_EQ(cross_model_sum(r, m, spec), want);
  }
}

TEST(CrossModelSum, MemberOrderDoesNotMatter) {
  testgen::Rng rng(72);
  const std::vector<std::string> labels{"CL_S", "DS_L", "GM_S", "MI_L", "QW_S", "QW_L"};
  for (int trial = 0; trial < 100; ++trial) {
    auto r = fixture::record("P", "QW_L", 0, "code;");
    for (const auto& l : labels) {
      TokenTrace t{{rng.uniform(0, 9), rng.uniform(0, 9)}, {rng.uniform(0, 3), rng.uniform(0, 3)}, 50000};
      if (l == "QW_L") r.trace = t;
      else r.cross_traces[l] = t;
    }
    EnsembleSpec spec{"e", {}, 10, 10};
    for (const auto& l : labels) spec.members.push_back(fixture::model(l));
    const double base = cross_model_sum(r, ConfidenceMetric::NllPerByte, spec);
    rng.shuffle(spec.members);
    EXPECT_EQ(cross_model_sum(r, ConfidenceMetric::NllPerByte, spec), base);
  }
}

TEST(Confidence, ScaleAndZeroTokenProperties) {
  testgen::Rng rng(73);
  for (int trial = 0; trial < 200; ++trial) {
    TokenTrace t{{}, {}, 32000};
    for (int i = rng.range(1, 12); i > 0; --i) {
      t.token_nlls.push_back(rng.uniform(0, 5));
      t.token_entropies.push_back(rng.uniform(0, 5));
    }
    const std::size_t bytes = static_cast<std::size_t>(rng.range(1, 200));
    // Powers of two scale every partial sum exactly.
    const double c = std::ldexp(1.0, rng.range(-3, 3));
    TokenTrace scaled = t;
    for (double& x : scaled.token_nlls) x *= c;
    EXPECT_EQ(nll_per_byte(scaled, bytes), c * nll_per_byte(t, bytes));

    TokenTrace longer = t;
    longer.token_nlls.push_back(0.0);
    longer.token_entropies.push_back(0.0);
    EXPECT_EQ(nll_per_byte(longer, bytes), nll_per_byte(t, bytes));
    EXPECT_EQ(entropy_per_byte(longer, bytes), entropy_per_byte(t, bytes));
    EXPECT_EQ(sum_entropy_norm(longer), sum_entropy_norm(t));

    EXPECT_EQ(confidence(ConfidenceMetric::SumEntropyNorm, t, bytes), confidence(ConfidenceMetric::SumEntropyNorm, t, bytes + 17));
  }
}
