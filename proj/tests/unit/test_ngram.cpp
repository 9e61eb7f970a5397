#include <gtest/gtest.h>

#include <cmath>

#include "ensel/lexer.hpp"
#include "ensel/sim/ngram.hpp"
#include "gen.hpp"
#include "oracles.hpp"

using namespace ensel;
using namespace ensel::sim;

TEST(Bleu, IdentityIsOne) {
  const TokenSeq a{"int", "x", "=", "1", ";"};
  EXPECT_DOUBLE_EQ(ngram_bleu(a, a), 1.0);
}

TEST(Bleu, EmptySideIsZero) {
  EXPECT_EQ(ngram_bleu({}, {"x"}), 0.0);
  EXPECT_EQ(ngram_bleu({"x"}, {}), 0.0);
}

TEST(Bleu, ThreeTokenPairByHand) {
  // [x = 1] vs [y = 2], max_n 2: unigrams hit only "=" (1/3); bigrams
  // (x =), (= 1) have no match, smoothed to 1/3. Equal lengths.
  const auto a = tokenize("x = 1", Language::Java);
  const auto b = tokenize("y = 2", Language::Java);
  ASSERT_EQ(a.size(), 3u);
  EXPECT_NEAR(ngram_bleu(a, b, 2), std::sqrt(1.0 / 3 * 1.0 / 3), 1e-15);
}

TEST(Bleu, ZeroUnigramMatchIsZero) { EXPECT_EQ(ngram_bleu({"a", "b"}, {"c", "d"}), 0.0); }

TEST(Bleu, WithoutSmoothingMissingOrderIsZero) {
  EXPECT_EQ(ngram_bleu({"a", "b"}, {"b", "a"}, 2, Smoothing::None), 0.0);
  EXPECT_GT(ngram_bleu({"a", "b"}, {"b", "a"}, 2, Smoothing::AddOne), 0.0);
}

TEST(Bleu, ShortHypothesisIsPenalized) {
  // a = [a], b = [a a]: order 1 only, precision 1, penalty exp(1 - 2).
  EXPECT_NEAR(ngram_bleu({"a"}, {"a", "a"}), std::exp(-1.0), 1e-15);
}

TEST(Bleu, MatchesBruteForceOracle) {
  testgen::Rng rng(21);
  for (int i = 0; i < 3000; ++i) {
    const auto a = testgen::tokens(rng, 12, rng.range(2, 12));
    const auto b = testgen::tokens(rng, 12, rng.range(2, 12));
    const int n = rng.range(1, 5);
    const double got = ngram_bleu(a, b, n);
    EXPECT_NEAR(got, oracle::bleu(a, b, n), 1e-12);
    EXPECT_GE(got, 0.0);
    EXPECT_LE(got, 1.0);
  }
}

TEST(WeightedNgram, IdentityIsOne) {
  const auto kw = keyword_weights_for({"if", "return"});
  const TokenSeq a{"if", "(", "x", ")", "return", "y", ";"};
  EXPECT_DOUBLE_EQ(weighted_ngram_match(a, a, kw), 1.0);
}

TEST(WeightedNgram, KeywordMismatchCostsMore) {
  const auto kw = keyword_weights_for({"if", "while"});
  // Same position changed in both pairs, so orders >= 2 agree.
  const TokenSeq kw_a{"while", "(", "x", ")", ";"};
  const TokenSeq kw_b{"if", "(", "x", ")", ";"};
  const TokenSeq id_a{"z", "(", "x", ")", ";"};
  const TokenSeq id_b{"y", "(", "x", ")", ";"};
  EXPECT_LT(weighted_ngram_match(kw_a, kw_b, kw), weighted_ngram_match(id_a, id_b, kw));
  EXPECT_EQ(weighted_ngram_match(kw_a, kw_b, kw, 1), 4.0 / 8);
  EXPECT_EQ(weighted_ngram_match(id_a, id_b, kw, 1), 4.0 / 5);
}

TEST(WeightedNgram, AllKeywordsHalfMatching) {
  // Unigrams: for, if hit; while, do miss -> (4 + 4) / (4 * 4) = 1/2.
  // Bigrams (for if) hit, (if while), (while do) miss -> 1/3.
  // Trigrams none of 2 -> smoothed 1/3; 4-gram none of 1 -> 1/2.
  const auto kw = keyword_weights_for({"for", "if", "while", "do", "else"});
  const TokenSeq a{"for", "if", "while", "do"};
  const TokenSeq b{"for", "if", "else", "else"};
  EXPECT_NEAR(weighted_ngram_match(a, b, kw), std::pow(1.0 / 2 * 1.0 / 3 * 1.0 / 3 * 1.0 / 2, 0.25), 1e-15);
}

TEST(WeightedNgram, MatchesWeightedOracle) {
  testgen::Rng rng(22);
  const auto kw = keyword_weights_for({"if", "return", "for"});
  const std::map<std::string, double> w{{"if", 4.0}, {"return", 4.0}, {"for", 4.0}};
  for (int i = 0; i < 2000; ++i) {
    const auto a = testgen::tokens(rng, 10, 12);
    const auto b = testgen::tokens(rng, 10, 12);
    EXPECT_NEAR(weighted_ngram_match(a, b, kw), oracle::bleu(a, b, 4, &w), 1e-12);
  }
}

TEST(WeightedNgram, EqualsBleuWithoutKeywords) {
  testgen::Rng rng(23);
  const KeywordWeights none;
  for (int i = 0; i < 500; ++i) {
    const auto a = testgen::tokens(rng, 10, 6);
    const auto b = testgen::tokens(rng, 10, 6);
    EXPECT_NEAR(weighted_ngram_match(a, b, none), ngram_bleu(a, b), 1e-15);
  }
}
