#pragma once

// BLEU-style n-gram similarity terms used by CodeBLEU.
//
// Both functions treat `a` as the hypothesis and `b` as the reference:
// precisions are taken over the n-grams of `a` and the brevity penalty
// compares |a| against |b|. Orders n > |a| contribute no n-grams and are
// left out of the geometric mean.

#include <string>
#include <unordered_map>
#include <vector>

namespace ensel::sim {

using TokenSeq = std::vector<std::string>;

enum class Smoothing {
  None,
  // For n >= 2, a zero match count becomes 1 / (total + 1).
  AddOne,
};

inline constexpr int kDefaultMaxN = 4;

double ngram_bleu(const TokenSeq& a, const TokenSeq& b, int max_n = kDefaultMaxN,
                  Smoothing smoothing = Smoothing::AddOne);

// token -> weight; tokens not in the map weigh `default_weight`.
struct KeywordWeights {
  std::unordered_map<std::string, double> weights;
  double default_weight = 1.0;

  double of(const std::string& token) const;
};

inline constexpr double kKeywordWeight = 4.0;

// Every keyword of the language at kKeywordWeight, everything else at 1.
KeywordWeights keyword_weights_for(const std::vector<std::string>& keyword_list,
                                   double keyword_weight = kKeywordWeight);

// CodeBLEU's weighted n-gram term: unigram precision weights each token by
// its keyword weight; orders >= 2 are plain clipped precisions.
double weighted_ngram_match(const TokenSeq& a, const TokenSeq& b, const KeywordWeights& kw,
                            int max_n = kDefaultMaxN, Smoothing smoothing = Smoothing::AddOne);

}  // namespace ensel::sim
