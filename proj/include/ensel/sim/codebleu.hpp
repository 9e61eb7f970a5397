#pragma once

// CodeBLEU: weighted combination of BLEU, keyword-weighted n-gram match,
// syntax-tree match and data-flow match.

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "ensel/lexer.hpp"
#include "ensel/sim/dataflow.hpp"
#include "ensel/sim/ngram.hpp"
#include "ensel/sim/syntax_tree.hpp"

namespace ensel::sim {

// (bleu, weighted n-gram, syntax, dataflow); non-negative, summing to 1.
struct CodeBleuWeights {
  std::array<double, 4> w{0.25, 0.25, 0.25, 0.25};

  void validate() const;
};

struct CodeBleuTerms {
  double bleu = 0.0;
  double weighted_ngram = 0.0;
  std::optional<double> syntax;    // nullopt: tree provider failed
  std::optional<double> dataflow;  // nullopt: dataflow provider failed
  double total = 0.0;
};

// Everything CodeBLEU needs from one snippet, computed once.
struct CodeFeatures {
  TokenSeq tokens;
  std::optional<std::vector<std::uint64_t>> subtrees;         // pre-order
  std::optional<std::vector<std::uint64_t>> subtrees_sorted;  // for lookups
  std::optional<DataflowSet> dataflow;
};

// Combines the four terms; excluded terms drop out and the remaining
// weights are rescaled to sum to 1. All-excluded (zero remaining weight)
// yields 0.
double combine_terms(const CodeBleuTerms& terms, const CodeBleuWeights& weights);

class CodeBleuScorer {
 public:
  // Default providers for `lang`.
  explicit CodeBleuScorer(Language lang, CodeBleuWeights weights = {});
  CodeBleuScorer(Language lang, CodeBleuWeights weights, std::shared_ptr<const TreeProvider> trees,
                 std::shared_ptr<const DataflowProvider> flows);

  CodeFeatures features(std::string_view code) const;
  CodeBleuTerms terms(const CodeFeatures& a, const CodeFeatures& b) const;
  double score(const CodeFeatures& a, const CodeFeatures& b) const;
  double score(std::string_view a, std::string_view b) const;

  const CodeBleuWeights& weights() const { return weights_; }
  const KeywordWeights& keyword_weights() const { return keyword_weights_; }

 private:
  Language lang_;
  CodeBleuWeights weights_;
  KeywordWeights keyword_weights_;
  std::shared_ptr<const TreeProvider> trees_;
  std::shared_ptr<const DataflowProvider> flows_;
};

// One-shot convenience with default providers.
double codebleu(std::string_view code_a, std::string_view code_b, Language lang,
                const CodeBleuWeights& weights = {});

}  // namespace ensel::sim
