#include "ensel/sim/codebleu.hpp"

#include <algorithm>
#include <cmath>

#include "ensel/error.hpp"

namespace ensel::sim {

void CodeBleuWeights::validate() const {
  double sum = 0.0;
  for (double x : w) {
    if (!(x >= 0.0)) throw UsageError("CodeBLEU weights must be non-negative");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw UsageError("CodeBLEU weights must sum to 1");
}

double combine_terms(const CodeBleuTerms& t, const CodeBleuWeights& weights) {
  const auto& w = weights.w;
  double num = w[0] * t.bleu + w[1] * t.weighted_ngram;
  double den = w[0] + w[1];
  if (t.syntax) {
    num += w[2] * *t.syntax;
    den += w[2];
  }
  if (t.dataflow) {
    num += w[3] * *t.dataflow;
    den += w[3];
  }
  if (den <= 0.0) return 0.0;
  // Full weight set: no rescaling, so (1,0,0,0) reproduces BLEU exactly.
  if (t.syntax && t.dataflow) return num;
  return num / den;
}

CodeBleuScorer::CodeBleuScorer(Language lang, CodeBleuWeights weights)
    : CodeBleuScorer(lang, weights, std::make_shared<BracketTreeProvider>(lang),
                     std::make_shared<AssignmentDataflowProvider>(lang)) {}

CodeBleuScorer::CodeBleuScorer(Language lang, CodeBleuWeights weights, std::shared_ptr<const TreeProvider> trees,
                               std::shared_ptr<const DataflowProvider> flows)
    : lang_(lang), weights_(weights), trees_(std::move(trees)), flows_(std::move(flows)) {
  weights_.validate();
  const auto& kws = keywords(lang_);
  std::vector<std::string> list(kws.begin(), kws.end());
  keyword_weights_ = keyword_weights_for(list);
}

CodeFeatures CodeBleuScorer::features(std::string_view code) const {
  CodeFeatures f;
  f.tokens = tokenize(code, lang_);
  if (auto tree = trees_->parse(code)) {
    f.subtrees = subtree_hashes(*tree);
    f.subtrees_sorted = *f.subtrees;
    std::sort(f.subtrees_sorted->begin(), f.subtrees_sorted->end());
  }
  f.dataflow = flows_->extract(code);
  return f;
}

CodeBleuTerms CodeBleuScorer::terms(const CodeFeatures& a, const CodeFeatures& b) const {
  CodeBleuTerms t;
  t.bleu = ngram_bleu(a.tokens, b.tokens);
  t.weighted_ngram = weighted_ngram_match(a.tokens, b.tokens, keyword_weights_);
  if (a.subtrees && b.subtrees) t.syntax = syntax_match_hashes(*a.subtrees, *b.subtrees_sorted);
  if (a.dataflow && b.dataflow) t.dataflow = dataflow_match(*a.dataflow, *b.dataflow);
  t.total = combine_terms(t, weights_);
  return t;
}

double CodeBleuScorer::score(const CodeFeatures& a, const CodeFeatures& b) const { return terms(a, b).total; }

double CodeBleuScorer::score(std::string_view a, std::string_view b) const {
  return score(features(a), features(b));
}

double codebleu(std::string_view code_a, std::string_view code_b, Language lang, const CodeBleuWeights& weights) {
  return CodeBleuScorer(lang, weights).score(code_a, code_b);
}

}  // namespace ensel::sim
