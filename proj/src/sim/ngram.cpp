#include "ensel/sim/ngram.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ensel::sim {

namespace {

using Counts = std::unordered_map<std::string, int>;

Counts ngram_counts(const TokenSeq& seq, int n) {
  Counts counts;
  if (static_cast<int>(seq.size()) < n) return counts;
  for (std::size_t i = 0; i + n <= seq.size(); ++i) {
    // Length-prefixed so that no token content can forge a boundary.
    std::string key;
    for (int j = 0; j < n; ++j) {
      key += std::to_string(seq[i + j].size());
      key += ':';
      key += seq[i + j];
    }
    ++counts[key];
  }
  return counts;
}

// Clipped matches and total n-grams of `a` against `b`.
std::pair<long long, long long> clipped(const TokenSeq& a, const TokenSeq& b, int n) {
  Counts ca = ngram_counts(a, n);
  Counts cb = ngram_counts(b, n);
  long long matches = 0;
  for (const auto& [g, c] : ca) {
    if (auto it = cb.find(g); it != cb.end()) matches += std::min(c, it->second);
  }
  return {matches, static_cast<long long>(a.size()) - n + 1};
}

double brevity_penalty(std::size_t hyp, std::size_t ref) {
  if (hyp > ref) return 1.0;
  return std::exp(1.0 - static_cast<double>(ref) / static_cast<double>(hyp));
}

// Geometric mean of orders 2..N on top of a given unigram precision; 0 if
// any order has no support under the smoothing rule.
double combine(double p1, const TokenSeq& a, const TokenSeq& b, int order, Smoothing smoothing) {
  if (p1 <= 0.0) return 0.0;
  double log_sum = std::log(p1);
  for (int n = 2; n <= order; ++n) {
    auto [matches, total] = clipped(a, b, n);
    double p;
    if (matches > 0) {
      p = static_cast<double>(matches) / static_cast<double>(total);
    } else if (smoothing == Smoothing::AddOne) {
      p = 1.0 / static_cast<double>(total + 1);
    } else {
      return 0.0;
    }
    log_sum += std::log(p);
  }
  return brevity_penalty(a.size(), b.size()) * std::exp(log_sum / order);
}

int effective_order(const TokenSeq& a, int max_n) {
  if (max_n < 1) throw std::invalid_argument("max_n must be at least 1");
  return std::min<int>(max_n, static_cast<int>(a.size()));
}

}  // namespace

double ngram_bleu(const TokenSeq& a, const TokenSeq& b, int max_n, Smoothing smoothing) {
  const int order = effective_order(a, max_n);
  if (a.empty() || b.empty()) return 0.0;
  auto [m1, t1] = clipped(a, b, 1);
  return combine(static_cast<double>(m1) / static_cast<double>(t1), a, b, order, smoothing);
}

double KeywordWeights::of(const std::string& token) const {
  auto it = weights.find(token);
  return it == weights.end() ? default_weight : it->second;
}

KeywordWeights keyword_weights_for(const std::vector<std::string>& keyword_list, double keyword_weight) {
  KeywordWeights kw;
  for (const auto& k : keyword_list) kw.weights[k] = keyword_weight;
  return kw;
}

double weighted_ngram_match(const TokenSeq& a, const TokenSeq& b, const KeywordWeights& kw, int max_n,
                            Smoothing smoothing) {
  const int order = effective_order(a, max_n);
  if (a.empty() || b.empty()) return 0.0;
  Counts ca, cb;
  for (const auto& t : a) ++ca[t];
  for (const auto& t : b) ++cb[t];
  // Iterate tokens of `a` in sequence order so the floating sums do not
  // depend on hash-map layout.
  double num = 0.0;
  double den = 0.0;
  Counts seen;
  for (const auto& t : a) {
    if (seen[t]++ > 0) continue;
    const double w = kw.of(t);
    const int c = ca[t];
    auto it = cb.find(t);
    num += w * std::min(c, it == cb.end() ? 0 : it->second);
    den += w * c;
  }
  return combine(num / den, a, b, order, smoothing);
}

}  // namespace ensel::sim
