#pragma once

// Reference implementations written from the metric definitions, kept
// independent of the library code they check.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace oracle {

using Tokens = std::vector<std::string>;

// BLEU with clipped n-gram counts found by exhaustive pairing, add-one
// smoothing for n >= 2, orders up to min(max_n, |a|), brevity penalty on
// |a| vs |b|. weights, when given, weigh unigrams per token.
double bleu(const Tokens& a, const Tokens& b, int max_n,
            const std::map<std::string, double>* unigram_weights = nullptr);

// Greedy-max F3 with clamped cosines.
double bertscore_f3(const std::vector<std::vector<double>>& a, const std::vector<std::vector<double>>& b);

// Seed with argmax/argmin score (first in order on ties), then farthest
// point by max-min distance (first in order on ties). Indices refer to the
// given order; nullopt scores are skipped.
std::vector<std::size_t> diverse(const std::vector<std::optional<double>>& scores,
                                 const std::vector<std::vector<double>>& dist, std::size_t k);

using Solved = std::map<std::string, std::set<int>>;

std::size_t union_size(const std::vector<std::string>& models, const Solved& s);
std::map<std::string, std::size_t> unique_counts(const std::vector<std::string>& models, const Solved& s);
std::set<int> hard(const std::vector<std::string>& small, const Solved& s, int problems);
// nullopt when the small model solves no hard problem.
std::optional<double> cond_rate(const std::set<int>& hard, const std::set<int>& given, const std::set<int>& target);

}  // namespace oracle
