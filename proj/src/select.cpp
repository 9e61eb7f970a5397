#include "ensel/select.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ensel/error.hpp"

namespace ensel {

namespace {

std::vector<std::size_t> scored_positions(const ScoredPool& sp) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < sp.scores.size(); ++i) {
    if (sp.scores[i]) out.push_back(i);
  }
  return out;
}

Selection make_selection(const ScoredPool& sp, std::string strategy, const std::vector<std::size_t>& picks) {
  Selection sel{sp.pool->problem_id, std::move(strategy), {}};
  for (auto i : picks) sel.picks.push_back(sp.pool->key(i));
  return sel;
}

// Positions sorted by score (descending when `highest`), ties by position.
std::vector<std::size_t> ranked(const ScoredPool& sp, bool highest) {
  sp.validate();
  std::vector<std::size_t> idx = scored_positions(sp);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return highest ? *sp.scores[a] > *sp.scores[b] : *sp.scores[a] < *sp.scores[b];
  });
  return idx;
}

}  // namespace

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::Highest:
      return "highest";
    case Strategy::Lowest:
      return "lowest";
    case Strategy::Diverse:
      return "diverse";
    case Strategy::Naive:
      return "naive";
  }
  return "?";
}

Strategy parse_strategy(std::string_view s) {
  for (Strategy x : {Strategy::Highest, Strategy::Lowest, Strategy::Diverse, Strategy::Naive}) {
    if (to_string(x) == s) return x;
  }
  throw UsageError("unknown strategy '" + std::string(s) + "' (expected highest, lowest, diverse or naive)");
}

void ScoredPool::validate() const {
  if (pool == nullptr) throw std::invalid_argument("scored pool without a pool");
  if (scores.size() != pool->size()) throw std::invalid_argument("score vector does not match pool size");
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (scores[i].has_value() != pool->candidates[i].scoreable()) {
      throw std::invalid_argument("scores must be set exactly for scoreable candidates");
    }
  }
}

Selection select_highest(const ScoredPool& sp, std::size_t k) {
  auto idx = ranked(sp, true);
  idx.resize(std::min(k, idx.size()));
  return make_selection(sp, "highest", idx);
}

Selection select_lowest(const ScoredPool& sp, std::size_t k) {
  auto idx = ranked(sp, false);
  idx.resize(std::min(k, idx.size()));
  return make_selection(sp, "lowest", idx);
}

Selection select_diverse(const ScoredPool& sp, const Distance& distance, std::size_t k) {
  sp.validate();
  const std::vector<std::size_t> cands = scored_positions(sp);
  std::vector<std::size_t> picked;
  if (cands.size() < 2 || k == 0) {
    for (std::size_t i = 0; i < std::min(k, cands.size()); ++i) picked.push_back(cands[i]);
    return make_selection(sp, "diverse", picked);
  }

  std::size_t hi = cands.front();
  std::size_t lo = cands.front();
  for (auto i : cands) {
    if (*sp.scores[i] > *sp.scores[hi]) hi = i;
    if (*sp.scores[i] < *sp.scores[lo]) lo = i;
  }
  picked.push_back(hi);
  if (lo != hi && k >= 2) picked.push_back(lo);

  const std::size_t target = std::min(k, cands.size());
  std::vector<bool> taken(sp.scores.size(), false);
  for (auto i : picked) taken[i] = true;
  // min distance from each candidate to the current selection
  std::vector<double> nearest(sp.scores.size(), std::numeric_limits<double>::infinity());
  for (auto c : cands) {
    for (auto s : picked) nearest[c] = std::min(nearest[c], distance(c, s));
  }
  while (picked.size() < target) {
    std::size_t best = sp.scores.size();
    for (auto c : cands) {
      if (taken[c]) continue;
      if (best == sp.scores.size() || nearest[c] > nearest[best]) best = c;
    }
    picked.push_back(best);
    taken[best] = true;
    for (auto c : cands) {
      if (!taken[c]) nearest[c] = std::min(nearest[c], distance(c, best));
    }
  }
  return make_selection(sp, "diverse", picked);
}

Selection select_naive(const CandidatePool& pool, const EnsembleSpec& spec, std::size_t k) {
  Selection sel{pool.problem_id, "naive", {}};
  const std::size_t m = spec.members.size();
  if (m == 0) return sel;
  const std::size_t quota = k / m;
  const std::size_t extra = k % m;
  auto present = [&](const std::string& label, int idx) {
    return std::any_of(pool.candidates.begin(), pool.candidates.end(), [&](const GenerationRecord& r) {
      return r.model.label == label && r.candidate_index == idx;
    });
  };
  for (std::size_t mi = 0; mi < m; ++mi) {
    const std::size_t take = quota + (mi < extra ? 1 : 0);
    for (std::size_t j = 0; j < take; ++j) {
      const int idx = static_cast<int>(j);
      if (present(spec.members[mi].label, idx)) sel.picks.push_back({spec.members[mi].label, idx});
    }
  }
  return sel;
}

std::vector<std::size_t> selection_positions(const CandidatePool& pool, const Selection& sel) {
  std::vector<std::size_t> out;
  for (const auto& key : sel.picks) {
    auto it = std::find_if(pool.candidates.begin(), pool.candidates.end(), [&](const GenerationRecord& r) {
      return r.model.label == key.model && r.candidate_index == key.candidate_index;
    });
    if (it == pool.candidates.end()) throw DataError("selected candidate is not in the pool");
    out.push_back(static_cast<std::size_t>(it - pool.candidates.begin()));
  }
  return out;
}

Distance similarity_distance(const sim::SimilarityMatrix& m) {
  return [&m](std::size_t i, std::size_t j) {
    if (i == j) return 0.0;
    return 1.0 - (*m.at(i, j) + *m.at(j, i)) / 2.0;
  };
}

Distance score_gap_distance(const std::vector<std::optional<double>>& scores) {
  return [&scores](std::size_t i, std::size_t j) { return std::abs(*scores[i] - *scores[j]); };
}

Distance distance_for(MetricKind kind, const sim::SimilarityMatrix& matrix,
                      const std::vector<std::optional<double>>& scores) {
  return is_output_based(kind) ? similarity_distance(matrix) : score_gap_distance(scores);
}

}  // namespace ensel
