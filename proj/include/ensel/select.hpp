#pragma once

// Selection strategies: pick k candidates from a scored pool.
//
// Ties are always broken by canonical pool order (ascending model label,
// then candidate index), which is the order of CandidatePool::candidates.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ensel/metric_kind.hpp"
#include "ensel/model.hpp"
#include "ensel/sim/pairwise.hpp"

namespace ensel {

enum class Direction { HigherIsConsensus, LowerIsConsensus };

enum class Strategy { Highest, Lowest, Diverse, Naive };

std::string_view to_string(Strategy s);
Strategy parse_strategy(std::string_view s);

struct ScoredPool {
  const CandidatePool* pool = nullptr;
  // Indexed like pool->candidates; set exactly for scoreable candidates.
  std::vector<std::optional<double>> scores;
  Direction direction = Direction::HigherIsConsensus;

  // Throws std::invalid_argument if scores disagree with scoreability.
  void validate() const;
};

struct Selection {
  std::string problem_id;
  std::string strategy;
  std::vector<CandidateKey> picks;
};

// Symmetric distance between pool positions.
using Distance = std::function<double(std::size_t, std::size_t)>;

Selection select_highest(const ScoredPool& sp, std::size_t k);
Selection select_lowest(const ScoredPool& sp, std::size_t k);

// Seeds with the highest- and lowest-scored candidates, then repeatedly adds
// the candidate whose minimum distance to the current selection is largest.
// If the same candidate is both extremes (all scores equal) the seed is that
// single candidate.
Selection select_diverse(const ScoredPool& sp, const Distance& distance, std::size_t k);

// Metric-blind: floor(k / m) leading outputs from every member (m members,
// in ensemble order), plus output number floor(k / m) from the first
// k mod m members. Outputs missing from the pool are skipped.
Selection select_naive(const CandidatePool& pool, const EnsembleSpec& spec, std::size_t k);

// Positions selected, for callers that work on indices.
std::vector<std::size_t> selection_positions(const CandidatePool& pool, const Selection& sel);

// 1 - (m(i,j) + m(j,i)) / 2 for output-based similarities.
Distance similarity_distance(const sim::SimilarityMatrix& m);
// |score(i) - score(j)| for confidence scores.
Distance score_gap_distance(const std::vector<std::optional<double>>& scores);

// Diversity distance for a metric: similarity_distance over `matrix` for
// output-based metrics, score_gap_distance over `scores` for confidence
// metrics. Both referenced objects must outlive the returned function.
Distance distance_for(MetricKind kind, const sim::SimilarityMatrix& matrix,
                      const std::vector<std::optional<double>>& scores);

// Similarities agree when larger; confidences (nll, entropy) when smaller.
constexpr Direction direction_of(MetricKind m) {
  return is_output_based(m) ? Direction::HigherIsConsensus : Direction::LowerIsConsensus;
}

}  // namespace ensel
