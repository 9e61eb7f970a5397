#include "ensel/sim/pairwise.hpp"

#include "ensel/parallel.hpp"

namespace ensel::sim {

SimilarityMatrix similarity_matrix(const CandidatePool& pool, const PairMetric& metric, unsigned jobs) {
  const std::size_t n = pool.size();
  SimilarityMatrix m(n);
  parallel_for(n, jobs, [&](std::size_t i) {
    if (!pool.candidates[i].scoreable()) return;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i && pool.candidates[j].scoreable()) m.set(i, j, metric(i, j));
    }
  });
  return m;
}

std::vector<std::optional<double>> pairwise_sums(const CandidatePool& pool, const SimilarityMatrix& m) {
  const std::size_t n = pool.size();
  std::vector<std::optional<double>> scores(n);
  const bool enough = pool.scoreable_count() >= 2;
  for (std::size_t i = 0; i < n; ++i) {
    if (!pool.candidates[i].scoreable()) continue;
    double sum = 0.0;
    if (enough) {
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i && pool.candidates[j].scoreable()) sum += *m.at(i, j);
      }
    }
    scores[i] = sum;
  }
  return scores;
}

std::vector<std::optional<double>> pairwise_sum_scores(const CandidatePool& pool, const PairMetric& metric,
                                                       unsigned jobs) {
  return pairwise_sums(pool, similarity_matrix(pool, metric, jobs));
}

}  // namespace ensel::sim
