#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "ensel/model.hpp"

namespace ensel::sim {

// metric(i, j) over pool indices; only called for scoreable i != j.
using PairMetric = std::function<double(std::size_t, std::size_t)>;

// Dense n×n table over pool positions. Entries involving unscoreable
// candidates and the diagonal are left unset.
class SimilarityMatrix {
 public:
  SimilarityMatrix() = default;
  explicit SimilarityMatrix(std::size_t n) : n_(n), values_(n * n) {}

  std::size_t size() const { return n_; }
  const std::optional<double>& at(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }
  void set(std::size_t i, std::size_t j, double v) { values_[i * n_ + j] = v; }

 private:
  std::size_t n_ = 0;
  std::vector<std::optional<double>> values_;
};

// Fills metric(i, j) for all ordered scoreable pairs. Rows are computed on
// up to `jobs` threads; each entry is independent, so the result does not
// depend on scheduling.
SimilarityMatrix similarity_matrix(const CandidatePool& pool, const PairMetric& metric,
                                   unsigned jobs = 1);

// score(i) = Σ_{j != i, j scoreable} m(i, j), summed in ascending j.
// Unscoreable candidates get nullopt. With fewer than two scoreable
// candidates every scoreable one scores 0.
std::vector<std::optional<double>> pairwise_sums(const CandidatePool& pool,
                                                 const SimilarityMatrix& m);

std::vector<std::optional<double>> pairwise_sum_scores(const CandidatePool& pool,
                                                       const PairMetric& metric,
                                                       unsigned jobs = 1);

}  // namespace ensel::sim
