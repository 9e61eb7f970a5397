#pragma once

// Scoring and selection over a whole benchmark: groups records by problem,
// computes per-problem similarity matrices once, and derives the scores of
// any ensemble from them.

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ensel/lexer.hpp"
#include "ensel/metric_kind.hpp"
#include "ensel/model.hpp"
#include "ensel/parallel.hpp"
#include "ensel/select.hpp"
#include "ensel/sim/codebleu.hpp"
#include "ensel/sim/embedding.hpp"
#include "ensel/sim/pairwise.hpp"

namespace ensel {

class Benchmark {
 public:
  explicit Benchmark(std::vector<GenerationRecord> records);

  const std::vector<GenerationRecord>& records() const { return records_; }
  // Sorted problem ids.
  const std::vector<std::string>& problems() const { return problems_; }
  // Sorted by label.
  const std::vector<ModelId>& models() const { return models_; }
  const ModelId& model(std::string_view label) const;

  // Every record of the problem, canonical order.
  CandidatePool universe(const std::string& problem_id) const;
  // Records of the problem from the ensemble's members, first n_outputs
  // outputs of each.
  CandidatePool pool(const std::string& problem_id, const EnsembleSpec& spec) const;

  // Resolves member labels to ModelIds; throws UsageError for unknown labels.
  EnsembleSpec ensemble(std::string name, const std::vector<std::string>& labels, int n_outputs,
                        int k) const;

 private:
  std::vector<GenerationRecord> records_;
  std::vector<std::string> problems_;
  std::vector<ModelId> models_;
  std::map<std::string, std::vector<std::size_t>, std::less<>> by_problem_;
};

struct EngineOptions {
  Language language = Language::Java;
  sim::CodeBleuWeights codebleu_weights{};
  std::shared_ptr<const sim::Embedder> embedder;  // null: HashingEmbedder(64)
};

// Pool-independent pairwise similarities of one problem's candidates.
struct ProblemData {
  CandidatePool universe;
  std::map<MetricKind, sim::SimilarityMatrix> similarity;
};

// Scores of one ensemble's pool for one problem.
struct ProblemScores {
  CandidatePool pool;
  std::map<MetricKind, std::vector<std::optional<double>>> scores;
  std::map<MetricKind, sim::SimilarityMatrix> similarity;
};

struct Heuristic {
  Strategy strategy = Strategy::Naive;
  std::optional<MetricKind> metric;  // unset for Naive

  // "naive" or "<metric>_<strategy>", e.g. "codebleu_diverse".
  std::string name() const;
  static Heuristic parse(std::string_view name);
};

class Engine {
 public:
  explicit Engine(EngineOptions opts = {});

  // Similarity matrices over the problem's universe pool for every
  // output-based metric in `metrics`.
  ProblemData prepare(CandidatePool universe, std::span<const MetricKind> metrics,
                      unsigned jobs = 1) const;

  // Restricts `data` to the ensemble and computes the aggregated score of
  // every metric in `metrics`.
  ProblemScores score(const ProblemData& data, const EnsembleSpec& spec,
                      std::span<const MetricKind> metrics) const;

  Selection select(const ProblemScores& ps, const EnsembleSpec& spec, const Heuristic& h,
                   std::size_t k) const;

  const EngineOptions& options() const { return opts_; }

 private:
  sim::SimilarityMatrix similarity(const CandidatePool& pool, MetricKind m, unsigned jobs) const;

  EngineOptions opts_;
  std::shared_ptr<sim::CodeBleuScorer> codebleu_;
};

// Prepared data for every problem of the benchmark (parallel over problems).
std::vector<ProblemData> prepare_all(const Benchmark& bench, const Engine& engine,
                                     std::span<const MetricKind> metrics, unsigned jobs);

// One selection per problem, in problem order.
std::vector<Selection> run_heuristic(std::span<const ProblemData> data, const EnsembleSpec& spec,
                                     const Heuristic& h, const Engine& engine, unsigned jobs);

}  // namespace ensel
