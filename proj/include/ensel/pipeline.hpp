#pragma once

// The staged batch pipeline behind the CLI: score -> select -> report, with
// plain files between stages.
//
//   <out>/scores/<ensemble>.csv            per-candidate aggregated scores
//   <out>/scores/similarity/<metric>.csv   pairwise similarities per problem
//   <out>/selections/<ensemble>/<heuristic>.csv
//   <out>/report/{strategy_table,theoretical_max,unique,solved_sets,fai}.csv
//   <out>/report/pairs_<heuristic>.csv, <out>/report/summary.md

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ensel/analyze.hpp"
#include "ensel/engine.hpp"
#include "ensel/metric_kind.hpp"
#include "ensel/select.hpp"

namespace ensel {

struct EnsembleConfig {
  std::string name;
  std::vector<std::string> members;
  int n_outputs = 10;
  int k = 10;
};

struct PairSweepConfig {
  Heuristic heuristic;
  PairBaseline baseline = PairBaseline::BestSingle;
};

struct RunConfig {
  std::filesystem::path records;
  std::filesystem::path labels;
  std::optional<std::filesystem::path> embeddings;
  std::size_t embedding_dim = 64;  // hashing embedder when no sidecar
  std::string language = "java";
  std::vector<EnsembleConfig> ensembles;
  std::vector<MetricKind> metrics;
  std::vector<Strategy> strategies;  // Naive always runs
  std::optional<std::vector<std::string>> pair_models;  // default: every model
  std::vector<PairSweepConfig> pair_sweeps;
  int pair_n_outputs = 10;
  int pair_k = 10;
  std::filesystem::path out = "out";
  unsigned jobs = 1;

  // Metric × strategy heuristics (strategies other than naive), then naive.
  std::vector<Heuristic> heuristics() const;
  void validate() const;
};

// JSON config. Relative paths resolve against the config file's directory.
// Missing keys take the defaults above; "metrics" defaults to all five,
// "strategies" to highest/lowest/diverse/naive, "pair_sweeps" to
// naive-vs-best_single plus codebleu_diverse-vs-naive.
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(const std::string& json_text, const std::filesystem::path& base_dir);

struct ConfigOverrides {
  std::optional<std::filesystem::path> out;
  std::optional<unsigned> jobs;
  std::vector<std::string> ensembles;  // keep only these (by name)
  std::vector<std::string> metrics;    // replace the metric list
  std::vector<std::string> strategies; // replace the strategy list
};

void apply_overrides(RunConfig& cfg, const ConfigOverrides& o);

void cmd_score(const RunConfig& cfg);
void cmd_select(const RunConfig& cfg);
void cmd_report(const RunConfig& cfg);
void cmd_all(const RunConfig& cfg);

// File name stem for an ensemble or problem id: [A-Za-z0-9._-] kept, other
// bytes written as %XX.
std::string file_stem(std::string_view name);

}  // namespace ensel
