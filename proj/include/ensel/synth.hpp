#pragma once

// Synthetic benchmarks: Java-like candidate programs with near-duplicate
// clusters, token traces under every model, and plausibility labels.

#include <cstdint>
#include <filesystem>
#include <vector>

#include "ensel/model.hpp"

namespace ensel {

struct SynthOptions {
  int problems = 50;
  int models = 4;  // families CL, DS, GM, MI, QW; small then large
  int outputs = 10;
  std::uint64_t seed = 1;
  double unparseable_rate = 0.05;
};

struct SynthBenchmark {
  std::vector<ModelId> models;
  std::vector<GenerationRecord> records;
  PlausibilityLabels labels;
};

SynthBenchmark make_synthetic(const SynthOptions& opts);

// Writes records.jsonl, labels.csv and config.json (one ensemble "all" over
// every model, all metrics and strategies) into `dir`.
void write_synthetic(const std::filesystem::path& dir, const SynthOptions& opts);

}  // namespace ensel
