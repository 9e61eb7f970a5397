#pragma once

// Domain types shared by every stage: model identities, token traces,
// generation records, candidate pools, ensembles and plausibility labels.

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "ensel/extract.hpp"

namespace ensel {

enum class SizeClass { Small, Large };

std::string_view to_string(SizeClass s);
SizeClass parse_size_class(std::string_view s);

struct ModelId {
  std::string family;
  SizeClass size_class = SizeClass::Small;
  std::string label;

  friend bool operator==(const ModelId&, const ModelId&) = default;
};

// Per-token scores of one candidate under one model. Entropies and NLLs are
// in nats.
struct TokenTrace {
  std::vector<double> token_nlls;
  std::vector<double> token_entropies;
  long long vocab_size = 2;

  // Throws DataError naming the violated field.
  void validate() const;

  friend bool operator==(const TokenTrace&, const TokenTrace&) = default;
};

struct GenerationRecord {
  std::string problem_id;
  ModelId model;
  int candidate_index = 0;
  std::string raw_output;
  std::optional<std::string> extracted_code;
  // UTF-8 byte count of extracted_code; 0 when there is no code.
  std::size_t byte_len = 0;
  TokenTrace trace;
  // Keyed by model label.
  std::map<std::string, TokenTrace> cross_traces;

  // Candidates without extracted code stay in pools but are never scored.
  bool scoreable() const { return extracted_code.has_value() && !extracted_code->empty(); }

  // Trace of this candidate under `label`. Falls back to the producer's own
  // trace when `label` is the producer and no cross entry exists.
  const TokenTrace* trace_under(std::string_view label) const;

  friend bool operator==(const GenerationRecord&, const GenerationRecord&) = default;
};

struct CandidateKey {
  std::string model;
  int candidate_index = 0;

  friend auto operator<=>(const CandidateKey&, const CandidateKey&) = default;
};

struct CandidatePool {
  std::string problem_id;
  // Sorted by (model.label, candidate_index).
  std::vector<GenerationRecord> candidates;

  std::size_t size() const { return candidates.size(); }
  CandidateKey key(std::size_t i) const {
    return {candidates[i].model.label, candidates[i].candidate_index};
  }
  std::size_t scoreable_count() const;
};

struct EnsembleSpec {
  std::string name;
  std::vector<ModelId> members;
  int n_outputs = 10;
  int k = 10;

  void validate() const;
  bool contains(std::string_view label) const;
  std::vector<std::string> labels() const;
};

// (problem_id, model label, candidate_index) -> plausible.
class PlausibilityLabels {
 public:
  using Key = std::tuple<std::string, std::string, int>;

  void set(Key key, bool plausible);
  // Throws DataError for a missing key.
  bool at(const Key& key) const;
  std::optional<bool> find(const Key& key) const;
  std::size_t size() const { return table_.size(); }
  const std::map<Key, bool>& entries() const { return table_; }

  // Keys of `records` that have no label, in record order.
  std::vector<Key> missing_for(const std::vector<GenerationRecord>& records) const;

 private:
  std::map<Key, bool> table_;
};

struct IngestOptions {
  // Extraction rule used when a line carries no extracted_code and no
  // language key of its own.
  std::string default_language = "java";
};

// One JSON object per line. Errors carry the 1-based line number.
std::vector<GenerationRecord> ingest_records(std::istream& in, const IngestOptions& opts = {});
std::vector<GenerationRecord> ingest_records(const std::filesystem::path& path,
                                             const IngestOptions& opts = {});
std::string serialize_record(const GenerationRecord& record);
void write_records(std::ostream& out, const std::vector<GenerationRecord>& records);

// Records of one problem restricted to the ensemble's members, in canonical
// order. Records of other problems are ignored; records of the problem from
// models outside the ensemble are an error.
CandidatePool build_pool(const std::vector<GenerationRecord>& records, const EnsembleSpec& spec,
                         std::string_view problem_id);

// Same as build_pool but the caller already filtered to one problem and
// to ensemble members.
CandidatePool build_pool_from(std::vector<GenerationRecord> records, const EnsembleSpec& spec,
                              std::string_view problem_id);

// Distinct models seen in the records, sorted by label. Throws if one label
// maps to different (family, size) tags or two labels share a tag pair.
std::vector<ModelId> collect_models(const std::vector<GenerationRecord>& records);

PlausibilityLabels read_labels(std::istream& in);
PlausibilityLabels read_labels(const std::filesystem::path& path);
void write_labels(std::ostream& out, const PlausibilityLabels& labels);

}  // namespace ensel
