#include "ensel/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "ensel/csv.hpp"
#include "ensel/error.hpp"
#include "json.hpp"

namespace ensel {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

// Slack for entropies that were computed as exactly ln|V| and went through
// a decimal round trip.
constexpr double kEntropySlack = 1e-9;

const json& require(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw DataError(std::string("missing required key '") + key + "'");
  return *it;
}

template <typename T>
T get_as(const json& v, const char* key) {
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    throw DataError(std::string("field '") + key + "' has the wrong type");
  }
}

std::vector<double> get_reals(const json& obj, const char* key) {
  const json& v = require(obj, key);
  if (!v.is_array()) throw DataError(std::string("field '") + key + "' must be an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& x : v) {
    if (!x.is_number()) throw DataError(std::string("field '") + key + "' must hold numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

TokenTrace parse_trace(const json& obj) {
  TokenTrace t;
  t.token_nlls = get_reals(obj, "token_nlls");
  t.token_entropies = get_reals(obj, "token_entropies");
  const json& v = require(obj, "vocab_size");
  if (!v.is_number_integer()) throw DataError("field 'vocab_size' must be an integer");
  t.vocab_size = v.get<long long>();
  return t;
}

ordered_json trace_json(const TokenTrace& t) {
  ordered_json o;
  o["token_nlls"] = t.token_nlls;
  o["token_entropies"] = t.token_entropies;
  o["vocab_size"] = t.vocab_size;
  return o;
}

GenerationRecord parse_record(const json& obj, const IngestOptions& opts) {
  if (!obj.is_object()) throw DataError("record is not a JSON object");
  GenerationRecord r;
  r.problem_id = get_as<std::string>(require(obj, "problem_id"), "problem_id");
  if (r.problem_id.empty()) throw DataError("field 'problem_id' is empty");
  r.model.label = get_as<std::string>(require(obj, "model"), "model");
  if (r.model.label.empty()) throw DataError("field 'model' is empty");
  r.model.family = get_as<std::string>(require(obj, "family"), "family");
  r.model.size_class = parse_size_class(get_as<std::string>(require(obj, "size_class"), "size_class"));
  const json& idx = require(obj, "candidate_index");
  if (!idx.is_number_integer()) throw DataError("field 'candidate_index' must be an integer");
  r.candidate_index = idx.get<int>();
  if (r.candidate_index < 0) throw DataError("field 'candidate_index' is negative");
  r.raw_output = get_as<std::string>(require(obj, "raw_output"), "raw_output");

  r.trace = parse_trace(obj);
  try {
    r.trace.validate();
  } catch (const DataError& e) {
    throw DataError(std::string("trace: ") + e.what());
  }

  const json& cross = require(obj, "cross_traces");
  if (!cross.is_object()) throw DataError("field 'cross_traces' must be an object");
  for (const auto& [label, tj] : cross.items()) {
    if (!tj.is_object()) throw DataError("cross_traces['" + label + "'] must be an object");
    try {
      TokenTrace t = parse_trace(tj);
      t.validate();
      r.cross_traces.emplace(label, std::move(t));
    } catch (const DataError& e) {
      throw DataError("cross_traces['" + label + "']: " + e.what());
    }
  }

  auto code = obj.find("extracted_code");
  if (code != obj.end() && !code->is_null()) {
    r.extracted_code = get_as<std::string>(*code, "extracted_code");
  } else {
    std::string lang = opts.default_language;
    if (auto l = obj.find("language"); l != obj.end()) lang = get_as<std::string>(*l, "language");
    r.extracted_code = extract_code(r.raw_output, lang);
  }
  r.byte_len = r.extracted_code ? r.extracted_code->size() : 0;

  if (auto bl = obj.find("byte_len"); bl != obj.end() && !bl->is_null()) {
    if (!bl->is_number_integer()) throw DataError("field 'byte_len' must be an integer");
    if (bl->get<long long>() != static_cast<long long>(r.byte_len)) {
      throw DataError("field 'byte_len' (" + std::to_string(bl->get<long long>()) +
                      ") does not match the UTF-8 length of extracted_code (" +
                      std::to_string(r.byte_len) + ")");
    }
  }
  return r;
}

}  // namespace

std::string_view to_string(SizeClass s) { return s == SizeClass::Small ? "small" : "large"; }

SizeClass parse_size_class(std::string_view s) {
  if (s == "small") return SizeClass::Small;
  if (s == "large") return SizeClass::Large;
  throw DataError("field 'size_class' must be \"small\" or \"large\", got \"" + std::string(s) + "\"");
}

void TokenTrace::validate() const {
  if (token_nlls.size() != token_entropies.size()) {
    throw DataError("token_nlls and token_entropies differ in length (" +
                    std::to_string(token_nlls.size()) + " vs " +
                    std::to_string(token_entropies.size()) + ")");
  }
  if (vocab_size < 1) throw DataError("field 'vocab_size' must be positive");
  for (double v : token_nlls) {
    if (!std::isfinite(v) || v < 0.0) throw DataError("token_nlls must be finite and non-negative");
  }
  const double max_entropy = std::log(static_cast<double>(vocab_size));
  for (double e : token_entropies) {
    if (!std::isfinite(e) || e < 0.0) {
      throw DataError("token_entropies must be finite and non-negative");
    }
    if (e > max_entropy + kEntropySlack) throw DataError("entropy exceeds ln|V|");
  }
}

const TokenTrace* GenerationRecord::trace_under(std::string_view label) const {
  if (auto it = cross_traces.find(std::string(label)); it != cross_traces.end()) return &it->second;
  if (label == model.label) return &trace;
  return nullptr;
}

std::size_t CandidatePool::scoreable_count() const {
  return static_cast<std::size_t>(
      std::count_if(candidates.begin(), candidates.end(), [](const auto& c) { return c.scoreable(); }));
}

void EnsembleSpec::validate() const {
  if (members.empty()) throw UsageError("ensemble '" + name + "' has no members");
  if (n_outputs < 1 || k < 1) throw UsageError("ensemble '" + name + "': n_outputs and k must be positive");
  std::set<std::string> labels;
  std::set<std::pair<std::string, SizeClass>> tags;
  for (const auto& m : members) {
    if (!labels.insert(m.label).second) {
      throw UsageError("ensemble '" + name + "' lists model '" + m.label + "' twice");
    }
    if (!tags.insert({m.family, m.size_class}).second) {
      throw UsageError("ensemble '" + name + "' has two " + std::string(to_string(m.size_class)) +
                       " models of family '" + m.family + "'");
    }
  }
  if (static_cast<long long>(k) > static_cast<long long>(members.size()) * n_outputs) {
    throw UsageError("ensemble '" + name + "': k exceeds members × n_outputs");
  }
}

bool EnsembleSpec::contains(std::string_view label) const {
  return std::any_of(members.begin(), members.end(), [&](const ModelId& m) { return m.label == label; });
}

std::vector<std::string> EnsembleSpec::labels() const {
  std::vector<std::string> out;
  for (const auto& m : members) out.push_back(m.label);
  return out;
}

void PlausibilityLabels::set(Key key, bool plausible) { table_[std::move(key)] = plausible; }

bool PlausibilityLabels::at(const Key& key) const {
  auto it = table_.find(key);
  if (it == table_.end()) {
    throw DataError("no plausibility label for (" + std::get<0>(key) + ", " + std::get<1>(key) + ", " +
                    std::to_string(std::get<2>(key)) + ")");
  }
  return it->second;
}

std::optional<bool> PlausibilityLabels::find(const Key& key) const {
  auto it = table_.find(key);
  if (it == table_.end()) return std::nullopt;
  return it->second;
}

std::vector<PlausibilityLabels::Key> PlausibilityLabels::missing_for(
    const std::vector<GenerationRecord>& records) const {
  std::vector<Key> out;
  for (const auto& r : records) {
    Key k{r.problem_id, r.model.label, r.candidate_index};
    if (!table_.contains(k)) out.push_back(std::move(k));
  }
  return out;
}

std::vector<GenerationRecord> ingest_records(std::istream& in, const IngestOptions& opts) {
  std::vector<GenerationRecord> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      json obj;
      try {
        obj = json::parse(line);
      } catch (const json::parse_error& e) {
        throw DataError(std::string("malformed JSON: ") + e.what());
      }
      out.push_back(parse_record(obj, opts));
    } catch (const DataError& e) {
      throw DataError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::vector<GenerationRecord> ingest_records(const std::filesystem::path& path, const IngestOptions& opts) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open records file " + path.string());
  try {
    return ingest_records(in, opts);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::string serialize_record(const GenerationRecord& r) {
  ordered_json o;
  o["problem_id"] = r.problem_id;
  o["model"] = r.model.label;
  o["family"] = r.model.family;
  o["size_class"] = to_string(r.model.size_class);
  o["candidate_index"] = r.candidate_index;
  o["raw_output"] = r.raw_output;
  if (r.extracted_code) {
    o["extracted_code"] = *r.extracted_code;
    o["byte_len"] = r.byte_len;
  }
  o["token_nlls"] = r.trace.token_nlls;
  o["token_entropies"] = r.trace.token_entropies;
  o["vocab_size"] = r.trace.vocab_size;
  ordered_json cross = ordered_json::object();
  for (const auto& [label, t] : r.cross_traces) cross[label] = trace_json(t);
  o["cross_traces"] = std::move(cross);
  return o.dump();
}

void write_records(std::ostream& out, const std::vector<GenerationRecord>& records) {
  for (const auto& r : records) out << serialize_record(r) << '\n';
}

CandidatePool build_pool_from(std::vector<GenerationRecord> records, const EnsembleSpec& spec,
                              std::string_view problem_id) {
  std::set<std::pair<std::string, int>> seen;
  for (const auto& r : records) {
    if (r.problem_id != problem_id) {
      throw DataError("record of problem '" + r.problem_id + "' in pool of '" + std::string(problem_id) + "'");
    }
    auto it = std::find_if(spec.members.begin(), spec.members.end(),
                           [&](const ModelId& m) { return m.label == r.model.label; });
    if (it == spec.members.end()) {
      throw DataError("problem '" + r.problem_id + "': model '" + r.model.label +
                      "' is not a member of ensemble '" + spec.name + "'");
    }
    if (!(*it == r.model)) {
      throw DataError("model '" + r.model.label + "' has family/size tags that disagree with ensemble '" +
                      spec.name + "'");
    }
    if (r.candidate_index >= spec.n_outputs) {
      throw DataError("problem '" + r.problem_id + "': model '" + r.model.label + "' candidate_index " +
                      std::to_string(r.candidate_index) + " is out of range for n_outputs " +
                      std::to_string(spec.n_outputs));
    }
    if (!seen.insert({r.model.label, r.candidate_index}).second) {
      throw DataError("problem '" + r.problem_id + "': duplicate candidate (" + r.model.label + ", " +
                      std::to_string(r.candidate_index) + ")");
    }
  }
  std::sort(records.begin(), records.end(), [](const GenerationRecord& a, const GenerationRecord& b) {
    return std::tie(a.model.label, a.candidate_index) < std::tie(b.model.label, b.candidate_index);
  });
  return CandidatePool{std::string(problem_id), std::move(records)};
}

CandidatePool build_pool(const std::vector<GenerationRecord>& records, const EnsembleSpec& spec,
                         std::string_view problem_id) {
  std::vector<GenerationRecord> mine;
  for (const auto& r : records) {
    if (r.problem_id == problem_id) mine.push_back(r);
  }
  return build_pool_from(std::move(mine), spec, problem_id);
}

std::vector<ModelId> collect_models(const std::vector<GenerationRecord>& records) {
  std::map<std::string, ModelId> by_label;
  std::map<std::pair<std::string, SizeClass>, std::string> by_tag;
  for (const auto& r : records) {
    auto [it, inserted] = by_label.emplace(r.model.label, r.model);
    if (!inserted && !(it->second == r.model)) {
      throw DataError("model '" + r.model.label + "' appears with different family/size tags");
    }
    if (inserted) {
      auto [t, fresh] = by_tag.emplace(std::pair{r.model.family, r.model.size_class}, r.model.label);
      if (!fresh) {
        throw DataError("models '" + t->second + "' and '" + r.model.label + "' are both " +
                        std::string(to_string(r.model.size_class)) + " models of family '" +
                        r.model.family + "'");
      }
    }
  }
  std::vector<ModelId> out;
  for (auto& [_, m] : by_label) out.push_back(m);
  return out;
}

PlausibilityLabels read_labels(std::istream& in) {
  csv::Table t = csv::read(in, "labels");
  const auto pc = t.column("problem_id", "labels");
  const auto mc = t.column("model", "labels");
  const auto ic = t.column("candidate_index", "labels");
  const auto lc = t.column("plausible", "labels");
  PlausibilityLabels labels;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    const std::string where = "labels:" + std::to_string(t.line_numbers[r]) + ": ";
    int idx = 0;
    try {
      std::size_t used = 0;
      idx = std::stoi(row[ic], &used);
      if (used != row[ic].size() || idx < 0) throw std::invalid_argument("index");
    } catch (const std::exception&) {
      throw DataError(where + "bad candidate_index '" + row[ic] + "'");
    }
    if (row[lc] != "0" && row[lc] != "1") {
      throw DataError(where + "plausible must be 0 or 1, got '" + row[lc] + "'");
    }
    PlausibilityLabels::Key key{row[pc], row[mc], idx};
    if (labels.find(key)) throw DataError(where + "duplicate label");
    labels.set(std::move(key), row[lc] == "1");
  }
  return labels;
}

PlausibilityLabels read_labels(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open labels file " + path.string());
  return read_labels(in);
}

void write_labels(std::ostream& out, const PlausibilityLabels& labels) {
  out << "problem_id,model,candidate_index,plausible\n";
  for (const auto& [key, v] : labels.entries()) {
    out << csv::join({std::get<0>(key), std::get<1>(key), std::to_string(std::get<2>(key)), v ? "1" : "0"})
        << '\n';
  }
}

}  // namespace ensel
