#include "ensel/pipeline.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "ensel/csv.hpp"
#include "ensel/error.hpp"
#include "ensel/parallel.hpp"
#include "json.hpp"

namespace ensel {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// --- config --------------------------------------------------------------

template <typename T>
T get_as(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw UsageError(std::string("config: bad value for '") + key + "'");
  }
}

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

std::vector<std::string> string_list(const json& j, const char* key) {
  auto v = get_as<std::vector<std::string>>(j, key);
  return v;
}

// --- files -----------------------------------------------------------------

void write_file(const fs::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  out.close();
  if (!out) throw DataError("cannot write " + path.string());
}

std::string row(std::initializer_list<std::string> fields) { return csv::join(std::vector<std::string>(fields)) + "\n"; }

double parse_double(const std::string& s, const std::string& where) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) {
    throw DataError(where + ": bad number '" + s + "'");
  }
  return v;
}

int parse_int(const std::string& s, const std::string& where) {
  errno = 0;
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE || v < INT32_MIN || v > INT32_MAX) {
    throw DataError(where + ": bad integer '" + s + "'");
  }
  return static_cast<int>(v);
}

std::string where(const fs::path& path, int line) { return path.string() + ":" + std::to_string(line); }

fs::path scores_dir(const RunConfig& cfg) { return cfg.out / "scores"; }
fs::path scores_file(const RunConfig& cfg, const std::string& ensemble) {
  return scores_dir(cfg) / (file_stem(ensemble) + ".csv");
}
fs::path similarity_file(const RunConfig& cfg, MetricKind m) {
  return scores_dir(cfg) / "similarity" / (std::string(to_string(m)) + ".csv");
}
fs::path selection_file(const RunConfig& cfg, const std::string& ensemble, const Heuristic& h) {
  return cfg.out / "selections" / file_stem(ensemble) / (h.name() + ".csv");
}

// --- shared loading ----------------------------------------------------------

struct Loaded {
  Benchmark bench;
  Engine engine;
  std::vector<EnsembleSpec> ensembles;
};

Engine make_engine(const RunConfig& cfg) {
  EngineOptions opts;
  opts.language = parse_language(cfg.language);
  if (cfg.embeddings) {
    opts.embedder = std::make_shared<sim::EmbeddingTable>(sim::EmbeddingTable::read(*cfg.embeddings));
  } else {
    opts.embedder = std::make_shared<sim::HashingEmbedder>(cfg.embedding_dim);
  }
  return Engine(std::move(opts));
}

Loaded load(const RunConfig& cfg) {
  cfg.validate();
  IngestOptions io;
  io.default_language = cfg.language;
  Loaded l{Benchmark(ingest_records(cfg.records, io)), make_engine(cfg), {}};
  for (const auto& e : cfg.ensembles) l.ensembles.push_back(l.bench.ensemble(e.name, e.members, e.n_outputs, e.k));
  return l;
}

std::vector<MetricKind> output_based(std::vector<MetricKind> metrics) {
  std::erase_if(metrics, [](MetricKind m) { return !is_output_based(m); });
  std::sort(metrics.begin(), metrics.end());
  metrics.erase(std::unique(metrics.begin(), metrics.end()), metrics.end());
  return metrics;
}

// Universe pools of every problem with the similarity matrices of `metrics`
// read back from the score stage's files.
std::vector<ProblemData> load_problem_data(const RunConfig& cfg, const Benchmark& bench,
                                           const std::vector<MetricKind>& metrics) {
  std::vector<ProblemData> data;
  std::map<std::string, std::size_t, std::less<>> problem_pos;
  std::vector<std::map<CandidateKey, std::size_t>> key_pos;
  for (const auto& pid : bench.problems()) {
    problem_pos[pid] = data.size();
    data.push_back({bench.universe(pid), {}});
    auto& kp = key_pos.emplace_back();
    for (std::size_t i = 0; i < data.back().universe.size(); ++i) kp[data.back().universe.key(i)] = i;
  }
  for (MetricKind m : output_based(metrics)) {
    const fs::path path = similarity_file(cfg, m);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("missing similarity file for metric '" + std::string(to_string(m)) + "': " + path.string());
    const auto table = csv::read(in, path.string());
    const std::size_t c_pid = table.column("problem_id", path.string());
    const std::size_t c_ma = table.column("model_a", path.string());
    const std::size_t c_ia = table.column("index_a", path.string());
    const std::size_t c_mb = table.column("model_b", path.string());
    const std::size_t c_ib = table.column("index_b", path.string());
    const std::size_t c_v = table.column("value", path.string());
    for (auto& d : data) d.similarity[m] = sim::SimilarityMatrix(d.universe.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      const auto& f = table.rows[r];
      const std::string at = where(path, table.line_numbers[r]);
      auto pit = problem_pos.find(f[c_pid]);
      if (pit == problem_pos.end()) throw DataError(at + ": unknown problem '" + f[c_pid] + "'");
      const auto& kp = key_pos[pit->second];
      auto a = kp.find({f[c_ma], parse_int(f[c_ia], at)});
      auto b = kp.find({f[c_mb], parse_int(f[c_ib], at)});
      if (a == kp.end() || b == kp.end()) throw DataError(at + ": unknown candidate");
      data[pit->second].similarity[m].set(a->second, b->second, parse_double(f[c_v], at));
    }
  }
  return data;
}

// Per-candidate scores of one ensemble read back from its score file.
using ScoreRows = std::map<std::tuple<std::string, std::string, int>, std::vector<std::optional<double>>>;

ScoreRows load_scores(const RunConfig& cfg, const std::string& ensemble, const std::vector<MetricKind>& metrics) {
  ScoreRows out;
  if (metrics.empty()) return out;
  const fs::path path = scores_file(cfg, ensemble);
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::string names;
    for (MetricKind m : metrics) names += (names.empty() ? "" : ", ") + std::string(to_string(m));
    throw DataError("missing score file " + path.string() + " for metric(s) " + names);
  }
  const auto table = csv::read(in, path.string());
  const std::size_t c_pid = table.column("problem_id", path.string());
  const std::size_t c_model = table.column("model", path.string());
  const std::size_t c_idx = table.column("candidate_index", path.string());
  std::vector<std::size_t> cols;
  for (MetricKind m : metrics) {
    auto it = std::find(table.header.begin(), table.header.end(), to_string(m));
    if (it == table.header.end()) {
      throw DataError("score file " + path.string() + " has no scores for metric '" + std::string(to_string(m)) + "'");
    }
    cols.push_back(static_cast<std::size_t>(it - table.header.begin()));
  }
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& f = table.rows[r];
    const std::string at = where(path, table.line_numbers[r]);
    std::vector<std::optional<double>> v;
    for (auto c : cols) {
      if (f[c].empty()) {
        v.emplace_back();
      } else {
        v.emplace_back(parse_double(f[c], at));
      }
    }
    out[{f[c_pid], f[c_model], parse_int(f[c_idx], at)}] = std::move(v);
  }
  return out;
}

std::vector<Selection> read_selections(const fs::path& path, const std::vector<std::string>& problems,
                                       const std::string& strategy) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("missing selection file: " + path.string());
  const auto table = csv::read(in, path.string());
  const std::size_t c_pid = table.column("problem_id", path.string());
  const std::size_t c_model = table.column("model", path.string());
  const std::size_t c_idx = table.column("candidate_index", path.string());
  std::map<std::string, std::size_t, std::less<>> pos;
  std::vector<Selection> out;
  for (const auto& p : problems) {
    pos[p] = out.size();
    out.push_back({p, strategy, {}});
  }
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& f = table.rows[r];
    const std::string at = where(path, table.line_numbers[r]);
    auto it = pos.find(f[c_pid]);
    if (it == pos.end()) throw DataError(at + ": unknown problem '" + f[c_pid] + "'");
    out[it->second].picks.push_back({f[c_model], parse_int(f[c_idx], at)});
  }
  return out;
}

std::string format_missing(const std::vector<PlausibilityLabels::Key>& missing) {
  constexpr std::size_t kShown = 20;
  std::string msg = std::to_string(missing.size()) + " candidate(s) have no plausibility label:";
  for (std::size_t i = 0; i < missing.size() && i < kShown; ++i) {
    const auto& [p, m, c] = missing[i];
    msg += "\n  " + p + "," + m + "," + std::to_string(c);
  }
  if (missing.size() > kShown) msg += "\n  ... and " + std::to_string(missing.size() - kShown) + " more";
  return msg;
}

std::string opt_cell(const std::optional<double>& v) { return v ? csv::format_double(*v) : "n/a"; }

}  // namespace

// --- RunConfig ---------------------------------------------------------------

std::vector<Heuristic> RunConfig::heuristics() const {
  std::vector<Heuristic> out;
  for (MetricKind m : metrics) {
    for (Strategy s : strategies) {
      if (s != Strategy::Naive) out.push_back({s, m});
    }
  }
  out.push_back({Strategy::Naive, std::nullopt});
  return out;
}

void RunConfig::validate() const {
  if (records.empty()) throw UsageError("config: 'records' is required");
  if (labels.empty()) throw UsageError("config: 'labels' is required");
  if (jobs < 1) throw UsageError("config: 'jobs' must be at least 1");
  if (embedding_dim < 1) throw UsageError("config: 'embedding_dim' must be positive");
  if (pair_n_outputs < 1 || pair_k < 1) throw UsageError("config: 'pair_n_outputs' and 'pair_k' must be positive");
  parse_language(language);
  std::set<std::string> names;
  std::set<std::string> stems;
  for (const auto& e : ensembles) {
    if (e.name.empty()) throw UsageError("config: ensemble without a name");
    if (!names.insert(e.name).second || !stems.insert(file_stem(e.name)).second) {
      throw UsageError("config: duplicate ensemble '" + e.name + "'");
    }
    if (e.members.empty()) throw UsageError("config: ensemble '" + e.name + "' has no members");
    if (e.n_outputs < 1 || e.k < 1) throw UsageError("config: ensemble '" + e.name + "': n_outputs and k must be positive");
  }
  std::set<std::string> sweeps;
  for (const auto& s : pair_sweeps) {
    if (!sweeps.insert(s.heuristic.name()).second) {
      throw UsageError("config: duplicate pair sweep for '" + s.heuristic.name() + "'");
    }
  }
}

RunConfig parse_config(const std::string& json_text, const fs::path& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw UsageError("config: top level must be an object");
  static const std::set<std::string> kKeys = {
      "records", "labels",    "embeddings",  "embedding_dim",  "language", "ensembles", "metrics",
      "strategies", "pair_models", "pair_sweeps", "pair_n_outputs", "pair_k",  "out",       "jobs"};
  for (const auto& [key, _] : j.items()) {
    if (!kKeys.contains(key)) throw UsageError("config: unknown key '" + key + "'");
  }

  RunConfig cfg;
  if (j.contains("records")) cfg.records = resolve(base_dir, get_as<std::string>(j, "records"));
  if (j.contains("labels")) cfg.labels = resolve(base_dir, get_as<std::string>(j, "labels"));
  if (j.contains("embeddings")) cfg.embeddings = resolve(base_dir, get_as<std::string>(j, "embeddings"));
  if (j.contains("embedding_dim")) cfg.embedding_dim = get_as<std::size_t>(j, "embedding_dim");
  if (j.contains("language")) cfg.language = get_as<std::string>(j, "language");
  if (j.contains("out")) cfg.out = resolve(base_dir, get_as<std::string>(j, "out"));
  if (j.contains("jobs")) cfg.jobs = get_as<unsigned>(j, "jobs");
  if (j.contains("pair_n_outputs")) cfg.pair_n_outputs = get_as<int>(j, "pair_n_outputs");
  if (j.contains("pair_k")) cfg.pair_k = get_as<int>(j, "pair_k");

  if (j.contains("ensembles")) {
    if (!j["ensembles"].is_array()) throw UsageError("config: 'ensembles' must be an array");
    for (const auto& e : j["ensembles"]) {
      if (!e.is_object()) throw UsageError("config: ensemble entries must be objects");
      EnsembleConfig ec;
      ec.name = get_as<std::string>(e, "name");
      ec.members = string_list(e, "members");
      if (e.contains("n_outputs")) ec.n_outputs = get_as<int>(e, "n_outputs");
      if (e.contains("k")) ec.k = get_as<int>(e, "k");
      cfg.ensembles.push_back(std::move(ec));
    }
  }
  try {
    if (j.contains("metrics")) {
      for (const auto& m : string_list(j, "metrics")) cfg.metrics.push_back(parse_metric(m));
    } else {
      cfg.metrics = all_metrics();
    }
    if (j.contains("strategies")) {
      for (const auto& s : string_list(j, "strategies")) cfg.strategies.push_back(parse_strategy(s));
    } else {
      cfg.strategies = {Strategy::Highest, Strategy::Lowest, Strategy::Diverse, Strategy::Naive};
    }
    if (j.contains("pair_models")) cfg.pair_models = string_list(j, "pair_models");
    if (j.contains("pair_sweeps")) {
      if (!j["pair_sweeps"].is_array()) throw UsageError("config: 'pair_sweeps' must be an array");
      for (const auto& s : j["pair_sweeps"]) {
        PairSweepConfig pc;
        pc.heuristic = Heuristic::parse(get_as<std::string>(s, "heuristic"));
        if (s.contains("baseline")) pc.baseline = parse_pair_baseline(get_as<std::string>(s, "baseline"));
        cfg.pair_sweeps.push_back(pc);
      }
    } else {
      cfg.pair_sweeps = {{Heuristic{Strategy::Naive, std::nullopt}, PairBaseline::BestSingle},
                         {Heuristic{Strategy::Diverse, MetricKind::CodeBleu}, PairBaseline::Naive}};
    }
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
  return cfg;
}

RunConfig load_config(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path());
}

void apply_overrides(RunConfig& cfg, const ConfigOverrides& o) {
  if (o.out) cfg.out = *o.out;
  if (o.jobs) cfg.jobs = *o.jobs;
  if (!o.ensembles.empty()) {
    for (const auto& name : o.ensembles) {
      if (std::none_of(cfg.ensembles.begin(), cfg.ensembles.end(), [&](const auto& e) { return e.name == name; })) {
        throw UsageError("unknown ensemble '" + name + "'");
      }
    }
    std::erase_if(cfg.ensembles, [&](const EnsembleConfig& e) {
      return std::find(o.ensembles.begin(), o.ensembles.end(), e.name) == o.ensembles.end();
    });
  }
  try {
    if (!o.metrics.empty()) {
      cfg.metrics.clear();
      for (const auto& m : o.metrics) cfg.metrics.push_back(parse_metric(m));
    }
    if (!o.strategies.empty()) {
      cfg.strategies.clear();
      for (const auto& s : o.strategies) cfg.strategies.push_back(parse_strategy(s));
    }
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

std::string file_stem(std::string_view name) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : name) {
    if ((c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '.' || c == '_' ||
        c == '-') {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 15];
    }
  }
  if (out == "." || out == "..") out = "%2E" + out.substr(1);
  return out;
}

// --- stages --------------------------------------------------------------

void cmd_score(const RunConfig& cfg) {
  Loaded l = load(cfg);
  const auto& problems = l.bench.problems();
  const auto data = prepare_all(l.bench, l.engine, cfg.metrics, cfg.jobs);

  for (MetricKind m : output_based(cfg.metrics)) {
    std::string out = row({"problem_id", "model_a", "index_a", "model_b", "index_b", "value"});
    for (const auto& d : data) {
      const auto& mat = d.similarity.at(m);
      for (std::size_t i = 0; i < d.universe.size(); ++i) {
        for (std::size_t j = 0; j < d.universe.size(); ++j) {
          if (const auto& v = mat.at(i, j)) {
            const auto a = d.universe.key(i);
            const auto b = d.universe.key(j);
            out += row({d.universe.problem_id, a.model, std::to_string(a.candidate_index), b.model,
                        std::to_string(b.candidate_index), csv::format_double(*v)});
          }
        }
      }
    }
    write_file(similarity_file(cfg, m), out);
  }

  for (const auto& spec : l.ensembles) {
    std::vector<std::string> chunks(problems.size());
    parallel_for(problems.size(), cfg.jobs, [&](std::size_t p) {
      const ProblemScores ps = l.engine.score(data[p], spec, cfg.metrics);
      std::string& s = chunks[p];
      for (std::size_t i = 0; i < ps.pool.size(); ++i) {
        const auto& c = ps.pool.candidates[i];
        std::vector<std::string> f{c.problem_id, c.model.label, std::to_string(c.candidate_index),
                                   c.scoreable() ? "1" : "0"};
        for (MetricKind m : cfg.metrics) {
          const auto& v = ps.scores.at(m)[i];
          f.push_back(v ? csv::format_double(*v) : "");
        }
        s += csv::join(f) + "\n";
      }
    });
    std::vector<std::string> header{"problem_id", "model", "candidate_index", "scoreable"};
    for (MetricKind m : cfg.metrics) header.emplace_back(to_string(m));
    std::string out = csv::join(header) + "\n";
    for (const auto& c : chunks) out += c;
    write_file(scores_file(cfg, spec.name), out);
  }
}

void cmd_select(const RunConfig& cfg) {
  Loaded l = load(cfg);
  const auto& problems = l.bench.problems();
  const bool diverse = std::find(cfg.strategies.begin(), cfg.strategies.end(), Strategy::Diverse) != cfg.strategies.end();
  const auto data = load_problem_data(cfg, l.bench, diverse ? cfg.metrics : std::vector<MetricKind>{});
  const auto heuristics = cfg.heuristics();

  for (const auto& spec : l.ensembles) {
    const ScoreRows rows = load_scores(cfg, spec.name, cfg.metrics);
    const fs::path score_path = scores_file(cfg, spec.name);
    std::vector<std::vector<Selection>> picks(heuristics.size(), std::vector<Selection>(problems.size()));
    parallel_for(problems.size(), cfg.jobs, [&](std::size_t p) {
      const ProblemData& d = data[p];
      // Restrict the universe to the ensemble; only the similarity matrices
      // are kept, scores come from the score file.
      ProblemScores ps = l.engine.score(d, spec, diverse ? output_based(cfg.metrics) : std::vector<MetricKind>{});
      ps.scores.clear();
      for (std::size_t mi = 0; mi < cfg.metrics.size(); ++mi) {
        std::vector<std::optional<double>> s(ps.pool.size());
        for (std::size_t i = 0; i < ps.pool.size(); ++i) {
          const auto& c = ps.pool.candidates[i];
          auto it = rows.find({c.problem_id, c.model.label, c.candidate_index});
          if (it == rows.end()) {
            throw DataError(score_path.string() + ": no row for " + c.problem_id + "," + c.model.label + "," +
                            std::to_string(c.candidate_index));
          }
          s[i] = it->second[mi];
          if (s[i].has_value() != c.scoreable()) {
            throw DataError(score_path.string() + ": score of " + c.problem_id + "," + c.model.label + "," +
                            std::to_string(c.candidate_index) + " disagrees with its extracted code");
          }
        }
        ps.scores[cfg.metrics[mi]] = std::move(s);
      }
      for (std::size_t h = 0; h < heuristics.size(); ++h) {
        picks[h][p] = l.engine.select(ps, spec, heuristics[h], static_cast<std::size_t>(spec.k));
      }
    });
    for (std::size_t h = 0; h < heuristics.size(); ++h) {
      std::string out = row({"problem_id", "rank", "model", "candidate_index"});
      for (const auto& sel : picks[h]) {
        for (std::size_t r = 0; r < sel.picks.size(); ++r) {
          out += row({sel.problem_id, std::to_string(r + 1), sel.picks[r].model,
                      std::to_string(sel.picks[r].candidate_index)});
        }
      }
      write_file(selection_file(cfg, spec.name, heuristics[h]), out);
    }
  }
}

void cmd_report(const RunConfig& cfg) {
  Loaded l = load(cfg);
  const auto& problems = l.bench.problems();
  const PlausibilityLabels labels = read_labels(cfg.labels);
  if (auto missing = labels.missing_for(l.bench.records()); !missing.empty()) throw DataError(format_missing(missing));
  const auto solved = solved_by_all_models(labels);
  const fs::path dir = cfg.out / "report";
  const auto heuristics = cfg.heuristics();

  std::vector<HeuristicRun> runs;
  for (const auto& spec : l.ensembles) {
    for (const auto& h : heuristics) {
      runs.push_back({spec.name, h,
                      read_selections(selection_file(cfg, spec.name, h), problems, std::string(to_string(h.strategy)))});
    }
  }
  const auto cells = strategy_table(l.ensembles, runs, labels);
  {
    std::string out = row({"ensemble", "metric", "strategy", "solved"});
    for (const auto& c : cells) out += row({c.ensemble, c.metric, c.strategy, std::to_string(c.solved)});
    write_file(dir / "strategy_table.csv", out);
  }

  struct Ceiling {
    std::optional<std::size_t> best_small, best_large;
    std::size_t max = 0;
  };
  std::vector<Ceiling> ceilings;
  {
    std::string out = row({"ensemble", "best_small", "best_large", "theoretical_max"});
    for (const auto& spec : l.ensembles) {
      Ceiling c;
      for (const auto& m : spec.members) {
        auto it = solved.find(m.label);
        const std::size_t n = it == solved.end() ? 0 : it->second.size();
        auto& best = m.size_class == SizeClass::Small ? c.best_small : c.best_large;
        best = std::max(best.value_or(0), n);
      }
      c.max = theoretical_max(spec.labels(), solved);
      ceilings.push_back(c);
      auto cell = [](const std::optional<std::size_t>& v) { return v ? std::to_string(*v) : std::string(); };
      out += row({spec.name, cell(c.best_small), cell(c.best_large), std::to_string(c.max)});
    }
    write_file(dir / "theoretical_max.csv", out);
  }

  {
    std::string out = row({"ensemble", "model", "solved", "unique"});
    for (const auto& spec : l.ensembles) {
      const auto uniq = unique_contributions(spec.labels(), solved);
      for (const auto& m : spec.labels()) {
        auto it = solved.find(m);
        out += row({spec.name, m, std::to_string(it == solved.end() ? 0 : it->second.size()),
                    std::to_string(uniq.at(m))});
      }
    }
    write_file(dir / "unique.csv", out);
  }

  {
    std::string out = row({"model", "problem_id"});
    for (const auto& m : l.bench.models()) {
      auto it = solved.find(m.label);
      if (it == solved.end()) continue;
      for (const auto& p : it->second) out += row({m.label, p});
    }
    write_file(dir / "solved_sets.csv", out);
  }

  std::vector<FamilyStats> fams;
  {
    std::vector<std::string> small, large;
    for (const auto& m : l.bench.models()) (m.size_class == SizeClass::Small ? small : large).push_back(m.label);
    const ProblemSet hard = hard_problems(small, solved);
    std::string out = row({"family", "p_L", "mu", "sigma", "fai_z"});
    std::set<std::string> families;
    for (const auto& m : l.bench.models()) families.insert(m.family);
    for (const auto& fam : families) {
      const ModelId* s = nullptr;
      const ModelId* g = nullptr;
      for (const auto& m : l.bench.models()) {
        if (m.family != fam) continue;
        (m.size_class == SizeClass::Small ? s : g) = &m;
      }
      if (!s || !g) continue;
      std::vector<std::string> others;
      for (const auto& lab : large) {
        if (lab != g->label) others.push_back(lab);
      }
      if (others.empty()) continue;
      try {
        const FamilyStats st = fai_z(fam, s->label, g->label, others, hard, solved);
        fams.push_back(st);
        out += row({fam, csv::format_double(st.p_large), csv::format_double(st.mu), csv::format_double(st.sigma),
                    opt_cell(st.fai)});
      } catch (const DataError&) {
        out += row({fam, "n/a", "n/a", "n/a", "n/a"});
      }
    }
    write_file(dir / "fai.csv", out);
  }

  std::vector<PairSweep> sweeps;
  if (!cfg.pair_sweeps.empty()) {
    std::vector<MetricKind> needed;
    for (const auto& s : cfg.pair_sweeps) {
      if (s.heuristic.metric) needed.push_back(*s.heuristic.metric);
    }
    const auto data = load_problem_data(cfg, l.bench, needed);
    std::vector<std::string> models;
    if (cfg.pair_models) {
      models = *cfg.pair_models;
    } else {
      for (const auto& m : l.bench.models()) models.push_back(m.label);
    }
    for (const auto& s : cfg.pair_sweeps) {
      sweeps.push_back(pair_sweep(data, l.bench, models, s.heuristic, s.baseline, labels, cfg.pair_n_outputs,
                                  cfg.pair_k, l.engine, cfg.jobs));
      std::string out = row({"model_a", "model_b", "delta"});
      for (const auto& p : sweeps.back().pairs) out += row({p.model_a, p.model_b, std::to_string(p.delta)});
      write_file(dir / ("pairs_" + s.heuristic.name() + ".csv"), out);
    }
  }

  std::ostringstream md;
  md << "# Report\n\n## Theoretical maximum\n\n| Ensemble | Best single (S→L) | Theoretical max |\n|---|---|---|\n";
  for (std::size_t e = 0; e < l.ensembles.size(); ++e) {
    const auto& c = ceilings[e];
    auto cell = [](const std::optional<std::size_t>& v) { return v ? std::to_string(*v) : std::string("-"); };
    md << "| " << l.ensembles[e].name << " | " << cell(c.best_small) << "→" << cell(c.best_large) << " | " << c.max
       << " |\n";
  }
  md << "\n## Problems solved per strategy\n\n| Ensemble | Metric | Strategy | Solved |\n|---|---|---|---|\n";
  for (const auto& c : cells) {
    md << "| " << c.ensemble << " | " << (c.metric.empty() ? "-" : c.metric) << " | " << c.strategy << " | "
       << c.solved << " |\n";
  }
  md << "\n## Family Advantage Index\n\n| Family | p_L | mu | sigma | FAI_z |\n|---|---|---|---|---|\n";
  for (const auto& f : fams) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "| %s | %.3f | %.3f | %.3f | ", f.family.c_str(), f.p_large, f.mu, f.sigma);
    md << buf;
    if (f.fai) {
      std::snprintf(buf, sizeof buf, "%+.2f", *f.fai);
      md << buf;
    } else {
      md << "n/a";
    }
    md << " |\n";
  }
  for (const auto& s : sweeps) {
    md << "\n## Pairs: " << s.heuristic << " vs " << to_string(s.baseline) << "\n\n| Model A | Model B | Delta |\n|---|---|---|\n";
    for (const auto& p : s.pairs) md << "| " << p.model_a << " | " << p.model_b << " | " << p.delta << " |\n";
  }
  write_file(dir / "summary.md", md.str());
}

void cmd_all(const RunConfig& cfg) {
  cmd_score(cfg);
  cmd_select(cfg);
  cmd_report(cfg);
}

}  // namespace ensel
