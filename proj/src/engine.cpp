#include "ensel/engine.hpp"

#include <algorithm>
#include <climits>

#include "ensel/confmetrics.hpp"
#include "ensel/error.hpp"

namespace ensel {

namespace {

ConfidenceMetric as_confidence(MetricKind m) {
  switch (m) {
    case MetricKind::NllPerByte:
      return ConfidenceMetric::NllPerByte;
    case MetricKind::EntropyPerByte:
      return ConfidenceMetric::EntropyPerByte;
    default:
      return ConfidenceMetric::SumEntropyNorm;
  }
}

}  // namespace

Benchmark::Benchmark(std::vector<GenerationRecord> records)
    : records_(std::move(records)), models_(collect_models(records_)) {
  for (std::size_t i = 0; i < records_.size(); ++i) by_problem_[records_[i].problem_id].push_back(i);
  for (const auto& [pid, _] : by_problem_) problems_.push_back(pid);
}

const ModelId& Benchmark::model(std::string_view label) const {
  for (const auto& m : models_) {
    if (m.label == label) return m;
  }
  throw UsageError("unknown model '" + std::string(label) + "'");
}

CandidatePool Benchmark::universe(const std::string& problem_id) const {
  EnsembleSpec all{"*", models_, INT_MAX, 1};
  return pool(problem_id, all);
}

CandidatePool Benchmark::pool(const std::string& problem_id, const EnsembleSpec& spec) const {
  std::vector<GenerationRecord> mine;
  if (auto it = by_problem_.find(problem_id); it != by_problem_.end()) {
    for (auto i : it->second) {
      const auto& r = records_[i];
      if (spec.contains(r.model.label) && r.candidate_index < spec.n_outputs) mine.push_back(r);
    }
  }
  return build_pool_from(std::move(mine), spec, problem_id);
}

EnsembleSpec Benchmark::ensemble(std::string name, const std::vector<std::string>& labels, int n_outputs,
                                 int k) const {
  EnsembleSpec spec{std::move(name), {}, n_outputs, k};
  for (const auto& l : labels) {
    try {
      spec.members.push_back(model(l));
    } catch (const UsageError&) {
      throw UsageError("ensemble '" + spec.name + "' references model '" + l + "' which has no records");
    }
  }
  spec.validate();
  return spec;
}

std::string Heuristic::name() const {
  if (strategy == Strategy::Naive) return "naive";
  return std::string(to_string(*metric)) + "_" + std::string(to_string(strategy));
}

Heuristic Heuristic::parse(std::string_view name) {
  if (name == "naive") return Heuristic{Strategy::Naive, std::nullopt};
  auto cut = name.rfind('_');
  if (cut == std::string_view::npos) throw UsageError("bad heuristic name '" + std::string(name) + "'");
  Heuristic h{parse_strategy(name.substr(cut + 1)), parse_metric(name.substr(0, cut))};
  if (h.strategy == Strategy::Naive) throw UsageError("naive takes no metric: '" + std::string(name) + "'");
  return h;
}

Engine::Engine(EngineOptions opts) : opts_(std::move(opts)) {
  if (!opts_.embedder) opts_.embedder = std::make_shared<sim::HashingEmbedder>(64);
  codebleu_ = std::make_shared<sim::CodeBleuScorer>(opts_.language, opts_.codebleu_weights);
}

sim::SimilarityMatrix Engine::similarity(const CandidatePool& pool, MetricKind m, unsigned jobs) const {
  const std::size_t n = pool.size();
  if (m == MetricKind::CodeBleu) {
    std::vector<sim::CodeFeatures> feats(n);
    parallel_for(n, jobs, [&](std::size_t i) {
      if (pool.candidates[i].scoreable()) feats[i] = codebleu_->features(*pool.candidates[i].extracted_code);
    });
    return sim::similarity_matrix(
        pool, [&](std::size_t i, std::size_t j) { return codebleu_->score(feats[i], feats[j]); }, jobs);
  }
  sim::TokenCosines cos;
  std::vector<std::vector<std::size_t>> ids(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (pool.candidates[i].scoreable()) ids[i] = cos.intern(tokenize(*pool.candidates[i].extracted_code, opts_.language));
  }
  cos.finalize(*opts_.embedder);
  return sim::similarity_matrix(
      pool,
      [&](std::size_t i, std::size_t j) {
        // Comment-only snippets have no tokens to match.
        if (ids[i].empty() || ids[j].empty()) return 0.0;
        return sim::bertscore_f3(cos, ids[i], ids[j]);
      },
      jobs);
}

ProblemData Engine::prepare(CandidatePool universe, std::span<const MetricKind> metrics, unsigned jobs) const {
  ProblemData data{std::move(universe), {}};
  for (MetricKind m : metrics) {
    if (is_output_based(m) && !data.similarity.contains(m)) data.similarity[m] = similarity(data.universe, m, jobs);
  }
  return data;
}

ProblemScores Engine::score(const ProblemData& data, const EnsembleSpec& spec,
                            std::span<const MetricKind> metrics) const {
  std::vector<GenerationRecord> mine;
  std::vector<std::size_t> origin;
  for (std::size_t u = 0; u < data.universe.size(); ++u) {
    const auto& c = data.universe.candidates[u];
    if (spec.contains(c.model.label) && c.candidate_index < spec.n_outputs) {
      mine.push_back(data.universe.candidates[u]);
      origin.push_back(u);
    }
  }
  ProblemScores ps{build_pool_from(std::move(mine), spec, data.universe.problem_id), {}, {}};
  const std::size_t n = ps.pool.size();

  for (MetricKind m : metrics) {
    if (is_output_based(m)) {
      auto it = data.similarity.find(m);
      if (it == data.similarity.end()) {
        throw UsageError("similarities for metric '" + std::string(to_string(m)) + "' were not prepared");
      }
      sim::SimilarityMatrix sub(n);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          if (const auto& v = it->second.at(origin[i], origin[j])) sub.set(i, j, *v);
        }
      }
      ps.scores[m] = sim::pairwise_sums(ps.pool, sub);
      ps.similarity[m] = std::move(sub);
    } else {
      std::vector<std::optional<double>> s(n);
      for (std::size_t i = 0; i < n; ++i) {
        if (ps.pool.candidates[i].scoreable()) s[i] = cross_model_sum(ps.pool.candidates[i], as_confidence(m), spec);
      }
      ps.scores[m] = std::move(s);
    }
  }
  return ps;
}

Selection Engine::select(const ProblemScores& ps, const EnsembleSpec& spec, const Heuristic& h,
                         std::size_t k) const {
  if (h.strategy == Strategy::Naive) return select_naive(ps.pool, spec, k);
  const MetricKind m = *h.metric;
  auto sit = ps.scores.find(m);
  if (sit == ps.scores.end()) throw UsageError("metric '" + std::string(to_string(m)) + "' was not scored");
  ScoredPool sp{&ps.pool, sit->second, direction_of(m)};
  switch (h.strategy) {
    case Strategy::Highest:
      return select_highest(sp, k);
    case Strategy::Lowest:
      return select_lowest(sp, k);
    case Strategy::Diverse: {
      static const sim::SimilarityMatrix kNone;
      auto mit = ps.similarity.find(m);
      const sim::SimilarityMatrix& matrix = mit == ps.similarity.end() ? kNone : mit->second;
      if (is_output_based(m) && mit == ps.similarity.end()) {
        throw UsageError("metric '" + std::string(to_string(m)) + "' has no similarity matrix");
      }
      return select_diverse(sp, distance_for(m, matrix, sp.scores), k);
    }
    case Strategy::Naive:
      break;
  }
  return select_naive(ps.pool, spec, k);
}

std::vector<ProblemData> prepare_all(const Benchmark& bench, const Engine& engine,
                                     std::span<const MetricKind> metrics, unsigned jobs) {
  std::vector<ProblemData> out(bench.problems().size());
  parallel_for(out.size(), jobs, [&](std::size_t p) {
    out[p] = engine.prepare(bench.universe(bench.problems()[p]), metrics, 1);
  });
  return out;
}

std::vector<Selection> run_heuristic(std::span<const ProblemData> data, const EnsembleSpec& spec,
                                     const Heuristic& h, const Engine& engine, unsigned jobs) {
  std::vector<Selection> out(data.size());
  std::vector<MetricKind> needed;
  if (h.metric) needed.push_back(*h.metric);
  parallel_for(data.size(), jobs, [&](std::size_t p) {
    ProblemScores ps = engine.score(data[p], spec, needed);
    out[p] = engine.select(ps, spec, h, static_cast<std::size_t>(spec.k));
  });
  return out;
}

}  // namespace ensel
