#include "ensel/analyze.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ensel/error.hpp"
#include "ensel/parallel.hpp"

namespace ensel {

namespace {

const ProblemSet& solved_of(const std::map<std::string, ProblemSet>& solved, const std::string& model) {
  static const ProblemSet kEmpty;
  auto it = solved.find(model);
  return it == solved.end() ? kEmpty : it->second;
}

}  // namespace

SolvedSet solved_by_model(const PlausibilityLabels& labels, const std::string& model_label) {
  SolvedSet out{model_label, {}};
  for (const auto& [key, plausible] : labels.entries()) {
    if (plausible && std::get<1>(key) == model_label) out.problems.insert(std::get<0>(key));
  }
  return out;
}

SolvedSet solved_by_selections(const PlausibilityLabels& labels, std::span<const Selection> selections,
                               std::string label) {
  SolvedSet out{std::move(label), {}};
  for (const auto& sel : selections) {
    for (const auto& pick : sel.picks) {
      if (labels.at({sel.problem_id, pick.model, pick.candidate_index})) out.problems.insert(sel.problem_id);
    }
  }
  return out;
}

std::map<std::string, ProblemSet> solved_by_all_models(const PlausibilityLabels& labels) {
  std::map<std::string, ProblemSet> out;
  for (const auto& [key, plausible] : labels.entries()) {
    auto& set = out[std::get<1>(key)];
    if (plausible) set.insert(std::get<0>(key));
  }
  return out;
}

std::size_t theoretical_max(const std::vector<std::string>& models, const std::map<std::string, ProblemSet>& solved) {
  ProblemSet all;
  for (const auto& m : models) {
    const auto& s = solved_of(solved, m);
    all.insert(s.begin(), s.end());
  }
  return all.size();
}

std::map<std::string, std::size_t> unique_contributions(const std::vector<std::string>& models,
                                                        const std::map<std::string, ProblemSet>& solved) {
  std::map<std::string, std::size_t> out;
  for (const auto& m : models) {
    std::size_t n = 0;
    for (const auto& p : solved_of(solved, m)) {
      bool alone = true;
      for (const auto& other : models) {
        if (other != m && solved_of(solved, other).contains(p)) {
          alone = false;
          break;
        }
      }
      if (alone) ++n;
    }
    out[m] = n;
  }
  return out;
}

ProblemSet hard_problems(const std::vector<std::string>& small_models, const std::map<std::string, ProblemSet>& solved) {
  std::map<std::string, std::size_t> solvers;
  for (const auto& m : small_models) {
    for (const auto& p : solved_of(solved, m)) ++solvers[p];
  }
  ProblemSet out;
  for (const auto& [p, n] : solvers) {
    if (n >= 1 && n < small_models.size()) out.insert(p);
  }
  return out;
}

std::optional<double> conditional_rate(const ProblemSet& hard, const ProblemSet& given, const ProblemSet& target) {
  std::size_t den = 0;
  std::size_t num = 0;
  for (const auto& p : given) {
    if (!hard.contains(p)) continue;
    ++den;
    if (target.contains(p)) ++num;
  }
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

FamilyStats fai_z(const std::string& family, const std::string& small, const std::string& large,
                  const std::vector<std::string>& other_large, const ProblemSet& hard,
                  const std::map<std::string, ProblemSet>& solved) {
  if (other_large.empty()) throw std::invalid_argument("fai_z needs at least one other large model");
  const ProblemSet& given = solved_of(solved, small);
  auto p_large = conditional_rate(hard, given, solved_of(solved, large));
  if (!p_large) throw DataError("no hard problems solved by small model '" + small + "'");

  FamilyStats st{family, *p_large, 0.0, 0.0, std::nullopt};
  std::vector<double> rates;
  for (const auto& o : other_large) rates.push_back(*conditional_rate(hard, given, solved_of(solved, o)));
  double sum = 0.0;
  for (double r : rates) sum += r;
  st.mu = sum / static_cast<double>(rates.size());
  double sq = 0.0;
  for (double r : rates) sq += (r - st.mu) * (r - st.mu);
  st.sigma = std::sqrt(sq / static_cast<double>(rates.size()));
  if (st.sigma > 0.0) st.fai = (st.p_large - st.mu) / st.sigma;
  return st;
}

std::string_view to_string(PairBaseline b) { return b == PairBaseline::BestSingle ? "best_single" : "naive"; }

PairBaseline parse_pair_baseline(std::string_view s) {
  if (s == "best_single") return PairBaseline::BestSingle;
  if (s == "naive") return PairBaseline::Naive;
  throw UsageError("unknown pair baseline '" + std::string(s) + "' (expected best_single or naive)");
}

long long PairSweep::delta(const std::string& a, const std::string& b) const {
  const auto& [x, y] = a < b ? std::pair(a, b) : std::pair(b, a);
  for (const auto& p : pairs) {
    if (p.model_a == x && p.model_b == y) return p.delta;
  }
  throw std::out_of_range("no pair (" + a + ", " + b + ")");
}

PairSweep pair_sweep(std::span<const ProblemData> data, const Benchmark& bench, std::vector<std::string> models,
                     const Heuristic& h, PairBaseline baseline, const PlausibilityLabels& labels, int n_outputs,
                     int k, const Engine& engine, unsigned jobs) {
  std::sort(models.begin(), models.end());
  models.erase(std::unique(models.begin(), models.end()), models.end());
  PairSweep sweep{h.name(), baseline, models, {}};
  for (std::size_t i = 0; i < models.size(); ++i) {
    for (std::size_t j = i + 1; j < models.size(); ++j) sweep.pairs.push_back({models[i], models[j], 0, 0, 0});
  }
  const auto solved = solved_by_all_models(labels);
  parallel_for(sweep.pairs.size(), jobs, [&](std::size_t p) {
    PairDelta& d = sweep.pairs[p];
    const EnsembleSpec spec = bench.ensemble(d.model_a + "+" + d.model_b, {d.model_a, d.model_b}, n_outputs, k);
    const auto sel = run_heuristic(data, spec, h, engine, 1);
    d.heuristic_solved = static_cast<long long>(solved_by_selections(labels, sel).problems.size());
    if (baseline == PairBaseline::BestSingle) {
      d.baseline_solved = static_cast<long long>(
          std::max(solved_of(solved, d.model_a).size(), solved_of(solved, d.model_b).size()));
    } else {
      const auto naive = run_heuristic(data, spec, Heuristic{Strategy::Naive, std::nullopt}, engine, 1);
      d.baseline_solved = static_cast<long long>(solved_by_selections(labels, naive).problems.size());
    }
    d.delta = d.heuristic_solved - d.baseline_solved;
  });
  return sweep;
}

std::vector<StrategyCell> strategy_table(std::span<const EnsembleSpec> ensembles, std::span<const HeuristicRun> runs,
                                         const PlausibilityLabels& labels) {
  const auto solved = solved_by_all_models(labels);
  std::vector<StrategyCell> cells;
  for (const auto& ens : ensembles) {
    for (const auto& run : runs) {
      if (run.ensemble != ens.name) continue;
      cells.push_back({ens.name, run.heuristic.metric ? std::string(to_string(*run.heuristic.metric)) : "",
                       std::string(to_string(run.heuristic.strategy)),
                       solved_by_selections(labels, run.selections).problems.size()});
    }
    cells.push_back({ens.name, "", "best", theoretical_max(ens.labels(), solved)});
  }
  return cells;
}

}  // namespace ensel
