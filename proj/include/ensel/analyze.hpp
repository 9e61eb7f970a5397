#pragma once

// Complementarity analyses over plausibility labels: solved sets, ensemble
// ceilings, unique contributions, hard problems and the Family Advantage
// Index.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "ensel/engine.hpp"
#include "ensel/model.hpp"
#include "ensel/select.hpp"

namespace ensel {

using ProblemSet = std::set<std::string>;

struct SolvedSet {
  std::string label;
  ProblemSet problems;
};

// Problems where any of the model's labelled outputs is plausible.
SolvedSet solved_by_model(const PlausibilityLabels& labels, const std::string& model_label);

// Problems where any pick of the selections is plausible. Throws DataError
// for a pick without a label.
SolvedSet solved_by_selections(const PlausibilityLabels& labels, std::span<const Selection> selections,
                               std::string label = {});

// Solved sets of every model appearing in the labels, keyed by label.
std::map<std::string, ProblemSet> solved_by_all_models(const PlausibilityLabels& labels);

// |∪ solved(m)| over `models`.
std::size_t theoretical_max(const std::vector<std::string>& models,
                            const std::map<std::string, ProblemSet>& solved);

// For each model, problems it solves that no other listed model solves.
std::map<std::string, std::size_t> unique_contributions(const std::vector<std::string>& models,
                                                        const std::map<std::string, ProblemSet>& solved);

// Problems solved by at least one but not all of `small_models`.
ProblemSet hard_problems(const std::vector<std::string>& small_models,
                         const std::map<std::string, ProblemSet>& solved);

struct FamilyStats {
  std::string family;
  double p_large = 0.0;
  double mu = 0.0;
  double sigma = 0.0;         // population standard deviation
  std::optional<double> fai;  // nullopt when sigma == 0
};

// P(large solves p | small solves p, p hard) for the family's large model,
// standardized against the same probability for each of `other_large`.
// Throws DataError "no hard problems solved by small model" when the small
// model solves none of `hard`, and std::invalid_argument when other_large is
// empty.
FamilyStats fai_z(const std::string& family, const std::string& small, const std::string& large,
                  const std::vector<std::string>& other_large, const ProblemSet& hard,
                  const std::map<std::string, ProblemSet>& solved);

// Conditional solve rate |hard ∩ S ∩ M| / |hard ∩ S|; nullopt if the
// denominator is zero.
std::optional<double> conditional_rate(const ProblemSet& hard, const ProblemSet& given,
                                       const ProblemSet& target);

// --- Two-model sweeps ------------------------------------------------------

enum class PairBaseline {
  BestSingle,  // larger solved count of the two models on their own outputs
  Naive,       // Naive selection of the same pair
};

std::string_view to_string(PairBaseline b);
PairBaseline parse_pair_baseline(std::string_view s);

struct PairDelta {
  std::string model_a;  // model_a < model_b
  std::string model_b;
  long long heuristic_solved = 0;
  long long baseline_solved = 0;
  long long delta = 0;
};

struct PairSweep {
  std::string heuristic;
  PairBaseline baseline = PairBaseline::BestSingle;
  std::vector<std::string> models;  // sorted
  std::vector<PairDelta> pairs;     // lexicographic by (model_a, model_b)

  // delta(a, b) == delta(b, a); throws std::out_of_range for a == b or
  // unknown labels.
  long long delta(const std::string& a, const std::string& b) const;
};

// For every unordered pair of `models`: build the two-model ensemble, run
// the heuristic on every problem, count solved problems and subtract the
// baseline. `data` must cover the heuristic's metric.
PairSweep pair_sweep(std::span<const ProblemData> data, const Benchmark& bench,
                     std::vector<std::string> models, const Heuristic& h, PairBaseline baseline,
                     const PlausibilityLabels& labels, int n_outputs, int k, const Engine& engine,
                     unsigned jobs);

// --- Strategy tables ---------------------------------------------------------

struct HeuristicRun {
  std::string ensemble;
  Heuristic heuristic;
  std::vector<Selection> selections;
};

struct StrategyCell {
  std::string ensemble;
  std::string metric;    // empty for naive and best
  std::string strategy;  // highest, lowest, diverse, naive or best
  std::size_t solved = 0;
};

// One cell per run (in the order given, grouped by ensemble order) followed
// by a "best" cell holding the ensemble's theoretical maximum.
std::vector<StrategyCell> strategy_table(std::span<const EnsembleSpec> ensembles,
                                         std::span<const HeuristicRun> runs,
                                         const PlausibilityLabels& labels);

}  // namespace ensel
