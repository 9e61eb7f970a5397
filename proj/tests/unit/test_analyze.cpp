#include <gtest/gtest.h>

#include <cmath>

#include "ensel/analyze.hpp"
#include "ensel/error.hpp"
#include "fixtures.hpp"
#include "gen.hpp"
#include "oracles.hpp"

using namespace ensel;

namespace {

std::string pid(int p) { return "P" + std::to_string(p); }

std::map<std::string, ProblemSet> to_sets(const oracle::Solved& s) {
  std::map<std::string, ProblemSet> out;
  for (const auto& [m, ps] : s) {
    auto& dst = out[m];
    for (int p : ps) dst.insert(pid(p));
  }
  return out;
}

ProblemSet to_set(const std::set<int>& s) {
  ProblemSet out;
  for (int p : s) out.insert(pid(p));
  return out;
}

oracle::Solved random_table(testgen::Rng& rng, int models, int problems) {
  oracle::Solved s;
  for (int m = 0; m < models; ++m) {
    auto& set = s["M" + std::to_string(m) + (m % 2 ? "_L" : "_S")];
    const double rate = rng.uniform();
    for (int p = 0; p < problems; ++p) {
      if (rng.chance(rate)) set.insert(p);
    }
  }
  return s;
}

}  // namespace

TEST(Solved, FromLabels) {
  PlausibilityLabels labels;
  labels.set({"P1", "A_S", 0}, false);
  labels.set({"P1", "A_S", 1}, true);
  labels.set({"P2", "A_S", 0}, false);
  labels.set({"P2", "B_L", 0}, true);
  labels.set({"P3", "C_L", 0}, false);
  EXPECT_EQ(solved_by_model(labels, "A_S").problems, (ProblemSet{"P1"}));
  const auto all = solved_by_all_models(labels);
  ASSERT_EQ(all.size(), 3u);
  EXPECT_TRUE(all.at("C_L").empty());
  EXPECT_EQ(all.at("B_L"), (ProblemSet{"P2"}));

  const std::vector<Selection> sel{{"P1", "x", {{"A_S", 0}}}, {"P2", "x", {{"A_S", 0}, {"B_L", 0}}}};
  EXPECT_EQ(solved_by_selections(labels, sel).problems, (ProblemSet{"P2"}));
  const std::vector<Selection> unknown{{"P9", "x", {{"A_S", 0}}}};
  EXPECT_THROW(solved_by_selections(labels, unknown), DataError);
}

TEST(TheoreticalMax, Examples) {
  const std::map<std::string, ProblemSet> s{{"A", {"P1", "P2"}}, {"B", {"P2", "P3"}}, {"C", {}}};
  EXPECT_EQ(theoretical_max({"A", "B"}, s), 3u);
  EXPECT_EQ(theoretical_max({"C"}, s), 0u);
  EXPECT_EQ(theoretical_max({}, s), 0u);
  const auto u = unique_contributions({"A", "B", "C"}, s);
  EXPECT_EQ(u.at("A"), 1u);
  EXPECT_EQ(u.at("B"), 1u);
  EXPECT_EQ(u.at("C"), 0u);
}

TEST(TheoreticalMax, RandomTablesMatchOracle) {
  testgen::Rng rng(91);
  for (int t = 0; t < 500; ++t) {
    const int problems = rng.range(1, 60);
    const auto table = random_table(rng, rng.range(1, 10), problems);
    const auto sets = to_sets(table);
    std::vector<std::string> models;
    for (const auto& [m, _] : table) {
      if (rng.chance(0.7)) models.push_back(m);
    }
    EXPECT_EQ(theoretical_max(models, sets), oracle::union_size(models, table));
    EXPECT_EQ(unique_contributions(models, sets), oracle::unique_counts(models, table));
    std::vector<std::string> small;
    for (const auto& m : models) {
      if (m.back() == 'S') small.push_back(m);
    }
    EXPECT_EQ(hard_problems(small, sets), to_set(oracle::hard(small, table, problems)));
    // Monotone in the model set; bounded by the sum of parts.
    std::size_t sum = 0;
    for (const auto& m : models) sum += sets.at(m).size();
    EXPECT_LE(theoretical_max(models, sets), sum);
    if (!models.empty()) {
      auto fewer = models;
      fewer.pop_back();
      EXPECT_LE(theoretical_max(fewer, sets), theoretical_max(models, sets));
    }
  }
}

TEST(HardProblems, SolvedBySomeButNotAll) {
  const std::map<std::string, ProblemSet> s{{"A_S", {"P1", "P2", "P3"}}, {"B_S", {"P1", "P4"}}, {"C_S", {"P1"}}};
  EXPECT_EQ(hard_problems({"A_S", "B_S", "C_S"}, s), (ProblemSet{"P2", "P3", "P4"}));
  EXPECT_TRUE(hard_problems({"A_S"}, s).empty());
}

TEST(Fai, StandardizedExample) {
  ProblemSet hard;
  for (int p = 0; p < 10; ++p) hard.insert(pid(p));
  std::map<std::string, ProblemSet> s{{"X_S", hard}, {"X_L", {}}, {"Y_L", {}}, {"Z_L", {}}};
  for (int p = 0; p < 7; ++p) s["X_L"].insert(pid(p));
  for (int p = 0; p < 4; ++p) s["Y_L"].insert(pid(p));
  for (int p = 3; p < 9; ++p) s["Z_L"].insert(pid(p));
  const auto f = fai_z("X", "X_S", "X_L", {"Y_L", "Z_L"}, hard, s);
  EXPECT_EQ(f.family, "X");
  EXPECT_EQ(f.p_large, 0.7);
  EXPECT_NEAR(f.mu, 0.5, 1e-15);
  EXPECT_NEAR(f.sigma, 0.1, 1e-15);
  ASSERT_TRUE(f.fai);
  EXPECT_NEAR(*f.fai, 2.0, 1e-12);
}

TEST(Fai, ConditionsOnTheSmallModel) {
  // Problems the small model misses do not count.
  const ProblemSet hard{"P1", "P2", "P3", "P4"};
  const std::map<std::string, ProblemSet> s{
      {"X_S", {"P1", "P2"}}, {"X_L", {"P1", "P3", "P4"}}, {"Y_L", {"P1", "P2"}}, {"Z_L", {}}};
  const auto f = fai_z("X", "X_S", "X_L", {"Y_L", "Z_L"}, hard, s);
  EXPECT_EQ(f.p_large, 0.5);
  EXPECT_EQ(f.mu, 0.5);
  EXPECT_EQ(f.sigma, 0.5);
  EXPECT_EQ(*f.fai, 0.0);
}

TEST(Fai, ZeroSpreadIsUndefined) {
  const ProblemSet hard{"P1", "P2"};
  const std::map<std::string, ProblemSet> s{{"X_S", hard}, {"X_L", {"P1"}}, {"Y_L", {"P2"}}, {"Z_L", {"P1"}}};
  const auto f = fai_z("X", "X_S", "X_L", {"Y_L", "Z_L"}, hard, s);
  EXPECT_EQ(f.sigma, 0.0);
  EXPECT_FALSE(f.fai.has_value());
}

TEST(Fai, Errors) {
  const ProblemSet hard{"P1"};
  const std::map<std::string, ProblemSet> s{{"X_S", {}}, {"X_L", {"P1"}}, {"Y_L", {"P1"}}};
  EXPECT_THROW(fai_z("X", "X_S", "X_L", {"Y_L"}, hard, s), DataError);
  const std::map<std::string, ProblemSet> t{{"X_S", {"P1"}}, {"X_L", {"P1"}}};
  EXPECT_THROW(fai_z("X", "X_S", "X_L", {}, hard, t), std::invalid_argument);
}

TEST(ConditionalRate, MatchesOracle) {
  testgen::Rng rng(92);
  for (int t = 0; t < 500; ++t) {
    auto table = random_table(rng, 3, rng.range(1, 40));
    std::set<int> hard;
    for (int p = 0; p < 40; ++p) {
      if (rng.chance(0.5)) hard.insert(p);
    }
    const auto& given = table["M0_S"];
    const auto& target = table["M1_L"];
    const auto want = oracle::cond_rate(hard, given, target);
    const auto got = conditional_rate(to_set(hard), to_set(given), to_set(target));
    ASSERT_EQ(got.has_value(), want.has_value());
    if (got) { EXPECT_EQ(*got, *want); }
  }
}

namespace {

// Three small models, two outputs each; only output 0 can be plausible.
// A solves P1 P2, B solves P3, C solves P1.
struct PairFixture {
  Benchmark bench{records()};
  PlausibilityLabels labels;
  Engine engine;
  std::vector<ProblemData> data;

  PairFixture() {
    const std::map<std::string, std::set<std::string>> solves{{"A_S", {"P1", "P2"}}, {"B_S", {"P3"}}, {"C_S", {"P1"}}};
    for (const auto& r : bench.records()) {
      const bool ok = r.candidate_index == 0 && solves.at(r.model.label).count(r.problem_id);
      labels.set({r.problem_id, r.model.label, r.candidate_index}, ok);
    }
    data = prepare_all(bench, engine, {}, 1);
  }

  static std::vector<GenerationRecord> records() {
    std::vector<GenerationRecord> out;
    for (const char* p : {"P1", "P2", "P3"}) {
      for (const char* m : {"A_S", "B_S", "C_S"}) {
        for (int i = 0; i < 2; ++i) out.push_back(fixture::record(p, m, i, "x = " + std::to_string(i) + ";"));
      }
    }
    return out;
  }
};

}  // namespace

TEST(PairSweep, NaiveAgainstBestSingle) {
  PairFixture f;
  const auto sweep = pair_sweep(f.data, f.bench, {"C_S", "A_S", "B_S"}, Heuristic{}, PairBaseline::BestSingle,
                                f.labels, 2, 2, f.engine, 2);
  EXPECT_EQ(sweep.models, (std::vector<std::string>{"A_S", "B_S", "C_S"}));
  ASSERT_EQ(sweep.pairs.size(), 3u);
  EXPECT_EQ(sweep.pairs[0].model_a, "A_S");
  EXPECT_EQ(sweep.pairs[0].model_b, "B_S");
  EXPECT_EQ(sweep.pairs[0].heuristic_solved, 3);
  EXPECT_EQ(sweep.pairs[0].baseline_solved, 2);
  EXPECT_EQ(sweep.delta("A_S", "B_S"), 1);
  EXPECT_EQ(sweep.delta("C_S", "A_S"), 0);
  EXPECT_EQ(sweep.delta("B_S", "C_S"), 1);
  for (const auto& a : sweep.models) {
    for (const auto& b : sweep.models) {
      if (a != b) { EXPECT_EQ(sweep.delta(a, b), sweep.delta(b, a)); }
    }
  }
  EXPECT_THROW(sweep.delta("A_S", "A_S"), std::out_of_range);
  EXPECT_THROW(sweep.delta("A_S", "Q_S"), std::out_of_range);
}

TEST(PairSweep, NaiveBaselineOfNaiveIsZero) {
  PairFixture f;
  const auto sweep =
      pair_sweep(f.data, f.bench, {"A_S", "B_S", "C_S"}, Heuristic{}, PairBaseline::Naive, f.labels, 2, 2, f.engine, 1);
  for (const auto& d : sweep.pairs) EXPECT_EQ(d.delta, 0);
  EXPECT_EQ(parse_pair_baseline(to_string(PairBaseline::Naive)), PairBaseline::Naive);
  EXPECT_EQ(parse_pair_baseline("best_single"), PairBaseline::BestSingle);
}

TEST(StrategyTable, OneCellPerRunThenBest) {
  PairFixture f;
  const EnsembleSpec ab = f.bench.ensemble("ab", {"A_S", "B_S"}, 2, 2);
  const EnsembleSpec c = f.bench.ensemble("c", {"C_S"}, 2, 2);
  const std::vector<EnsembleSpec> ens{ab, c};
  const Heuristic naive{};
  const std::vector<HeuristicRun> runs{{"c", naive, run_heuristic(f.data, c, naive, f.engine, 1)},
                                       {"ab", naive, run_heuristic(f.data, ab, naive, f.engine, 1)}};
  const auto cells = strategy_table(ens, runs, f.labels);
  ASSERT_EQ(cells.size(), 4u);
  EXPECT_EQ(cells[0].ensemble, "ab");
  EXPECT_EQ(cells[0].strategy, "naive");
  EXPECT_EQ(cells[0].metric, "");
  EXPECT_EQ(cells[0].solved, 3u);
  EXPECT_EQ(cells[1].strategy, "best");
  EXPECT_EQ(cells[1].solved, 3u);
  EXPECT_EQ(cells[2].ensemble, "c");
  EXPECT_EQ(cells[2].solved, 1u);
  EXPECT_EQ(cells[3].solved, 1u);
}
