#include <cstdio>
#include <exception>
#include <iostream>

#include "CLI11.hpp"
#include "ensel/error.hpp"
#include "ensel/pipeline.hpp"
#include "ensel/synth.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kData = 2;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Select candidate programs from LLM ensembles and analyze their complementarity."};
  app.require_subcommand(1);

  std::string config;
  ensel::ConfigOverrides overrides;
  std::string out_dir;
  unsigned jobs = 0;

  auto add_stage = [&](const char* name, const char* help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config, "Run configuration (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "Output directory (overrides the config)");
    sub->add_option("--jobs", jobs, "Worker threads")->check(CLI::Range(1u, 1024u));
    sub->add_option("--ensemble", overrides.ensembles, "Only this ensemble (repeatable)");
    sub->add_option("--metric", overrides.metrics, "Metric to use (repeatable)");
    sub->add_option("--strategy", overrides.strategies, "Strategy: highest, lowest, diverse or naive (repeatable)");
    return sub;
  };
  CLI::App* score = add_stage("score", "Compute per-candidate scores and pairwise similarities");
  CLI::App* select = add_stage("select", "Apply selection strategies to the scores");
  CLI::App* report = add_stage("report", "Write analysis tables from selections and labels");
  CLI::App* all = add_stage("all", "Run score, select and report");

  CLI::App* synth = app.add_subcommand("synth", "Write a synthetic benchmark with a ready-to-run config");
  std::string synth_dir;
  ensel::SynthOptions so;
  synth->add_option("dir", synth_dir, "Target directory")->required();
  synth->add_option("--problems", so.problems, "Number of problems")->check(CLI::PositiveNumber);
  synth->add_option("--models", so.models, "Number of models (at most 10)")->check(CLI::Range(1, 10));
  synth->add_option("--outputs", so.outputs, "Outputs per model and problem")->check(CLI::PositiveNumber);
  synth->add_option("--seed", so.seed, "Random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (synth->parsed()) {
      ensel::write_synthetic(synth_dir, so);
      return kOk;
    }
    ensel::RunConfig cfg = ensel::load_config(config);
    if (!out_dir.empty()) overrides.out = out_dir;
    if (jobs > 0) overrides.jobs = jobs;
    ensel::apply_overrides(cfg, overrides);
    if (score->parsed()) ensel::cmd_score(cfg);
    if (select->parsed()) ensel::cmd_select(cfg);
    if (report->parsed()) ensel::cmd_report(cfg);
    if (all->parsed()) ensel::cmd_all(cfg);
  } catch (const ensel::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ensel::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  }
  return kOk;
}
