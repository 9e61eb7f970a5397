#include "ensel/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "ensel/csv.hpp"
#include "ensel/error.hpp"
#include "ensel/lexer.hpp"
#include "json.hpp"

namespace ensel {

namespace {

// splitmix64; the value stream is fixed across platforms, unlike the
// standard distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  int below(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }
  bool chance(double p) { return uniform() < p; }

 private:
  std::uint64_t state_;
};

constexpr const char* kFamilies[] = {"CL", "DS", "GM", "MI", "QW"};
constexpr long long kVocab = 32000;

struct Style {
  int acc = 0;       // accumulator name
  bool comment = false;
  bool plus_one = false;  // "i += 1" instead of "i++"
};

constexpr const char* kAcc[] = {"acc", "sum", "total", "res"};

std::string inc(const Style& st) { return st.plus_one ? "i += 1" : "i++"; }

// One candidate program. `a` and `b` are the cluster's semantic knobs.
std::string program(int tpl, const std::string& name, int a, int b, const Style& st) {
  static constexpr const char* kOps[] = {"*", "+", "-", "/"};
  static constexpr const char* kCmp[] = {">", "<", ">=", "<="};
  const std::string acc = kAcc[st.acc];
  std::string body;
  switch (tpl) {
    case 0:
      body = "public static int " + name + "(int[] xs) {\n    int " + acc + " = 0;\n" +
             "    for (int i = 0; i < xs.length; " + inc(st) + ") {\n        " + acc + " += xs[i] " + kOps[a % 4] +
             " " + std::to_string(b + 1) + ";\n    }\n    return " + acc + ";\n}";
      break;
    case 1:
      body = "public static int " + name + "(int[] xs) {\n    int " + acc + " = xs[0];\n" + "    for (int i = " +
             std::to_string(b % 2) + "; i < xs.length; " + inc(st) + ") {\n        if (xs[i] " + kCmp[a % 4] + " " +
             acc + ") {\n            " + acc + " = xs[i];\n        }\n    }\n    return " + acc + ";\n}";
      break;
    case 2:
      body = "public static int " + name + "(String s) {\n    int " + acc + " = 0;\n" +
             "    for (char c : s.toCharArray()) {\n        if (c == '" + std::string(1, static_cast<char>('a' + a % 26)) +
             "') {\n            " + acc + " += " + std::to_string(b + 1) + ";\n        }\n    }\n    return " + acc +
             ";\n}";
      break;
    default:
      body = "public static long " + name + "(int n) {\n    if (n <= " + std::to_string(a % 3) +
             ") {\n        return 1;\n    }\n    long " + acc + " = n * " + name + "(n - " + std::to_string(b % 3 + 1) +
             ");\n    return " + acc + ";\n}";
      break;
  }
  if (st.comment) body = "// fixed\n" + body;
  return body;
}

double round4(double x) { return std::round(x * 1e4) / 1e4; }

TokenTrace make_trace(Rng& rng, std::size_t tokens, double mean_nll) {
  TokenTrace t;
  t.vocab_size = kVocab;
  const double max_h = std::log(static_cast<double>(kVocab));
  for (std::size_t i = 0; i < tokens; ++i) {
    const double nll = round4(std::max(0.0, mean_nll * 2.0 * rng.uniform()));
    t.token_nlls.push_back(nll);
    t.token_entropies.push_back(std::min(round4(0.5 * nll + 0.5 * rng.uniform()), std::floor(max_h * 1e4) / 1e4));
  }
  return t;
}

}  // namespace

SynthBenchmark make_synthetic(const SynthOptions& opts) {
  if (opts.problems < 1 || opts.models < 1 || opts.outputs < 1) {
    throw UsageError("synthetic benchmark needs at least one problem, model and output");
  }
  if (opts.models > 10) throw UsageError("synthetic benchmark supports at most 10 models");
  Rng rng(opts.seed);
  SynthBenchmark out;
  std::vector<double> skill;
  for (int i = 0; i < opts.models; ++i) {
    const bool small = i % 2 == 0;
    const std::string fam = kFamilies[i / 2];
    out.models.push_back({fam, small ? SizeClass::Small : SizeClass::Large, fam + (small ? "_S" : "_L")});
    skill.push_back(0.15 + 0.1 * rng.uniform() + (small ? 0.0 : 0.1));
  }

  for (int p = 0; p < opts.problems; ++p) {
    char pid[16];
    std::snprintf(pid, sizeof pid, "P%03d", p);
    const int tpl = rng.below(4);
    const std::string name = "f" + std::to_string(p);
    // Cluster 0 is correct; the wrong clusters are ordered by popularity.
    constexpr int kClusters = 4;
    std::vector<std::pair<int, int>> knobs;
    while (static_cast<int>(knobs.size()) < kClusters) {
      std::pair<int, int> k{rng.below(4), rng.below(4)};
      if (std::find(knobs.begin(), knobs.end(), k) == knobs.end()) knobs.push_back(k);
    }
    const double easiness = 0.3 + 1.4 * rng.uniform();

    for (std::size_t m = 0; m < out.models.size(); ++m) {
      for (int c = 0; c < opts.outputs; ++c) {
        GenerationRecord r;
        r.problem_id = pid;
        r.model = out.models[m];
        r.candidate_index = c;
        int cluster = 0;
        if (!rng.chance(std::min(0.95, skill[m] * easiness))) {
          const double u = rng.uniform();
          cluster = u < 0.6 ? 1 : (u < 0.85 ? 2 : 3);
        }
        Style st{rng.chance(0.6) ? 0 : rng.below(4), rng.chance(0.2), rng.chance(0.3)};
        const bool unparseable = rng.chance(opts.unparseable_rate);
        std::size_t tokens = 0;
        if (unparseable) {
          r.raw_output = "The bug is in the loop bound of " + name + "; change it accordingly.";
          tokens = 12;
        } else {
          const std::string code = program(tpl, name, knobs[cluster].first, knobs[cluster].second, st);
          r.raw_output = "Here is the fixed function:\n```java\n" + code + "\n```\n";
          r.extracted_code = code;
          r.byte_len = code.size();
          tokens = std::max<std::size_t>(1, tokenize(code, Language::Java).size());
        }
        // Popular wrong answers look confident to every model.
        const double base = cluster == 1 ? 0.25 : (cluster == 0 ? 0.35 : 0.5);
        for (std::size_t o = 0; o < out.models.size(); ++o) {
          TokenTrace t = make_trace(rng, tokens, base + (o == m ? 0.0 : 0.15));
          if (o == m) {
            r.trace = std::move(t);
          } else {
            r.cross_traces.emplace(out.models[o].label, std::move(t));
          }
        }
        out.labels.set({r.problem_id, r.model.label, c}, !unparseable && cluster == 0);
        out.records.push_back(std::move(r));
      }
    }
  }
  return out;
}

void write_synthetic(const std::filesystem::path& dir, const SynthOptions& opts) {
  const SynthBenchmark b = make_synthetic(opts);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  {
    std::ofstream out(dir / "records.jsonl", std::ios::binary);
    write_records(out, b.records);
    if (!out) throw DataError("cannot write " + (dir / "records.jsonl").string());
  }
  {
    std::ofstream out(dir / "labels.csv", std::ios::binary);
    write_labels(out, b.labels);
    if (!out) throw DataError("cannot write " + (dir / "labels.csv").string());
  }
  nlohmann::ordered_json cfg;
  cfg["records"] = "records.jsonl";
  cfg["labels"] = "labels.csv";
  std::vector<std::string> members;
  for (const auto& m : b.models) members.push_back(m.label);
  const int k = std::min(10, opts.models * opts.outputs);
  cfg["ensembles"] = nlohmann::ordered_json::array(
      {{{"name", "all"}, {"members", members}, {"n_outputs", opts.outputs}, {"k", k}}});
  cfg["pair_n_outputs"] = opts.outputs;
  cfg["pair_k"] = std::min(10, 2 * opts.outputs);
  cfg["out"] = "out";
  std::ofstream out(dir / "config.json", std::ios::binary);
  out << cfg.dump(2) << "\n";
  if (!out) throw DataError("cannot write " + (dir / "config.json").string());
}

}  // namespace ensel
