#pragma once

// Record and benchmark builders shared by unit and acceptance tests.

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <unistd.h>

#include "ensel/model.hpp"

namespace fixture {

inline ensel::ModelId model(const std::string& label) {
  // Labels follow FAM_S / FAM_L.
  const auto cut = label.rfind('_');
  return {label.substr(0, cut),
          label.substr(cut + 1) == "S" ? ensel::SizeClass::Small : ensel::SizeClass::Large, label};
}

inline ensel::TokenTrace trace(std::vector<double> nlls, std::vector<double> ents, long long vocab = 32000) {
  return {std::move(nlls), std::move(ents), vocab};
}

// A record with code fenced in its raw output, or no fence when `code` is
// nullopt. Every label in `scorers` gets a one-token trace.
inline ensel::GenerationRecord record(const std::string& pid, const std::string& label, int idx,
                                      std::optional<std::string> code,
                                      const std::vector<std::string>& scorers = {}) {
  ensel::GenerationRecord r;
  r.problem_id = pid;
  r.model = model(label);
  r.candidate_index = idx;
  r.raw_output = code ? "```java\n" + *code + "\n```" : "no code here";
  r.extracted_code = code;
  r.byte_len = code ? code->size() : 0;
  r.trace = trace({0.5}, {0.25});
  for (const auto& s : scorers) {
    if (s != label) r.cross_traces[s] = trace({0.5 + 0.1 * idx}, {0.25});
  }
  return r;
}

inline void write_text(const std::filesystem::path& p, const std::string& s) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out << s;
}

inline std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("ensel_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// Ten models (five families, small and large) and per-model solved sets
// over problems "P000".."P140":
//   smalls: S1 = P0..P109 is the best small model (110); the other smalls
//           cover pieces of P0..P131, so their union is 132.
//   larges: L1 = P0..P121 is the best large model (122); the others add
//           P132..P140, so their union is P0..P129 ∪ P132..P140 = 139.
//   all:    P0..P140 = 141.
// Each model has two outputs per problem; output 0 is plausible exactly on
// its solved set.
struct CeilingFixture {
  std::vector<std::string> small{"CL_S", "DS_S", "GM_S", "MI_S", "QW_S"};
  std::vector<std::string> large{"CL_L", "DS_L", "GM_L", "MI_L", "QW_L"};
  std::map<std::string, std::set<int>> solved;
  int problems = 141;

  CeilingFixture() {
    auto span = [](int lo, int hi) {
      std::set<int> s;
      for (int p = lo; p <= hi; ++p) s.insert(p);
      return s;
    };
    solved["QW_S"] = span(0, 109);
    solved["CL_S"] = span(100, 131);
    solved["DS_S"] = span(50, 80);
    solved["GM_S"] = span(0, 10);
    solved["MI_S"] = {};
    solved["QW_L"] = span(0, 121);
    solved["DS_L"] = span(110, 129);
    solved["CL_L"] = span(132, 140);
    solved["GM_L"] = span(20, 60);
    solved["MI_L"] = span(125, 129);
    for (int p = 133; p <= 135; ++p) solved["MI_L"].insert(p);
  }

  static std::string pid(int p) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "P%03d", p);
    return buf;
  }

  std::vector<std::string> all() const {
    std::vector<std::string> out = small;
    out.insert(out.end(), large.begin(), large.end());
    return out;
  }
};

}  // namespace fixture
