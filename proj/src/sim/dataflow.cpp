#include "ensel/sim/dataflow.hpp"

#include <algorithm>
#include <unordered_set>

namespace ensel::sim {

namespace {

bool is_assignment(const Lexeme& l, Language lang) {
  if (l.kind != LexemeKind::Operator) return false;
  static const std::unordered_set<std::string> kJava = {"=",  "+=", "-=", "*=",  "/=",  "%=",
                                                        "&=", "|=", "^=", "<<=", ">>=", ">>>="};
  static const std::unordered_set<std::string> kPython = {"=",  "+=", "-=",  "*=",  "/=",  "%=", "&=",
                                                          "|=", "^=", "<<=", ">>=", "**=", "//=", ":=",
                                                          "@="};
  return (lang == Language::Java ? kJava : kPython).contains(l.text);
}

bool is_punct(const Lexeme& l, char c) {
  return l.kind == LexemeKind::Punct && l.text.size() == 1 && l.text[0] == c;
}

// Bracket depth of each lexeme; brackets themselves sit at the outer depth.
std::vector<int> depths(const std::vector<Lexeme>& lx) {
  std::vector<int> d(lx.size());
  int depth = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const bool open = is_punct(lx[i], '(') || is_punct(lx[i], '[') || is_punct(lx[i], '{');
    const bool close = is_punct(lx[i], ')') || is_punct(lx[i], ']') || is_punct(lx[i], '}');
    if (close) depth = std::max(0, depth - 1);
    d[i] = depth;
    if (open) ++depth;
  }
  return d;
}

}  // namespace

DataflowSet DataflowSet::from(std::vector<DataflowEdge> edges) {
  std::sort(edges.begin(), edges.end());
  return DataflowSet{std::move(edges)};
}

std::optional<DataflowSet> AssignmentDataflowProvider::extract(std::string_view code) const {
  const std::vector<Lexeme> lx = lex(code, lang_);
  const std::vector<int> depth = depths(lx);
  const bool python = lang_ == Language::Python;
  std::vector<DataflowEdge> edges;

  for (std::size_t i = 0; i < lx.size(); ++i) {
    if (!is_assignment(lx[i], lang_)) continue;
    const int d = depth[i];

    const std::string* target = nullptr;
    for (std::size_t j = i; j-- > 0;) {
      if (depth[j] < d) break;
      if (depth[j] > d) continue;
      if (is_punct(lx[j], ';') || is_punct(lx[j], ',') || is_punct(lx[j], '{') || is_punct(lx[j], '}') ||
          is_assignment(lx[j], lang_)) {
        break;
      }
      if (python && d == 0 && lx[j].line < lx[i].line) break;
      if (lx[j].kind == LexemeKind::Identifier) {
        target = &lx[j].text;
        break;
      }
    }
    if (target == nullptr) continue;

    for (std::size_t k = i + 1; k < lx.size(); ++k) {
      if (depth[k] < d) break;
      if (depth[k] == d && (is_punct(lx[k], ';') || is_punct(lx[k], ','))) break;
      if (python && d == 0 && depth[k] == 0 && depth[k - 1] == 0 && lx[k].line > lx[k - 1].line) break;
      if (lx[k].kind == LexemeKind::Identifier) edges.emplace_back(*target, lx[k].text);
    }
  }
  return DataflowSet::from(std::move(edges));
}

double dataflow_match(const DataflowSet& a, const DataflowSet& b) {
  if (a.edges.empty()) return b.edges.empty() ? 1.0 : 0.0;
  if (!std::is_sorted(a.edges.begin(), a.edges.end()) || !std::is_sorted(b.edges.begin(), b.edges.end())) {
    return dataflow_match(DataflowSet::from(a.edges), DataflowSet::from(b.edges));
  }
  // Both sorted: multiset intersection by merge.
  std::size_t hits = 0;
  auto ia = a.edges.begin();
  auto ib = b.edges.begin();
  while (ia != a.edges.end() && ib != b.edges.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++hits;
      ++ia;
      ++ib;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(a.edges.size());
}

}  // namespace ensel::sim
