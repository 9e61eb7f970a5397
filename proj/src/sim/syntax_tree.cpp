#include "ensel/sim/syntax_tree.hpp"

#include <algorithm>

namespace ensel::sim {

namespace {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t hash_into(const SyntaxTree& node, std::vector<std::uint64_t>& out) {
  const std::size_t slot = out.size();
  out.push_back(0);
  std::uint64_t h = mix(fnv1a(node.kind));
  for (const auto& child : node.children) {
    h = mix(h ^ hash_into(child, out)) + 0x632be59bd9b4e019ULL;
  }
  h = mix(h ^ node.children.size());
  out[slot] = h;
  return h;
}

std::string leaf_kind(const Lexeme& l) {
  switch (l.kind) {
    case LexemeKind::Keyword:
      return "kw:" + l.text;
    case LexemeKind::Operator:
      return "op:" + l.text;
    case LexemeKind::Identifier:
      return "id";
    case LexemeKind::Number:
      return "num";
    case LexemeKind::String:
      return "str";
    case LexemeKind::Punct:
      break;
  }
  return "p:" + l.text;
}

struct Frame {
  std::string kind;
  char closer = '\0';
  std::vector<SyntaxTree> stmts;
  std::vector<SyntaxTree> current;
  int current_line = 0;

  void flush() {
    if (current.empty()) return;
    stmts.push_back(SyntaxTree{"stmt", std::move(current)});
    current.clear();
  }
};

}  // namespace

std::size_t SyntaxTree::node_count() const {
  std::size_t n = 1;
  for (const auto& c : children) n += c.node_count();
  return n;
}

std::optional<SyntaxTree> BracketTreeProvider::parse(std::string_view code) const {
  std::vector<Frame> stack;
  stack.push_back(Frame{"unit", '\0', {}, {}, 0});
  for (const Lexeme& l : lex(code, lang_)) {
    Frame& top = stack.back();
    if (lang_ == Language::Python && stack.size() == 1 && !top.current.empty() && l.line > top.current_line) {
      top.flush();
    }
    if (l.kind == LexemeKind::Punct && l.text.size() == 1) {
      const char c = l.text[0];
      if (c == '{' || c == '(' || c == '[') {
        top.current_line = l.line;
        stack.push_back(Frame{c == '{' ? "block" : c == '(' ? "paren" : "index",
                              c == '{' ? '}' : c == '(' ? ')' : ']', {}, {}, 0});
        continue;
      }
      if (c == '}' || c == ')' || c == ']') {
        if (stack.size() == 1 || top.closer != c) return std::nullopt;
        Frame done = std::move(stack.back());
        stack.pop_back();
        done.flush();
        stack.back().current.push_back(SyntaxTree{done.kind, std::move(done.stmts)});
        stack.back().current_line = l.line;
        continue;
      }
      if (c == ';') {
        top.flush();
        continue;
      }
    }
    top.current.push_back(SyntaxTree{leaf_kind(l), {}});
    top.current_line = l.line;
  }
  if (stack.size() != 1) return std::nullopt;
  stack.back().flush();
  return SyntaxTree{"unit", std::move(stack.back().stmts)};
}

std::vector<std::uint64_t> subtree_hashes(const SyntaxTree& tree) {
  std::vector<std::uint64_t> out;
  out.reserve(tree.node_count());
  hash_into(tree, out);
  return out;
}

double syntax_match_hashes(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b_sorted) {
  if (a.empty()) return 0.0;
  std::size_t hits = 0;
  for (auto h : a) {
    if (std::binary_search(b_sorted.begin(), b_sorted.end(), h)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(a.size());
}

double syntax_match(const SyntaxTree& a, const SyntaxTree& b) {
  auto hb = subtree_hashes(b);
  std::sort(hb.begin(), hb.end());
  return syntax_match_hashes(subtree_hashes(a), hb);
}

}  // namespace ensel::sim
