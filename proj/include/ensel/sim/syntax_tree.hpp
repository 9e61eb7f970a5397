#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ensel/lexer.hpp"

namespace ensel::sim {

struct SyntaxTree {
  std::string kind;
  std::vector<SyntaxTree> children;

  std::size_t node_count() const;
};

// Produces a structural tree for a piece of code. nullopt means the provider
// could not build one, which removes the syntax term from CodeBLEU.
class TreeProvider {
 public:
  virtual ~TreeProvider() = default;
  virtual std::optional<SyntaxTree> parse(std::string_view code) const = 0;
};

// Default provider: a bracket/statement tree over the lexemes.
//   unit -> stmt* ; stmt -> (leaf | block | paren | index)*
//   block = {...}, paren = (...), index = [...], each holding stmt*
// Statements end at ';' (and, for Python, at a line break outside of
// brackets). Leaves are "kw:<keyword>", "op:<operator>", "id", "num", "str".
// Unbalanced brackets make parse() return nullopt.
class BracketTreeProvider final : public TreeProvider {
 public:
  explicit BracketTreeProvider(Language lang) : lang_(lang) {}
  std::optional<SyntaxTree> parse(std::string_view code) const override;

 private:
  Language lang_;
};

// Structural hash of every node of `tree` (each node roots one subtree),
// in pre-order. Two subtrees have equal hashes iff kinds and child hash
// sequences agree (up to 64-bit collisions).
std::vector<std::uint64_t> subtree_hashes(const SyntaxTree& tree);

// Fraction of the subtrees of `a` whose hash occurs among the subtrees of `b`.
double syntax_match(const SyntaxTree& a, const SyntaxTree& b);

// Same, on precomputed subtree_hashes(); `b_sorted` must be sorted.
double syntax_match_hashes(const std::vector<std::uint64_t>& a,
                           const std::vector<std::uint64_t>& b_sorted);

}  // namespace ensel::sim
