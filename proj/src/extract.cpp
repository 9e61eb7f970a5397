#include "ensel/extract.hpp"

#include <cctype>
#include <regex>

#include "ensel/assets.hpp"
#include "ensel/error.hpp"

namespace ensel {

namespace {

constexpr std::string_view kFence = "```";

std::size_t count_occurrences(std::string_view text, std::string_view needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string_view::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

// Replaces the single placeholder; the template is trusted to contain it.
std::string fill(std::string_view tmpl, std::string_view placeholder, std::string_view value) {
  auto pos = tmpl.find(placeholder);
  std::string out(tmpl.substr(0, pos));
  out += value;
  out += tmpl.substr(pos + placeholder.size());
  return out;
}

bool is_tag_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '+' || c == '#' || c == '-' ||
         c == '.';
}

// Index just past the brace that closes the one at `open`, skipping string
// and char literals and comments; npos if it never closes.
std::size_t match_brace(std::string_view s, std::size_t open) {
  int depth = 0;
  for (std::size_t i = open; i < s.size(); ++i) {
    char c = s[i];
    if (c == '"' || c == '\'') {
      for (++i; i < s.size() && s[i] != c; ++i) {
        if (s[i] == '\\') ++i;
      }
    } else if (c == '/' && i + 1 < s.size() && s[i + 1] == '/') {
      i = s.find('\n', i);
      if (i == std::string_view::npos) return std::string_view::npos;
    } else if (c == '/' && i + 1 < s.size() && s[i + 1] == '*') {
      i = s.find("*/", i + 2);
      if (i == std::string_view::npos) return std::string_view::npos;
      ++i;
    } else if (c == '{') {
      ++depth;
    } else if (c == '}') {
      if (--depth == 0) return i + 1;
    }
  }
  return std::string_view::npos;
}

bool is_statement_keyword(const std::string& w) {
  static const char* const kWords[] = {"if",    "else",   "for",  "while", "switch", "catch", "return",
                                       "new",   "throw",  "do",   "try",   "case",   "synchronized",
                                       "class", "interface", "enum", "record"};
  for (const char* k : kWords) {
    if (w == k) return true;
  }
  return false;
}

}  // namespace

std::string render_prompt(const PromptTask& task) {
  if (task.kind == TaskKind::Repair) {
    for (std::string_view marker : {std::string_view("<bug_start>"), std::string_view("<bug_end>")}) {
      if (count_occurrences(task.buggy_function, marker) != 1) {
        throw DataError("repair input must contain " + std::string(marker) + " exactly once");
      }
    }
    return fill(assets::get("prompts/repair.txt"), "{buggy_function}", task.buggy_function);
  }
  std::string prompt(assets::get("prompts/generate.txt"));
  prompt = fill(prompt, "{question_content}", task.question_content);
  prompt = fill(prompt, "{formatting_message}",
                task.starter_code ? assets::get("prompts/format_starter.txt")
                                  : assets::get("prompts/format_stdin.txt"));
  // Without starter code the placeholder line disappears entirely.
  prompt = task.starter_code ? fill(prompt, "{starter_code}", *task.starter_code)
                             : fill(prompt, "{starter_code}\n", "");
  return prompt;
}

std::vector<FencedBlock> fenced_blocks(std::string_view text) {
  std::vector<FencedBlock> blocks;
  std::size_t pos = 0;
  while (true) {
    std::size_t open = text.find(kFence, pos);
    if (open == std::string_view::npos) break;
    std::size_t p = open + kFence.size();
    std::size_t tag_end = p;
    while (tag_end < text.size() && is_tag_char(text[tag_end])) ++tag_end;
    FencedBlock block;
    std::size_t body_start = p;
    // A keyword only counts when the line ends right after it.
    std::size_t eol = tag_end;
    if (eol < text.size() && text[eol] == '\r') ++eol;
    if (eol < text.size() && text[eol] == '\n') {
      block.language = std::string(text.substr(p, tag_end - p));
      body_start = eol + 1;
    }
    std::size_t close = text.find(kFence, body_start);
    if (close == std::string_view::npos) break;
    std::string_view body = text.substr(body_start, close - body_start);
    if (!body.empty() && body.back() == '\n') body.remove_suffix(1);
    if (!body.empty() && body.back() == '\r') body.remove_suffix(1);
    block.body = std::string(body);
    blocks.push_back(std::move(block));
    pos = close + kFence.size();
  }
  return blocks;
}

bool has_full_method_declaration(std::string_view code) {
  // modifiers, optional type parameters, return type, name, parameter list,
  // optional throws clause, opening brace; anchored at a line start.
  static const std::regex kDecl(
      R"((?:^|\n)[ \t]*(?:@[\w.]+(?:\([^)]*\))?\s+)*)"
      R"((?:(?:public|protected|private|static|final|abstract|synchronized|native|strictfp|default)\s+)*)"
      R"((?:<[^>{};]*>\s*)?)"
      R"(([\w.$]+(?:\s*<[^{};()]*>)?(?:\s*\[\s*\])*)\s+([A-Za-z_$][\w$]*)\s*)"
      R"(\([^(){};]*\)\s*(?:throws\s+[\w.$,\s]+)?\{)");
  std::string s(code);
  for (auto it = std::sregex_iterator(s.begin(), s.end(), kDecl); it != std::sregex_iterator(); ++it) {
    const auto& m = *it;
    if (is_statement_keyword(m[1].str()) || is_statement_keyword(m[2].str())) continue;
    std::size_t open = static_cast<std::size_t>(m.position(0) + m.length(0) - 1);
    std::size_t close = match_brace(s, open);
    if (close != std::string_view::npos) return true;
  }
  return false;
}

std::optional<std::string> extract_code(std::string_view raw_output, std::string_view language_tag) {
  std::vector<FencedBlock> blocks = fenced_blocks(raw_output);
  if (blocks.empty()) return std::nullopt;
  if (blocks.size() == 1) return std::move(blocks.front().body);
  if (language_tag == "java") {
    for (auto& b : blocks) {
      if (has_full_method_declaration(b.body)) return std::move(b.body);
    }
    return std::move(blocks.front().body);
  }
  return std::move(blocks.back().body);
}

}  // namespace ensel
