#include "ensel/lexer.hpp"

#include <algorithm>
#include <cctype>

#include "ensel/assets.hpp"
#include "ensel/error.hpp"

namespace ensel {

namespace {

std::unordered_set<std::string> load_keywords(std::string_view asset) {
  std::unordered_set<std::string> out;
  std::string_view text = assets::get(asset);
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view word = text.substr(pos, end - pos);
    while (!word.empty() && std::isspace(static_cast<unsigned char>(word.back()))) word.remove_suffix(1);
    if (!word.empty()) out.emplace(word);
    pos = end + 1;
  }
  return out;
}

// Longest first within each list.
constexpr std::string_view kJavaOps[] = {
    ">>>=", "<<=", ">>=", ">>>", "...", "->", "::", "++", "--", "&&", "||", "==", "!=",
    "<=",   ">=",  "+=",  "-=",  "*=",  "/=", "%=", "&=", "|=", "^=", "<<", ">>"};
constexpr std::string_view kPythonOps[] = {
    "**=", "//=", ">>=", "<<=", "->", ":=", "**", "//", "==", "!=", "<=",
    ">=",  "+=",  "-=",  "*=",  "/=", "%=", "&=", "|=", "^=", "<<", ">>", "@="};
constexpr std::string_view kSingleOps = "+-*/%=<>!~?:&|^@";

bool ident_start(unsigned char c) { return std::isalpha(c) || c == '_' || c == '$' || c >= 0x80; }
bool ident_char(unsigned char c) { return std::isalnum(c) || c == '_' || c == '$' || c >= 0x80; }

bool is_python_string_prefix(std::string_view w) {
  std::string lower;
  for (char c : w) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  static const char* const kPrefixes[] = {"r", "b", "f", "u", "rb", "br", "fr", "rf"};
  return std::any_of(std::begin(kPrefixes), std::end(kPrefixes), [&](const char* p) { return lower == p; });
}

class Lexer {
 public:
  Lexer(std::string_view src, Language lang) : s_(src), lang_(lang), kw_(keywords(lang)) {}

  std::vector<Lexeme> run() {
    while (i_ < s_.size()) {
      unsigned char c = s_[i_];
      if (c == '\n') {
        ++line_;
        ++i_;
      } else if (std::isspace(c)) {
        ++i_;
      } else if (lang_ == Language::Java && starts_with("//")) {
        skip_to_eol();
      } else if (lang_ == Language::Java && starts_with("/*")) {
        skip_block_comment();
      } else if (lang_ == Language::Python && c == '#') {
        skip_to_eol();
      } else if (ident_start(c)) {
        identifier();
      } else if (std::isdigit(c) || (c == '.' && i_ + 1 < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_ + 1])))) {
        number();
      } else if (c == '"' || c == '\'') {
        string_literal(i_, line_);
      } else {
        op_or_punct();
      }
    }
    return std::move(out_);
  }

 private:
  bool starts_with(std::string_view p) const { return s_.substr(i_, p.size()) == p; }

  void skip_to_eol() {
    while (i_ < s_.size() && s_[i_] != '\n') ++i_;
  }

  void skip_block_comment() {
    i_ += 2;
    while (i_ < s_.size() && !starts_with("*/")) {
      if (s_[i_] == '\n') ++line_;
      ++i_;
    }
    i_ = std::min(s_.size(), i_ + 2);
  }

  void emit(std::size_t start, LexemeKind kind, int line) {
    out_.push_back({std::string(s_.substr(start, i_ - start)), kind, line});
  }

  void identifier() {
    std::size_t start = i_;
    while (i_ < s_.size() && ident_char(static_cast<unsigned char>(s_[i_]))) ++i_;
    std::string_view word = s_.substr(start, i_ - start);
    if (lang_ == Language::Python && i_ < s_.size() && (s_[i_] == '"' || s_[i_] == '\'') &&
        is_python_string_prefix(word)) {
      string_literal(start, line_);
      return;
    }
    emit(start, kw_.contains(std::string(word)) ? LexemeKind::Keyword : LexemeKind::Identifier, line_);
  }

  void number() {
    std::size_t start = i_;
    while (i_ < s_.size()) {
      unsigned char c = s_[i_];
      if (std::isalnum(c) || c == '_' || c == '.') {
        ++i_;
      } else if ((c == '+' || c == '-') && i_ > start &&
                 std::string_view("eEpP").find(s_[i_ - 1]) != std::string_view::npos &&
                 !(s_[start] == '0' && i_ > start + 1 && (s_[start + 1] == 'x' || s_[start + 1] == 'X') &&
                   (s_[i_ - 1] == 'e' || s_[i_ - 1] == 'E'))) {
        ++i_;
      } else {
        break;
      }
    }
    emit(start, LexemeKind::Number, line_);
  }

  // Consumes a literal whose opening quote is at i_ (prefix, if any, starts
  // at `start`).
  void string_literal(std::size_t start, int line) {
    char q = s_[i_];
    bool triple = (lang_ == Language::Python || q == '"') && s_.substr(i_, 3) == std::string(3, q);
    if (triple) {
      i_ += 3;
      const std::string close(3, q);
      while (i_ < s_.size() && !starts_with(close)) {
        if (s_[i_] == '\\') ++i_;
        if (i_ < s_.size() && s_[i_] == '\n') ++line_;
        ++i_;
      }
      i_ = std::min(s_.size(), i_ + 3);
    } else {
      ++i_;
      while (i_ < s_.size() && s_[i_] != q && s_[i_] != '\n') {
        if (s_[i_] == '\\') ++i_;
        ++i_;
      }
      if (i_ < s_.size() && s_[i_] == q) ++i_;
      i_ = std::min(i_, s_.size());
    }
    emit(start, LexemeKind::String, line);
  }

  void op_or_punct() {
    auto try_ops = [&](const auto& ops) {
      for (std::string_view op : ops) {
        if (starts_with(op)) {
          std::size_t start = i_;
          i_ += op.size();
          emit(start, LexemeKind::Operator, line_);
          return true;
        }
      }
      return false;
    };
    if (lang_ == Language::Java ? try_ops(kJavaOps) : try_ops(kPythonOps)) return;
    std::size_t start = i_++;
    emit(start, kSingleOps.find(s_[start]) != std::string_view::npos ? LexemeKind::Operator : LexemeKind::Punct,
         line_);
  }

  std::string_view s_;
  Language lang_;
  const std::unordered_set<std::string>& kw_;
  std::size_t i_ = 0;
  int line_ = 1;
  std::vector<Lexeme> out_;
};

}  // namespace

Language parse_language(std::string_view tag) {
  std::string lower;
  for (char c : tag) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "java") return Language::Java;
  if (lower == "python") return Language::Python;
  throw UsageError("unsupported language '" + std::string(tag) + "' (expected java or python)");
}

const std::unordered_set<std::string>& keywords(Language lang) {
  static const auto java = load_keywords("keywords/java.txt");
  static const auto python = load_keywords("keywords/python.txt");
  return lang == Language::Java ? java : python;
}

std::vector<Lexeme> lex(std::string_view code, Language lang) { return Lexer(code, lang).run(); }

std::vector<std::string> tokenize(std::string_view code, Language lang) {
  std::vector<std::string> out;
  for (auto& l : lex(code, lang)) out.push_back(std::move(l.text));
  return out;
}

}  // namespace ensel
