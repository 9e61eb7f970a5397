#pragma once

#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace ensel {

enum class Language { Java, Python };

// "java" / "python" (case-insensitive); anything else throws UsageError.
Language parse_language(std::string_view tag);

enum class LexemeKind { Identifier, Keyword, Number, String, Operator, Punct };

struct Lexeme {
  std::string text;
  LexemeKind kind = LexemeKind::Identifier;
  int line = 0;
};

// Keyword set shipped for `lang` (from assets/keywords).
const std::unordered_set<std::string>& keywords(Language lang);

// Splits source into identifiers, keywords, numbers, string literals,
// operators and punctuation. Comments and whitespace are dropped. Never
// produces an empty lexeme. Unterminated literals run to end of input.
std::vector<Lexeme> lex(std::string_view code, Language lang);

// The token texts of lex(code, lang).
std::vector<std::string> tokenize(std::string_view code, Language lang);

}  // namespace ensel
