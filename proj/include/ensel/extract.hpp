#pragma once

// Prompt rendering and fenced code-block extraction.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ensel {

enum class TaskKind { Repair, Generate };

struct PromptTask {
  TaskKind kind = TaskKind::Repair;
  // Repair: the function with <bug_start>/<bug_end> markers.
  std::string buggy_function;
  // Generate:
  std::string question_content;
  std::optional<std::string> starter_code;
};

// Throws DataError when a Repair task does not contain each bug marker
// exactly once.
std::string render_prompt(const PromptTask& task);

struct FencedBlock {
  std::string language;  // keyword after the opening fence, possibly empty
  std::string body;
};

// All closed ``` blocks in order of appearance. An unterminated trailing
// fence does not form a block.
std::vector<FencedBlock> fenced_blocks(std::string_view text);

// True when `code` holds a Java-style method declaration (modifiers, return
// type, name, parameter list, `{`) whose body brace closes within the text.
bool has_full_method_declaration(std::string_view code);

// Extraction rule keyed by the target language. "java" outputs answer repair
// prompts: with several blocks the first one holding a full method
// declaration wins. Any other tag takes the last block. nullopt when the
// output has no fenced block.
std::optional<std::string> extract_code(std::string_view raw_output, std::string_view language_tag);

}  // namespace ensel
