#pragma once

#include <string_view>

namespace ensel::assets {

// Text assets compiled in from assets/, keyed by relative path
// (e.g. "prompts/repair.txt"). Throws std::out_of_range for unknown names.
std::string_view get(std::string_view name);

}  // namespace ensel::assets
