#pragma once

#include <string_view>
#include <vector>

namespace ensel {

enum class MetricKind { CodeBleu, BertScoreF3, NllPerByte, EntropyPerByte, SumEntropyNorm };

// Names used in configs, file names and CSV headers:
// codebleu, bertscore_f3, nll_per_byte, entropy_per_byte, sum_entropy_norm.
std::string_view to_string(MetricKind m);
MetricKind parse_metric(std::string_view name);
const std::vector<MetricKind>& all_metrics();

// Pairwise similarity metrics (as opposed to per-candidate confidence).
constexpr bool is_output_based(MetricKind m) {
  return m == MetricKind::CodeBleu || m == MetricKind::BertScoreF3;
}

}  // namespace ensel
