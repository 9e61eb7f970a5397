#include "ensel/metric_kind.hpp"

#include <string>

#include "ensel/error.hpp"

namespace ensel {

std::string_view to_string(MetricKind m) {
  switch (m) {
    case MetricKind::CodeBleu:
      return "codebleu";
    case MetricKind::BertScoreF3:
      return "bertscore_f3";
    case MetricKind::NllPerByte:
      return "nll_per_byte";
    case MetricKind::EntropyPerByte:
      return "entropy_per_byte";
    case MetricKind::SumEntropyNorm:
      return "sum_entropy_norm";
  }
  return "?";
}

const std::vector<MetricKind>& all_metrics() {
  static const std::vector<MetricKind> kAll = {MetricKind::CodeBleu, MetricKind::BertScoreF3,
                                               MetricKind::NllPerByte, MetricKind::EntropyPerByte,
                                               MetricKind::SumEntropyNorm};
  return kAll;
}

MetricKind parse_metric(std::string_view name) {
  for (MetricKind m : all_metrics()) {
    if (to_string(m) == name) return m;
  }
  throw UsageError("unknown metric '" + std::string(name) + "'");
}

}  // namespace ensel
