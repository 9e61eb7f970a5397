#include "ensel/confmetrics.hpp"

#include <algorithm>
#include <cmath>

#include "ensel/error.hpp"

namespace ensel {

namespace {

double sum(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s;
}

void require_patch(const TokenTrace& trace, std::size_t byte_len) {
  if (byte_len == 0 || trace.token_nlls.empty()) throw DataError("degenerate patch");
}

}  // namespace

std::string_view to_string(ConfidenceMetric m) {
  switch (m) {
    case ConfidenceMetric::NllPerByte:
      return "nll_per_byte";
    case ConfidenceMetric::EntropyPerByte:
      return "entropy_per_byte";
    case ConfidenceMetric::SumEntropyNorm:
      return "sum_entropy_norm";
  }
  return "?";
}

double nll_per_byte(const TokenTrace& trace, std::size_t byte_len) {
  require_patch(trace, byte_len);
  return sum(trace.token_nlls) / static_cast<double>(byte_len);
}

double entropy_per_byte(const TokenTrace& trace, std::size_t byte_len) {
  require_patch(trace, byte_len);
  return sum(trace.token_entropies) / static_cast<double>(byte_len);
}

double sum_entropy_norm(const TokenTrace& trace) {
  if (trace.vocab_size < 2) throw DataError("sum_entropy_norm needs vocab_size >= 2");
  return sum(trace.token_entropies) / std::log(static_cast<double>(trace.vocab_size));
}

double confidence(ConfidenceMetric m, const TokenTrace& trace, std::size_t byte_len) {
  switch (m) {
    case ConfidenceMetric::NllPerByte:
      return nll_per_byte(trace, byte_len);
    case ConfidenceMetric::EntropyPerByte:
      return entropy_per_byte(trace, byte_len);
    case ConfidenceMetric::SumEntropyNorm:
      return sum_entropy_norm(trace);
  }
  return 0.0;
}

double cross_model_sum(const GenerationRecord& record, ConfidenceMetric m, const EnsembleSpec& ensemble) {
  std::vector<std::string> labels = ensemble.labels();
  std::sort(labels.begin(), labels.end());
  double total = 0.0;
  for (const auto& label : labels) {
    const TokenTrace* t = record.trace_under(label);
    if (t == nullptr) {
      throw DataError("candidate (" + record.problem_id + ", " + record.model.label + ", " +
                      std::to_string(record.candidate_index) + ") has no trace under model '" + label + "'");
    }
    total += confidence(m, *t, record.byte_len);
  }
  return total;
}

}  // namespace ensel
