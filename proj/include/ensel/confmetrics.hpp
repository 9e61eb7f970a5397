#pragma once

// Confidence scores from token traces. Lower values mean the model found the
// candidate more natural; interpreting that direction is left to selection.

#include <cstddef>
#include <string_view>

#include "ensel/model.hpp"

namespace ensel {

enum class ConfidenceMetric { NllPerByte, EntropyPerByte, SumEntropyNorm };

std::string_view to_string(ConfidenceMetric m);

// Σ nll / byte_len. Throws DataError "degenerate patch" when byte_len is 0
// or the trace is empty.
double nll_per_byte(const TokenTrace& trace, std::size_t byte_len);

// Σ entropy / byte_len, same preconditions as nll_per_byte.
double entropy_per_byte(const TokenTrace& trace, std::size_t byte_len);

// Σ entropy / ln(vocab_size). Throws DataError when vocab_size < 2.
double sum_entropy_norm(const TokenTrace& trace);

double confidence(ConfidenceMetric m, const TokenTrace& trace, std::size_t byte_len);

// Sum of `m` over every ensemble member's trace of this candidate. Members
// are visited in ascending label order so the result is independent of how
// the ensemble lists them. Throws DataError naming a member without a trace.
double cross_model_sum(const GenerationRecord& record, ConfidenceMetric m,
                       const EnsembleSpec& ensemble);

}  // namespace ensel
