#pragma once

#include "spanattn/decoder.hpp"

#include <vector>

namespace spanattn {

struct BreakdownResult {
    Index seq_len = 0;
    double attention_ms = 0;
    double ffn_ms = 0;
    double other_ms = 0;
    double attention_share = 0;  // of the component total
    double ffn_share = 0;
    double other_share = 0;
};

// Times the components of single-token decode steps at a fixed context
// length: the cache is preloaded with `seq_len - 1` random rows and the same
// position is decoded repeatedly. Medians over `reps` after 3 warmup steps.
BreakdownResult runtime_breakdown(const DecoderWeights& weights, Index seq_len, int batch,
                                  int reps, std::uint64_t seed);

std::vector<BreakdownResult> runtime_breakdown_sweep(const DecoderWeights& weights,
                                                     const std::vector<Index>& seq_lens, int batch,
                                                     int reps, std::uint64_t seed);

}  // namespace spanattn
