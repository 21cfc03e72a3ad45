#pragma once

#include "spanattn/attention.hpp"
#include "spanattn/kernel.hpp"
#include "spanattn/kv_cache.hpp"
#include "spanattn/model.hpp"
#include "spanattn/span.hpp"

#include <optional>
#include <vector>

namespace spanattn {

// How a restricted span is executed: through the blocked sparse kernel, or
// through the dense path with the metadata expanded to a mask row (the
// reference twin for equivalence runs). Full-attention steps always take the
// dense path.
enum class AttentionKernel { kSparse, kDenseMasked };

// Wall-time accumulators for one decode step, split the way the runtime
// breakdown reports it.
struct ComponentTimers {
    double attention_s = 0;
    double ffn_s = 0;
    double other_s = 0;
};

struct PrefillResult {
    RowVec hidden;  // last position, post-residual
    Vec logits;
};

// One batched pass over the prompt with causal masking; fills cache rows
// [0, prompt size). The cache must be empty.
PrefillResult prefill(const DecoderWeights& weights, const std::vector<int>& prompt,
                      KVCache& cache);

struct DecodeStepResult {
    Vec logits;
    ReadStats stats;  // summed over layers and heads
};

// Appends one K/V row per layer and computes the next-token logits. With no
// span the step attends to the whole cache (FULL); with a span it attends
// only to the encoded positions, executed per `kernel`.
DecodeStepResult decode_step(const DecoderWeights& weights, KVCache& cache, int token,
                             const std::optional<SpanMetadata>& span,
                             AttentionKernel kernel = AttentionKernel::kSparse,
                             ComponentTimers* timers = nullptr);

}  // namespace spanattn
