#pragma once

#include "spanattn/decoder.hpp"
#include "spanattn/protocol.hpp"

#include <optional>
#include <string>
#include <vector>

namespace spanattn {

// SpanSelect emits reference tokens and AnchorEmit emits anchor tokens; both
// attend to the full context. Content steps attend only to the resolved span.
enum class GenerationPhase { kSpanSelect, kContent, kAnchorEmit };

const char* phase_name(GenerationPhase phase);

struct StepRecord {
    Index position = 0;  // context tokens available to this step
    GenerationPhase phase = GenerationPhase::kContent;
    Index attended = 0;
    Index ignored = 0;
    double sparsity = 0.0;
};

// Plan for one generated token. Content steps carry the resolved reference
// span (token indices on earlier lines) and the start of the line being
// written; the engine appends the in-progress line tokens at run time.
// `forced_token` >= 0 replays a ground-truth token (the oracle standing in
// for a trained model); otherwise the greedy argmax is emitted.
struct ScheduledStep {
    GenerationPhase phase = GenerationPhase::kContent;
    std::vector<Index> ref_span;
    Index line_start = 0;
    int forced_token = -1;
};

struct Schedule {
    std::vector<ScheduledStep> steps;
    int kernel_block = 64;
};

struct GenerationResult {
    std::vector<int> tokens;         // emitted sequence
    std::vector<int> argmax_tokens;  // greedy pick at each step
    std::vector<Scalar> top2_margins;
    std::vector<StepRecord> records;
    ReadStats stats;
    double total_seconds = 0;
    double span_select_seconds = 0;
    Index span_select_steps = 0;
};

struct GenerateOptions {
    AttentionKernel kernel = AttentionKernel::kSparse;
    bool teacher_force = true;  // emit forced tokens where the schedule has them
    Index max_tokens = -1;      // -1 = run the whole schedule
};

// Greedy decoding under a per-step phase/span plan. Ties break toward the
// lowest token id. SpanSelect and AnchorEmit steps run full attention;
// Content steps run the restricted span through the chosen kernel.
GenerationResult greedy_generate(const DecoderWeights& weights, const std::vector<int>& prompt,
                                 const Schedule& schedule, const GenerateOptions& options = {});

}  // namespace spanattn
