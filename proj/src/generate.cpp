#include "spanattn/generate.hpp"

#include <chrono>

namespace spanattn {

const char* phase_name(GenerationPhase phase) {
    switch (phase) {
        case GenerationPhase::kSpanSelect: return "span_select";
        case GenerationPhase::kContent: return "content";
        case GenerationPhase::kAnchorEmit: return "anchor_emit";
    }
    return "?";
}

namespace {

// Argmax with ties toward the lowest id, plus the top-2 logit margin.
std::pair<int, Scalar> greedy_pick(const Vec& logits) {
    int best = 0;
    Scalar best_value = logits[0];
    Scalar second = -std::numeric_limits<Scalar>::infinity();
    for (Index i = 1; i < logits.size(); ++i) {
        if (logits[i] > best_value) {
            second = best_value;
            best_value = logits[i];
            best = static_cast<int>(i);
        } else if (logits[i] > second) {
            second = logits[i];
        }
    }
    return {best, best_value - second};
}

}  // namespace

GenerationResult greedy_generate(const DecoderWeights& weights, const std::vector<int>& prompt,
                                 const Schedule& schedule, const GenerateOptions& options) {
    if (prompt.empty()) throw ScheduleError("prompt must not be empty");
    const Index steps =
        options.max_tokens < 0
            ? static_cast<Index>(schedule.steps.size())
            : std::min<Index>(options.max_tokens, static_cast<Index>(schedule.steps.size()));
    if (options.max_tokens > static_cast<Index>(schedule.steps.size()))
        throw ScheduleError("schedule supplies fewer steps than requested tokens");

    KVCache cache(weights.config.layers, weights.config.capacity, weights.config.dim);
    GenerationResult result;
    result.tokens.reserve(steps);

    const auto start_time = std::chrono::steady_clock::now();

    // All prompt tokens but the last go through batched prefill; the last
    // prompt token is fed as the first scheduled decode step's input, so
    // every generated token, including the first, honors its scheduled span.
    std::vector<int> prefix(prompt.begin(), prompt.end() - 1);
    prefill(weights, prefix, cache);
    int input_token = prompt.back();

    for (Index i = 0; i < steps; ++i) {
        const ScheduledStep& step = schedule.steps[i];
        const Index position = static_cast<Index>(prompt.size()) + i;  // context for this step
        const bool full = step.phase != GenerationPhase::kContent;

        std::optional<SpanMetadata> meta;
        Index attended = position;
        if (!full) {
            std::vector<Index> span = step.ref_span;
            for (Index t = step.line_start; t < position; ++t) span.push_back(t);
            attended = static_cast<Index>(span.size());
            meta = encode_span(std::move(span), position, schedule.kernel_block);
        }

        const auto step_start = std::chrono::steady_clock::now();
        DecodeStepResult out = decode_step(weights, cache, input_token, meta, options.kernel);
        const double step_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - step_start).count();
        if (step.phase == GenerationPhase::kSpanSelect) {
            result.span_select_seconds += step_seconds;
            ++result.span_select_steps;
        }

        const auto [argmax, margin] = greedy_pick(out.logits);
        result.argmax_tokens.push_back(argmax);
        result.top2_margins.push_back(margin);
        result.stats += out.stats;

        const int emitted =
            options.teacher_force && step.forced_token >= 0 ? step.forced_token : argmax;
        result.tokens.push_back(emitted);
        input_token = emitted;

        StepRecord record;
        record.position = position;
        record.phase = step.phase;
        record.attended = attended;
        record.ignored = position - attended;
        record.sparsity = sparsity_of(attended, position);
        result.records.push_back(record);
    }

    result.total_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time).count();
    return result;
}

}  // namespace spanattn
