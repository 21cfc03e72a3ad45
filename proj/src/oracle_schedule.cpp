#include "spanattn/oracle_schedule.hpp"

namespace spanattn {

OracleSchedule oracle_schedule(const EvaluationTrace& trace, int kernel_block,
                               const Vocab& vocab) {
    if (trace.lines.size() < 2) throw ScheduleError("trace has no output lines");
    const TokenizedTrace tokenized = tokenize_trace(trace, vocab);

    OracleSchedule out;
    out.schedule.kernel_block = kernel_block;
    const TokenRange& prompt_range = tokenized.lines.front();
    out.prompt.assign(tokenized.tokens.begin() + prompt_range.start,
                      tokenized.tokens.begin() + prompt_range.end + 1);

    // Anchors become referable only once their line is complete.
    AnchorTable visible;
    if (trace.lines.front().anchor)
        visible[*trace.lines.front().anchor] = tokenized.anchors.at(*trace.lines.front().anchor);

    std::vector<TokenRange> lines_so_far{prompt_range};
    for (std::size_t li = 1; li < trace.lines.size(); ++li) {
        const TraceLine& line = trace.lines[li];
        const TokenRange& range = tokenized.lines[li];

        // The reference part of the span is fixed per line; the engine adds
        // the growing [line_start, position) tail itself.
        const SpanRequest request{line.refs, range.start};
        std::vector<Index> ref_span;
        if (!line.refs.empty())
            ref_span = resolve_references(request, visible, lines_so_far, range.start);

        for (Index pos = range.start; pos <= range.end; ++pos) {
            ScheduledStep step;
            step.forced_token = tokenized.tokens[pos];
            step.line_start = range.start;
            if (vocab.is_ref(tokenized.tokens[pos])) {
                step.phase = GenerationPhase::kSpanSelect;
            } else if (vocab.is_anchor(tokenized.tokens[pos])) {
                step.phase = GenerationPhase::kAnchorEmit;
            } else {
                step.phase = GenerationPhase::kContent;
                step.ref_span = ref_span;
            }
            out.schedule.steps.push_back(std::move(step));
        }

        if (line.anchor) visible[*line.anchor] = tokenized.anchors.at(*line.anchor);
        lines_so_far.push_back(range);
    }
    return out;
}

}  // namespace spanattn
