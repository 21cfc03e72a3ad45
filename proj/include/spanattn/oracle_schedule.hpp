#pragma once

#include "spanattn/generate.hpp"
#include "spanattn/trace.hpp"

namespace spanattn {

struct OracleSchedule {
    std::vector<int> prompt;  // the trace's first line, anchor included
    Schedule schedule;        // one step per output token, ground truth forced
};

// Replays a solution trace as a generation plan: reference tokens are
// SpanSelect steps (full attention), anchors are AnchorEmit steps (full
// attention), and everything else is a Content step restricted to the line's
// resolved references plus the in-progress line.
OracleSchedule oracle_schedule(const EvaluationTrace& trace, int kernel_block,
                               const Vocab& vocab = default_vocab());

}  // namespace spanattn
