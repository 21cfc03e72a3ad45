#pragma once

#include "spanattn/generate.hpp"
#include "spanattn/oracle_schedule.hpp"
#include "spanattn/trace.hpp"

#include <vector>

namespace spanattn {

struct SparsityRun {
    int run = 0;
    std::vector<StepRecord> records;
};

struct SparsitySummary {
    double mean = 0;
    double quartile_mean[4] = {0, 0, 0, 0};  // by position quartile within each run
    Index steps = 0;
};

struct SparsityTraceResult {
    std::vector<SparsityRun> runs;
    SparsitySummary summary;
};

// Replays oracle schedules for traces whose output length falls in
// [min_output_tokens, max_output_tokens) and records per-token achieved
// sparsity. Throws EmptyBinError when no trace qualifies.
SparsityTraceResult sparsity_trace(const std::vector<EvaluationTrace>& traces,
                                   const DecoderWeights& weights, int kernel_block,
                                   Index min_output_tokens, Index max_output_tokens, int max_runs,
                                   const Vocab& vocab = default_vocab());

SparsitySummary summarize_sparsity(const std::vector<SparsityRun>& runs);

}  // namespace spanattn
