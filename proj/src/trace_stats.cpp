#include "spanattn/trace_stats.hpp"

namespace spanattn {

SparsitySummary summarize_sparsity(const std::vector<SparsityRun>& runs) {
    SparsitySummary summary;
    double total = 0;
    double quartile_total[4] = {0, 0, 0, 0};
    Index quartile_count[4] = {0, 0, 0, 0};
    for (const SparsityRun& run : runs) {
        const Index steps = static_cast<Index>(run.records.size());
        for (Index i = 0; i < steps; ++i) {
            total += run.records[i].sparsity;
            ++summary.steps;
            const int q = std::min<Index>(3, i * 4 / steps);
            quartile_total[q] += run.records[i].sparsity;
            ++quartile_count[q];
        }
    }
    if (summary.steps > 0) summary.mean = total / static_cast<double>(summary.steps);
    for (int q = 0; q < 4; ++q)
        if (quartile_count[q] > 0)
            summary.quartile_mean[q] = quartile_total[q] / static_cast<double>(quartile_count[q]);
    return summary;
}

SparsityTraceResult sparsity_trace(const std::vector<EvaluationTrace>& traces,
                                   const DecoderWeights& weights, int kernel_block,
                                   Index min_output_tokens, Index max_output_tokens, int max_runs,
                                   const Vocab& vocab) {
    SparsityTraceResult result;
    int run_id = 0;
    for (const EvaluationTrace& trace : traces) {
        if (run_id >= max_runs) break;
        const TokenizedTrace tokenized = tokenize_trace(trace, vocab);
        const Index out_tokens = output_token_count(tokenized);
        if (out_tokens < min_output_tokens || out_tokens >= max_output_tokens) continue;

        const OracleSchedule oracle = oracle_schedule(trace, kernel_block, vocab);
        GenerateOptions options;
        options.kernel = AttentionKernel::kSparse;
        options.teacher_force = true;
        const GenerationResult gen = greedy_generate(weights, oracle.prompt, oracle.schedule, options);
        result.runs.push_back({run_id++, gen.records});
    }
    if (result.runs.empty())
        throw EmptyBinError("no trace has output length in the requested bin");
    result.summary = summarize_sparsity(result.runs);
    return result;
}

}  // namespace spanattn
