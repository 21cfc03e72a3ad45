#pragma once

#include "spanattn/expr.hpp"
#include "spanattn/trace.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace spanattn {

struct DatasetExample {
    EvaluationTrace trace;
    int bin = 0;
    std::uint64_t seed = 0;  // per-example generator seed
};

struct DatasetConfig {
    int count = 1000;
    Index bin_width = 256;
    Index max_output_tokens = 1536;
    GenConfig gen;  // seed acts as the master seed
    std::int64_t max_attempts = 0;  // 0 = 400 * count
};

struct BinReport {
    int bin = 0;
    int target = 0;
    int filled = 0;
};

struct Dataset {
    std::vector<DatasetExample> examples;
    std::vector<BinReport> bins;
    std::int64_t attempts = 0;
};

// Rejection-samples expressions until every output-length bin holds its share
// of `count` examples (or attempts run out; partially filled bins are
// reported, not fatal). Deterministic under the master seed.
Dataset generate_dataset(const DatasetConfig& config, const Vocab& vocab = default_vocab());

// One JSON object per line:
//   {"expression": str, "answer": str,
//    "lines": [{"refs": [int|"prev"|[a,b]], "text": str, "anchor": int|null}],
//    "bin": int, "seed": int}
void write_dataset_jsonl(std::ostream& out, const Dataset& dataset);
std::vector<DatasetExample> read_dataset_jsonl(std::istream& in);

// Rebuilds the in-memory trace (answer parsed back, dependency ranges
// resolved from the stored refs).
EvaluationTrace trace_from_record(const std::string& expression, const std::string& answer,
                                  const std::vector<TraceLine>& lines,
                                  const Vocab& vocab = default_vocab());

}  // namespace spanattn
