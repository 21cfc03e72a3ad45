#pragma once

#include "spanattn/span.hpp"
#include "spanattn/types.hpp"

#include <vector>

namespace spanattn {

struct SparseDecodeResult {
    Vec output;
    ReadStats stats;
};

// Blocked sparse decode attention for one query vector. Only the blocks
// listed in the metadata are read; an online softmax (running max + running
// sum) accumulates across them, so skipped blocks contribute nothing.
// Runs of consecutive listed blocks are processed as one contiguous slab.
// Matches the dense-masked reference within 1e-5 max-abs.
SparseDecodeResult sparse_decode_attention(const VecView& query, const MatView& keys,
                                           const MatView& values, const SpanMetadata& meta);

// Per-request dispatch: element i uses queries[i], keys[i]/values[i], and its
// own metadata. Results are identical to sequential single-request calls.
std::vector<SparseDecodeResult> batched_sparse_decode(const std::vector<Vec>& queries,
                                                      const std::vector<Mat>& keys,
                                                      const std::vector<Mat>& values,
                                                      const std::vector<SpanMetadata>& metas);

}  // namespace spanattn
