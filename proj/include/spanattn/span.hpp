#pragma once

#include "spanattn/attention.hpp"
#include "spanattn/types.hpp"

#include <cstdint>
#include <vector>

namespace spanattn {

// One context block that intersects the selected attention span: the block
// index plus a per-token bit mask of length block_size. Blocks with no
// selected tokens are never recorded.
struct BlockSpan {
    int block_index = 0;
    std::vector<std::uint8_t> mask;  // 0/1 per in-block position
    bool full = false;               // all bits set; lets the kernel skip masking
    int set_bits = 0;

    int highest_set_bit() const;
};

inline bool operator==(const BlockSpan& a, const BlockSpan& b) {
    return a.block_index == b.block_index && a.mask == b.mask;
}

// Blocked encoding of one request's attention span. Entries are ordered by
// strictly increasing block index and every entry has at least one set bit.
struct SpanMetadata {
    int block_size = 0;
    std::vector<BlockSpan> entries;

    bool empty() const { return entries.empty(); }
    std::int64_t selected_count() const;
    // Throws unless the metadata is well-formed and fits a context of n tokens.
    void validate(Index n) const;
};

inline bool operator==(const SpanMetadata& a, const SpanMetadata& b) {
    return a.block_size == b.block_size && a.entries == b.entries;
}

// Encode a selected token set (indices < n, duplicates allowed) into block
// metadata. Throws EmptySpanError / SpanRangeError.
SpanMetadata encode_span(std::vector<Index> selected, Index n, int block_size);

// Decode back to the sorted list of selected token indices.
std::vector<Index> span_token_indices(const SpanMetadata& meta);

// Equivalent dense mask: a single 1 x n additive row (permit exactly at the
// encoded positions). Round-trips with encode_span.
AttentionMask metadata_to_dense_mask(const SpanMetadata& meta, Index n);

}  // namespace spanattn
