#include "spanattn/span.hpp"

#include <algorithm>
#include <string>

namespace spanattn {

int BlockSpan::highest_set_bit() const {
    for (int i = static_cast<int>(mask.size()) - 1; i >= 0; --i)
        if (mask[i]) return i;
    return -1;
}

std::int64_t SpanMetadata::selected_count() const {
    std::int64_t total = 0;
    for (const auto& entry : entries) total += entry.set_bits;
    return total;
}

void SpanMetadata::validate(Index n) const {
    if (block_size < 1) throw DimensionError("block_size must be >= 1");
    if (entries.empty()) throw EmptySpanError("metadata lists no blocks");
    int prev_index = -1;
    for (const auto& entry : entries) {
        if (entry.block_index <= prev_index)
            throw SpanRangeError("block indices must be strictly increasing");
        prev_index = entry.block_index;
        if (static_cast<int>(entry.mask.size()) != block_size)
            throw DimensionError("block mask length must equal block_size");
        const int high = entry.highest_set_bit();
        if (high < 0) throw EmptySpanError("metadata block has no set bits");
        const std::int64_t last = std::int64_t(entry.block_index) * block_size + high;
        if (last >= n) throw SpanRangeError("metadata references token " + std::to_string(last) +
                                            " beyond context length " + std::to_string(n));
    }
}

SpanMetadata encode_span(std::vector<Index> selected, Index n, int block_size) {
    if (block_size < 1) throw DimensionError("block_size must be >= 1");
    if (selected.empty()) throw EmptySpanError("selected token set is empty");
    std::sort(selected.begin(), selected.end());
    selected.erase(std::unique(selected.begin(), selected.end()), selected.end());
    if (selected.front() < 0 || selected.back() >= n)
        throw SpanRangeError("selected token index out of range");

    SpanMetadata meta;
    meta.block_size = block_size;
    for (Index token : selected) {
        const int block = static_cast<int>(token / block_size);
        if (meta.entries.empty() || meta.entries.back().block_index != block) {
            BlockSpan entry;
            entry.block_index = block;
            entry.mask.assign(block_size, 0);
            meta.entries.push_back(std::move(entry));
        }
        meta.entries.back().mask[token % block_size] = 1;
    }
    for (auto& entry : meta.entries) {
        entry.set_bits = static_cast<int>(std::count(entry.mask.begin(), entry.mask.end(), 1));
        // A block truncated by the end of context counts as full once every
        // in-range position is set.
        const Index begin = Index(entry.block_index) * block_size;
        const Index usable = std::min<Index>(block_size, n - begin);
        entry.full = entry.set_bits == usable;
    }
    return meta;
}

std::vector<Index> span_token_indices(const SpanMetadata& meta) {
    std::vector<Index> indices;
    for (const auto& entry : meta.entries) {
        const Index base = Index(entry.block_index) * meta.block_size;
        for (int i = 0; i < static_cast<int>(entry.mask.size()); ++i)
            if (entry.mask[i]) indices.push_back(base + i);
    }
    return indices;
}

AttentionMask metadata_to_dense_mask(const SpanMetadata& meta, Index n) {
    meta.validate(n);
    Mat row = Mat::Constant(1, n, kProhibit);
    for (Index token : span_token_indices(meta)) row(0, token) = Scalar(0);
    return {std::move(row)};
}

}  // namespace spanattn
