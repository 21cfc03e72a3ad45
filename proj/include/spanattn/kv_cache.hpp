#pragma once

#include "spanattn/types.hpp"

#include <vector>

namespace spanattn {

// Preallocated per-layer key/value storage with a shared length cursor.
// Rows below the cursor are written once and never touched again during a
// generation; storage never grows after construction.
class KVCache {
public:
    KVCache(int layers, Index capacity, Index dim);

    Index length() const { return length_; }
    Index capacity() const { return capacity_; }
    int layers() const { return static_cast<int>(keys_.size()); }
    Index dim() const { return dim_; }

    bool full() const { return length_ == capacity_; }

    // Writes the next row for one layer at the current cursor. Every layer
    // must be written before advance() commits the token.
    void write_row(int layer, const RowVec& key, const RowVec& value);
    void advance();

    // Bulk write for prefill: rows [length, length + keys.rows()).
    void write_rows(int layer, const Mat& keys, const Mat& values);
    void advance_by(Index count);

    // Views over the populated prefix, optionally narrowed to one head.
    MatView keys(int layer) const;
    MatView values(int layer) const;
    MatView keys(int layer, Index head_start, Index head_dim) const;
    MatView values(int layer, Index head_start, Index head_dim) const;
    // Explicit row count, for reading rows written but not yet committed by
    // advance() (the in-flight decode row).
    MatView keys(int layer, Index head_start, Index head_dim, Index rows) const;
    MatView values(int layer, Index head_start, Index head_dim, Index rows) const;

    // Measurement-harness hook: rewinds the cursor so a benchmark can decode
    // the same position repeatedly. Not part of the generation discipline.
    void truncate(Index new_length);

private:
    std::vector<Mat> keys_;
    std::vector<Mat> values_;
    Index capacity_ = 0;
    Index dim_ = 0;
    Index length_ = 0;
};

}  // namespace spanattn
