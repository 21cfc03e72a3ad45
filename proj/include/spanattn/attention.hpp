#pragma once

#include "spanattn/types.hpp"

namespace spanattn {

// Additive attention mask: 0 permits attention at [i, j], kProhibit forbids
// it. Masked scores are mask + scores, so permitted scores pass unchanged.
struct AttentionMask {
    Mat values;

    Index rows() const { return values.rows(); }
    Index cols() const { return values.cols(); }

    static AttentionMask full(Index rows, Index cols);
    static AttentionMask causal(Index n);
    // grid[i*cols + j] != 0 means permitted.
    static AttentionMask from_permitted(Index rows, Index cols, const std::vector<std::uint8_t>& grid);

    // Every entry must be exactly 0 or kProhibit, with >= 1 permit per row.
    void validate() const;
};

// Scores (S row) and probabilities (A row) for one query position.
struct AttentionTrace {
    RowVec scores;
    RowVec probs;
};

struct AttentionResult {
    Mat output;  // m x d
    Mat scores;  // m x n, pre-mask
    Mat probs;   // m x n, exactly 0 at prohibited positions

    AttentionTrace row_trace(Index i) const { return {scores.row(i), probs.row(i)}; }
};

// Masked scaled-dot-product attention: S = Q K^T / sqrt(d), A = row-wise
// softmax(S + mask) with prohibited positions at exactly 0, O = A V.
// Q is m x d; K, V are n x d; mask is m x n.
AttentionResult dense_attention(const MatView& queries, const MatView& keys, const MatView& values,
                                const AttentionMask& mask);

// Unmasked single-query decode row: attends to every cached position.
Vec dense_decode_row(const VecView& query, const MatView& keys, const MatView& values);

struct RowAttentionResult {
    Vec output;
    Vec scores;
    Vec probs;
};

// Single-query decode row under a dense additive mask row (length n).
RowAttentionResult masked_decode_row(const VecView& query, const MatView& keys, const MatView& values,
                                     const Vec& mask_row);

}  // namespace spanattn
