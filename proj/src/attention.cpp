#include "spanattn/attention.hpp"

#include <cmath>

namespace spanattn {

AttentionMask AttentionMask::full(Index rows, Index cols) {
    return {Mat::Zero(rows, cols)};
}

AttentionMask AttentionMask::causal(Index n) {
    Mat values(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) values(i, j) = j <= i ? Scalar(0) : kProhibit;
    return {std::move(values)};
}

AttentionMask AttentionMask::from_permitted(Index rows, Index cols,
                                            const std::vector<std::uint8_t>& grid) {
    if (static_cast<Index>(grid.size()) != rows * cols)
        throw DimensionError("mask grid size does not match rows*cols");
    Mat values(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) values(i, j) = grid[i * cols + j] ? Scalar(0) : kProhibit;
    return {std::move(values)};
}

void AttentionMask::validate() const {
    for (Index i = 0; i < values.rows(); ++i) {
        bool permit = false;
        for (Index j = 0; j < values.cols(); ++j) {
            const Scalar v = values(i, j);
            if (v != Scalar(0) && v != kProhibit)
                throw DimensionError("mask entries must be 0 or the prohibit sentinel");
            permit |= v == Scalar(0);
        }
        if (!permit) throw AllProhibitedError("mask row permits no position");
    }
}

AttentionResult dense_attention(const MatView& queries, const MatView& keys, const MatView& values,
                                const AttentionMask& mask) {
    const Index m = queries.rows();
    const Index n = keys.rows();
    const Index d = queries.cols();
    if (keys.cols() != d || values.cols() != d) throw DimensionError("Q/K/V width mismatch");
    if (values.rows() != n) throw DimensionError("K/V length mismatch");
    if (mask.rows() != m || mask.cols() != n) throw DimensionError("mask shape mismatch");

    AttentionResult result;
    const Scalar inv_sqrt_d = Scalar(1) / std::sqrt(static_cast<Scalar>(d));
    result.scores.noalias() = queries * keys.transpose();
    result.scores *= inv_sqrt_d;

    // Row-wise softmax over masked scores; prohibited positions end at
    // exactly 0 (forced, not left to exp underflow).
    result.probs.resize(m, n);
    for (Index i = 0; i < m; ++i) {
        auto masked = (result.scores.row(i) + mask.values.row(i)).eval();
        const Scalar row_max = masked.maxCoeff();
        if (row_max == kProhibit) throw AllProhibitedError("attention row permits no position");
        RowVec w = (masked.array() - row_max).exp().matrix();
        w.array() *= (mask.values.row(i).array() == Scalar(0)).cast<Scalar>();
        result.probs.row(i) = w / w.sum();
    }
    result.output.noalias() = result.probs * values;
    return result;
}

Vec dense_decode_row(const VecView& query, const MatView& keys, const MatView& values) {
    const Index n = keys.rows();
    const Index d = keys.cols();
    if (query.size() != d || values.cols() != d || values.rows() != n)
        throw DimensionError("q/K/V shape mismatch");
    const Scalar inv_sqrt_d = Scalar(1) / std::sqrt(static_cast<Scalar>(d));
    Vec scores = keys * query * inv_sqrt_d;
    const Scalar row_max = scores.maxCoeff();
    Vec w = (scores.array() - row_max).exp().matrix();
    return values.transpose() * w / w.sum();
}

RowAttentionResult masked_decode_row(const VecView& query, const MatView& keys,
                                     const MatView& values, const Vec& mask_row) {
    const Index n = keys.rows();
    const Index d = keys.cols();
    if (query.size() != d || values.cols() != d || values.rows() != n)
        throw DimensionError("q/K/V shape mismatch");
    if (mask_row.size() != n) throw DimensionError("mask row length mismatch");

    RowAttentionResult result;
    const Scalar inv_sqrt_d = Scalar(1) / std::sqrt(static_cast<Scalar>(d));
    result.scores = keys * query * inv_sqrt_d;
    Vec masked = result.scores + mask_row;
    const Scalar row_max = masked.maxCoeff();
    if (row_max == kProhibit) throw AllProhibitedError("attention row permits no position");
    Vec w = (masked.array() - row_max).exp().matrix();
    w.array() *= (mask_row.array() == Scalar(0)).cast<Scalar>();
    result.probs = w / w.sum();
    result.output = values.transpose() * result.probs;
    return result;
}

}  // namespace spanattn
