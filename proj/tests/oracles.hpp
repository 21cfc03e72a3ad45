#pragma once

// Reference implementations the tests check the library against. These stay
// deliberately naive and independent of the Eigen paths under test.

#include "spanattn/bigint.hpp"
#include "spanattn/expr.hpp"
#include "spanattn/rng.hpp"
#include "spanattn/types.hpp"

#include <cmath>
#include <vector>

namespace oracles {

using spanattn::BigInt;
using spanattn::Index;
using spanattn::Mat;
using spanattn::Rng;
using spanattn::Scalar;
using spanattn::Vec;

// Triple-loop masked attention with a two-pass softmax. permitted[i*n + j]
// selects which positions row i may attend to.
inline Mat naive_attention(const Mat& queries, const Mat& keys, const Mat& values,
                           const std::vector<std::uint8_t>& permitted) {
    const Index m = queries.rows();
    const Index n = keys.rows();
    const Index d = queries.cols();
    Mat output = Mat::Zero(m, d);
    const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(d));
    for (Index i = 0; i < m; ++i) {
        std::vector<double> scores(n, 0.0);
        double row_max = -1e300;
        for (Index j = 0; j < n; ++j) {
            if (!permitted[i * n + j]) continue;
            double dot = 0.0;
            for (Index k = 0; k < d; ++k)
                dot += static_cast<double>(queries(i, k)) * static_cast<double>(keys(j, k));
            scores[j] = dot * inv_sqrt_d;
            if (scores[j] > row_max) row_max = scores[j];
        }
        double denom = 0.0;
        for (Index j = 0; j < n; ++j)
            if (permitted[i * n + j]) denom += std::exp(scores[j] - row_max);
        for (Index j = 0; j < n; ++j) {
            if (!permitted[i * n + j]) continue;
            const double w = std::exp(scores[j] - row_max) / denom;
            for (Index k = 0; k < d; ++k)
                output(i, k) += static_cast<Scalar>(w * static_cast<double>(values(j, k)));
        }
    }
    return output;
}

inline Mat random_matrix(Rng& rng, Index rows, Index cols) {
    Mat out(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) out(i, j) = static_cast<Scalar>(rng.normal());
    return out;
}

inline Vec random_vector(Rng& rng, Index n) {
    Vec out(n);
    for (Index i = 0; i < n; ++i) out[i] = static_cast<Scalar>(rng.normal());
    return out;
}

// Direct recursive evaluation, independent of the trace builder's
// incremental substitution path.
inline BigInt eval_tree(const spanattn::ExprNode& node) {
    if (node.is_literal()) return node.literal;
    const BigInt a = eval_tree(*node.left);
    const BigInt b = eval_tree(*node.right);
    switch (node.op) {
        case spanattn::BinaryOp::kAdd: return a + b;
        case spanattn::BinaryOp::kSub: return a - b;
        case spanattn::BinaryOp::kMul: return a * b;
        case spanattn::BinaryOp::kDiv: return a / b;
    }
    return BigInt(0);
}

}  // namespace oracles
