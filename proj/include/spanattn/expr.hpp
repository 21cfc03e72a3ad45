#pragma once

#include "spanattn/bigint.hpp"
#include "spanattn/rng.hpp"

#include <cstdint>
#include <memory>
#include <string>

namespace spanattn {

enum class BinaryOp { kAdd, kSub, kMul, kDiv };

char op_symbol(BinaryOp op);

// Expression tree node: a literal or a binary operation. Division is integer
// division truncating toward zero.
struct ExprNode {
    BigInt literal;
    BinaryOp op = BinaryOp::kAdd;
    std::unique_ptr<ExprNode> left;
    std::unique_ptr<ExprNode> right;

    bool is_literal() const { return !left; }

    static std::unique_ptr<ExprNode> make_literal(BigInt value);
    static std::unique_ptr<ExprNode> make_op(BinaryOp op, std::unique_ptr<ExprNode> left,
                                             std::unique_ptr<ExprNode> right);
    std::unique_ptr<ExprNode> clone() const;
    int op_count() const;
};

struct GenConfig {
    double depth_mean = 5.0;
    double depth_std = 2.0;
    double digits_mean = 5.0;
    double digits_std = 2.0;
    int max_digits = 10;
    std::uint64_t seed = 0;
};

// Random expression tree. Depth (the number of binary operations) and
// per-literal digit counts are drawn from the configured Gaussians and
// clamped to [1, max_digits]. Right operands of a division are resampled
// until they evaluate to a nonzero value. Deterministic under the seed.
std::unique_ptr<ExprNode> gen_expression(const GenConfig& config);

// Evaluates the tree; throws std::domain_error on division by zero.
BigInt eval_expression(const ExprNode& node);

// Infix rendering. Operands that are themselves operations are
// parenthesized; the top level is bare.
std::string render_expression(const ExprNode& node);

}  // namespace spanattn
