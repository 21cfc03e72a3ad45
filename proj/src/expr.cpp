#include "spanattn/expr.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spanattn {

char op_symbol(BinaryOp op) {
    switch (op) {
        case BinaryOp::kAdd: return '+';
        case BinaryOp::kSub: return '-';
        case BinaryOp::kMul: return '*';
        case BinaryOp::kDiv: return '/';
    }
    throw std::logic_error("unreachable");
}

std::unique_ptr<ExprNode> ExprNode::make_literal(BigInt value) {
    auto node = std::make_unique<ExprNode>();
    node->literal = std::move(value);
    return node;
}

std::unique_ptr<ExprNode> ExprNode::make_op(BinaryOp op, std::unique_ptr<ExprNode> left,
                                            std::unique_ptr<ExprNode> right) {
    auto node = std::make_unique<ExprNode>();
    node->op = op;
    node->left = std::move(left);
    node->right = std::move(right);
    return node;
}

std::unique_ptr<ExprNode> ExprNode::clone() const {
    if (is_literal()) return make_literal(literal);
    return make_op(op, left->clone(), right->clone());
}

int ExprNode::op_count() const {
    if (is_literal()) return 0;
    return 1 + left->op_count() + right->op_count();
}

BigInt eval_expression(const ExprNode& node) {
    if (node.is_literal()) return node.literal;
    const BigInt a = eval_expression(*node.left);
    const BigInt b = eval_expression(*node.right);
    switch (node.op) {
        case BinaryOp::kAdd: return a + b;
        case BinaryOp::kSub: return a - b;
        case BinaryOp::kMul: return a * b;
        case BinaryOp::kDiv: return a / b;
    }
    throw std::logic_error("unreachable");
}

namespace {

int clamp_gaussian(Rng& rng, double mean, double std, int lo, int hi) {
    const int draw = static_cast<int>(std::lround(rng.normal(mean, std)));
    return std::clamp(draw, lo, hi);
}

BigInt random_literal(Rng& rng, const GenConfig& config) {
    const int digits = clamp_gaussian(rng, config.digits_mean, config.digits_std, 1, config.max_digits);
    std::string text;
    text.reserve(digits);
    if (digits == 1) {
        text.push_back(static_cast<char>('0' + rng.uniform_int(0, 9)));
    } else {
        text.push_back(static_cast<char>('0' + rng.uniform_int(1, 9)));
        for (int i = 1; i < digits; ++i)
            text.push_back(static_cast<char>('0' + rng.uniform_int(0, 9)));
    }
    return BigInt::from_string(text);
}

std::unique_ptr<ExprNode> build_tree(Rng& rng, const GenConfig& config, int ops) {
    if (ops == 0) return ExprNode::make_literal(random_literal(rng, config));
    const BinaryOp op = static_cast<BinaryOp>(rng.uniform_int(0, 3));
    const int left_ops = static_cast<int>(rng.uniform_int(0, ops - 1));
    auto left = build_tree(rng, config, left_ops);
    auto right = build_tree(rng, config, ops - 1 - left_ops);
    if (op == BinaryOp::kDiv) {
        while (eval_expression(*right).is_zero())
            right = build_tree(rng, config, ops - 1 - left_ops);
    }
    return ExprNode::make_op(op, std::move(left), std::move(right));
}

}  // namespace

std::unique_ptr<ExprNode> gen_expression(const GenConfig& config) {
    Rng rng(config.seed);
    const int ops = clamp_gaussian(rng, config.depth_mean, config.depth_std, 1, config.max_digits);
    return build_tree(rng, config, ops);
}

std::string render_expression(const ExprNode& node) {
    if (node.is_literal()) return node.literal.to_string();
    auto operand = [](const ExprNode& child) {
        const std::string text = render_expression(child);
        return child.is_literal() ? text : "(" + text + ")";
    };
    return operand(*node.left) + " " + op_symbol(node.op) + " " + operand(*node.right);
}

}  // namespace spanattn
