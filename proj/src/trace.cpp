#include "spanattn/trace.hpp"

#include <sstream>
#include <stdexcept>

namespace spanattn {

namespace {

BigInt pow10(int exponent) { return BigInt::shifted(BigInt(1), exponent); }

// Nonzero place-value parts of |value|, most significant first.
std::vector<BigInt> place_value_parts(const BigInt& value) {
    std::vector<BigInt> parts;
    const BigInt mag = value.abs();
    for (int place = mag.digit_count() - 1; place >= 0; --place) {
        const int digit = mag.digit_at(place);
        if (digit) parts.push_back(BigInt(digit) * pow10(place));
    }
    return parts;
}

std::string binop_text(const BigInt& a, BinaryOp op, const BigInt& b) {
    return a.to_string() + " " + op_symbol(op) + " " + b.to_string();
}

// Segments showing the left-to-right summation of `terms`, ending with the
// total. Appends the additions performed to `steps`.
std::vector<std::string> sum_reduction_segments(const std::vector<BigInt>& terms,
                                                std::vector<AtomicStep>& steps) {
    std::vector<std::string> segments;
    BigInt acc = terms.front();
    for (std::size_t i = 1; i < terms.size(); ++i) {
        const BigInt next = acc + terms[i];
        steps.push_back({AtomicStep::Kind::kAdd, acc, terms[i], next});
        std::string segment = next.to_string();
        for (std::size_t j = i + 1; j < terms.size(); ++j)
            segment += " + " + terms[j].to_string();
        segments.push_back(std::move(segment));
        acc = next;
    }
    return segments;
}

std::string join_terms(const std::vector<BigInt>& terms) {
    std::string out;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (i) out += " + ";
        out += terms[i].to_string();
    }
    return out;
}

BigInt apply_direct(BinaryOp op, const BigInt& a, const BigInt& b,
                    std::vector<AtomicStep>& steps) {
    switch (op) {
        case BinaryOp::kAdd: {
            const BigInt r = a + b;
            steps.push_back({AtomicStep::Kind::kAdd, a, b, r});
            return r;
        }
        case BinaryOp::kSub: {
            const BigInt r = a - b;
            steps.push_back({AtomicStep::Kind::kSub, a, b, r});
            return r;
        }
        case BinaryOp::kMul: {
            const BigInt r = a * b;
            steps.push_back({AtomicStep::Kind::kMul, a, b, r});
            return r;
        }
        case BinaryOp::kDiv: {
            if (a.abs() < b.abs()) {
                // Resolved by magnitude comparison, not a division.
                steps.push_back({AtomicStep::Kind::kCompare, a, b, BigInt(0)});
                return BigInt(0);
            }
            const BigInt r = a / b;
            steps.push_back({AtomicStep::Kind::kDiv, a, b, r});
            return r;
        }
    }
    throw std::logic_error("unreachable");
}

DecompositionChain multiplication_chain(const BigInt& a, const BigInt& b,
                                        std::vector<AtomicStep>& steps) {
    DecompositionChain chain;
    chain.segments.push_back(binop_text(a, BinaryOp::kMul, b));

    // Split the right operand by place value; parts carry its sign.
    std::vector<BigInt> parts = place_value_parts(b);
    if (b.negative())
        for (BigInt& part : parts) part = -part;

    std::string expansion = a.to_string() + " * (";
    expansion += join_terms(parts);
    expansion += ")";
    chain.segments.push_back(std::move(expansion));

    std::vector<BigInt> terms;
    terms.reserve(parts.size());
    for (const BigInt& part : parts) {
        const BigInt product = a * part;
        steps.push_back({AtomicStep::Kind::kMul, a, part, product});
        terms.push_back(product);
    }
    chain.segments.push_back(join_terms(terms));

    auto sums = sum_reduction_segments(terms, steps);
    chain.segments.insert(chain.segments.end(), sums.begin(), sums.end());
    chain.result = a * b;
    return chain;
}

DecompositionChain division_chain(const BigInt& a, const BigInt& b,
                                  std::vector<AtomicStep>& steps) {
    DecompositionChain chain;
    chain.segments.push_back(binop_text(a, BinaryOp::kDiv, b));

    const BigInt mag_a = a.abs();
    const BigInt mag_b = b.abs();
    const bool negative = a.negative() != b.negative();
    const BigInt quotient = a / b;

    // Partial quotients: extract one quotient digit (times its place) at a
    // time, leaving the remainder still divided by b.
    std::vector<BigInt> parts = place_value_parts(quotient);
    std::vector<BigInt> signed_parts = parts;
    if (negative)
        for (BigInt& part : signed_parts) part = -part;

    BigInt remainder = mag_a;
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
        const BigInt consumed = mag_b * parts[i];
        steps.push_back({AtomicStep::Kind::kMul, mag_b, parts[i], consumed});
        const BigInt next = remainder - consumed;
        steps.push_back({AtomicStep::Kind::kSub, remainder, consumed, next});
        remainder = next;

        std::string segment;
        for (std::size_t j = 0; j <= i; ++j) segment += signed_parts[j].to_string() + " + ";
        const BigInt shown = a.negative() ? -remainder : remainder;
        segment += shown.to_string() + " / " + b.to_string();
        chain.segments.push_back(std::move(segment));
    }
    {
        // The last extracted digit consumes the final multiple of b; any
        // leftover remainder is truncated away.
        const BigInt consumed = mag_b * parts.back();
        steps.push_back({AtomicStep::Kind::kMul, mag_b, parts.back(), consumed});
        steps.push_back({AtomicStep::Kind::kSub, remainder, consumed, remainder - consumed});
    }
    if (parts.size() >= 2) {
        chain.segments.push_back(join_terms(signed_parts));
        auto sums = sum_reduction_segments(signed_parts, steps);
        chain.segments.insert(chain.segments.end(), sums.begin(), sums.end());
    } else {
        chain.segments.push_back(signed_parts.front().to_string());
    }
    chain.result = quotient;
    return chain;
}

ExprNode* find_ready(ExprNode* node) {
    if (node->is_literal()) return nullptr;
    if (ExprNode* inner = find_ready(node->left.get())) return inner;
    if (ExprNode* inner = find_ready(node->right.get())) return inner;
    return node;  // both children are literals
}

}  // namespace

bool needs_decomposition(BinaryOp op, const BigInt& a, const BigInt& b) {
    if (op != BinaryOp::kMul && op != BinaryOp::kDiv) return false;
    if (a.significant_digits() < 2 || b.significant_digits() < 2) return false;
    if (op == BinaryOp::kDiv && a.abs() < b.abs()) return false;
    return true;
}

DecompositionChain decomposition_chain(BinaryOp op, const BigInt& a, const BigInt& b,
                                       std::vector<AtomicStep>& steps) {
    if (op == BinaryOp::kMul) return multiplication_chain(a, b, steps);
    if (op == BinaryOp::kDiv) return division_chain(a, b, steps);
    throw std::logic_error("only * and / decompose");
}

std::vector<std::string> chain_line_texts(const DecompositionChain& chain) {
    constexpr std::size_t kLineBudget = 120;  // characters per chain line
    std::vector<std::string> lines;
    std::string current = chain.segments.front();
    int appended = 0;
    for (std::size_t i = 1; i < chain.segments.size(); ++i) {
        if (appended > 0 && current.size() + 1 + chain.segments[i].size() > kLineBudget) {
            lines.push_back(std::move(current));
            current = chain.segments.front();
            appended = 0;
        }
        current += "=" + chain.segments[i];
        ++appended;
    }
    lines.push_back(std::move(current));
    return lines;
}

EvaluationTrace solve_with_trace(const ExprNode& expr, const Vocab& vocab) {
    EvaluationTrace trace;
    trace.expression = render_expression(expr);
    trace.lines.push_back({{}, trace.expression, 0, {}});

    std::unique_ptr<ExprNode> work = expr.clone();
    int next_anchor = 1;
    std::vector<int> completed;
    bool first_content_line = true;

    auto task_refs = [&completed]() {
        std::vector<Ref> refs{Ref::anchor(0)};
        for (int k : completed) refs.push_back(Ref::anchor(k));
        return refs;
    };

    for (;;) {
        ExprNode* ready = work->is_literal() ? nullptr : find_ready(work.get());
        if (!ready) break;
        const BigInt a = ready->left->literal;
        const BigInt b = ready->right->literal;
        const BinaryOp op = ready->op;
        const bool decompose = needs_decomposition(op, a, b);
        if (ready == work.get() && !decompose) break;  // folded into the answer line

        if (next_anchor > Vocab::kMaxAnchor)
            throw std::runtime_error("expression needs more anchors than the vocabulary has");

        BigInt result;
        if (decompose) {
            DecompositionChain chain = decomposition_chain(op, a, b, trace.atomic_steps);
            result = chain.result;

            bool first_chain_line = true;
            for (std::string& text : chain_line_texts(chain)) {
                TraceLine chain_line;
                chain_line.refs = first_chain_line && !first_content_line
                                      ? task_refs()
                                      : std::vector<Ref>{Ref::prev()};
                chain_line.text = std::move(text);
                trace.lines.push_back(std::move(chain_line));
                first_chain_line = false;
            }

            TraceLine summary;
            summary.refs = {Ref::prev()};
            summary.text = "So " + binop_text(a, op, b) + "=" + result.to_string();
            summary.anchor = next_anchor;
            trace.lines.push_back(std::move(summary));
        } else {
            result = apply_direct(op, a, b, trace.atomic_steps);
            TraceLine line;
            line.refs = task_refs();
            line.text = binop_text(a, op, b) + "=" + result.to_string();
            line.anchor = next_anchor;
            trace.lines.push_back(std::move(line));
        }
        completed.push_back(next_anchor++);
        ready->literal = result;
        ready->left.reset();
        ready->right.reset();
        first_content_line = false;
    }

    if (work->is_literal()) {
        trace.answer = work->literal;
    } else {
        trace.answer =
            apply_direct(work->op, work->left->literal, work->right->literal, trace.atomic_steps);
    }
    TraceLine final_line;
    final_line.refs = task_refs();
    final_line.text = trace.answer.to_string();
    trace.lines.push_back(std::move(final_line));

    // Ground-truth dependency ranges come from the tokenized layout.
    TokenizedTrace tokenized = tokenize_trace(trace, vocab);
    for (std::size_t i = 1; i < trace.lines.size(); ++i) {
        for (const Ref& ref : trace.lines[i].refs) {
            switch (ref.kind) {
                case Ref::Kind::kAnchor:
                    trace.lines[i].dependency_ranges.push_back(tokenized.anchors.at(ref.a));
                    break;
                case Ref::Kind::kRange:
                    for (int k = ref.a; k <= ref.b; ++k)
                        trace.lines[i].dependency_ranges.push_back(tokenized.anchors.at(k));
                    break;
                case Ref::Kind::kPrev:
                    trace.lines[i].dependency_ranges.push_back(tokenized.lines[i - 1]);
                    break;
            }
        }
    }
    return trace;
}

TokenizedTrace tokenize_trace(const EvaluationTrace& trace, const Vocab& vocab) {
    TokenizedTrace out;
    for (const TraceLine& line : trace.lines) {
        const Index start = static_cast<Index>(out.tokens.size());
        for (const Ref& ref : line.refs) {
            switch (ref.kind) {
                case Ref::Kind::kAnchor: out.tokens.push_back(vocab.ref_token(ref.a)); break;
                case Ref::Kind::kPrev: out.tokens.push_back(vocab.ref_prev_token()); break;
                case Ref::Kind::kRange:
                    out.tokens.push_back(vocab.ref_range_token(ref.a, ref.b));
                    break;
            }
        }
        if (!line.refs.empty()) out.tokens.push_back(Vocab::kSpace);
        const std::vector<int> body = vocab.tokenize_content(line.text);
        out.tokens.insert(out.tokens.end(), body.begin(), body.end());
        if (line.anchor) {
            out.tokens.push_back(Vocab::kSpace);
            out.tokens.push_back(vocab.anchor_token(*line.anchor));
            out.anchors[*line.anchor] = {start, static_cast<Index>(out.tokens.size()) - 1};
        }
        out.tokens.push_back(Vocab::kNewline);
        out.lines.push_back({start, static_cast<Index>(out.tokens.size()) - 1});
    }
    return out;
}

Index output_token_count(const TokenizedTrace& tokenized) {
    if (tokenized.lines.empty()) return 0;
    const TokenRange& prompt = tokenized.lines.front();
    return static_cast<Index>(tokenized.tokens.size()) - (prompt.end - prompt.start + 1);
}

bool check_answer(const std::string& output_text, const BigInt& truth) {
    std::istringstream stream(output_text);
    std::string term;
    std::string last;
    while (stream >> term) last = term;
    if (last.empty()) return false;
    try {
        return BigInt::from_string(last) == truth;
    } catch (const std::invalid_argument&) {
        return false;
    }
}

}  // namespace spanattn
