#pragma once

#include "spanattn/bigint.hpp"
#include "spanattn/expr.hpp"
#include "spanattn/protocol.hpp"
#include "spanattn/vocab.hpp"

#include <optional>
#include <string>
#include <vector>

namespace spanattn {

// One arithmetic operation actually carried out while building a trace.
// Multiplication/division steps never pair two operands of two or more
// significant digits; wider products go through place-value decomposition.
struct AtomicStep {
    enum class Kind { kAdd, kSub, kMul, kDiv, kCompare };
    Kind kind;
    BigInt a;
    BigInt b;
    BigInt result;
};

// One line of a solution trace. `text` is the content only; references and
// the anchor are separate fields and are joined in during tokenization.
struct TraceLine {
    std::vector<Ref> refs;
    std::string text;
    std::optional<int> anchor;
    std::vector<TokenRange> dependency_ranges;  // ground-truth token ranges
};

// Annotated multi-line solution: line 0 is the prompt (the expression,
// anchored as group 0), each evaluation line carries its references and an
// anchor, and the last line states the answer.
struct EvaluationTrace {
    std::string expression;
    std::vector<TraceLine> lines;
    BigInt answer;
    std::vector<AtomicStep> atomic_steps;
};

struct TokenizedTrace {
    std::vector<int> tokens;
    std::vector<TokenRange> lines;  // one per trace line, newline included
    AnchorTable anchors;
};

// Builds the step-by-step solution with ground-truth dependencies. Ready
// operations (both operands literal) are evaluated leftmost-innermost; a
// multiplication or division whose operands both have >= 2 significant
// digits is decomposed by splitting one operand by place value.
EvaluationTrace solve_with_trace(const ExprNode& expr, const Vocab& vocab = default_vocab());

TokenizedTrace tokenize_trace(const EvaluationTrace& trace, const Vocab& vocab = default_vocab());

// Generated tokens = everything after the prompt line.
Index output_token_count(const TokenizedTrace& tokenized);

bool needs_decomposition(BinaryOp op, const BigInt& a, const BigInt& b);

// Place-value decomposition chain for one operation, rendered as the "="
// separated segments of a trace line. Appends the arithmetic it performs to
// `steps`.
struct DecompositionChain {
    std::vector<std::string> segments;
    BigInt result;
};
DecompositionChain decomposition_chain(BinaryOp op, const BigInt& a, const BigInt& b,
                                       std::vector<AtomicStep>& steps);

// Chains too long for one line continue on follow-up lines that restate the
// head segment, each referencing only its predecessor. A short chain such as
// the worked 2-digit example stays on a single line.
std::vector<std::string> chain_line_texts(const DecompositionChain& chain);

// Splits the output by whitespace, parses the last term as an integer, and
// compares. Unparsable output is simply incorrect.
bool check_answer(const std::string& output_text, const BigInt& truth);

}  // namespace spanattn
