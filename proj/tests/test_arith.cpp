#include "spanattn/dataset.hpp"
#include "spanattn/expr.hpp"
#include "spanattn/trace.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <memory>
#include <optional>

using namespace spanattn;

namespace {

std::unique_ptr<ExprNode> lit(std::int64_t v) { return ExprNode::make_literal(BigInt(v)); }

std::unique_ptr<ExprNode> op(BinaryOp o, std::unique_ptr<ExprNode> l,
                             std::unique_ptr<ExprNode> r) {
    return ExprNode::make_op(o, std::move(l), std::move(r));
}

void collect_literals(const ExprNode& node, std::vector<BigInt>& out) {
    if (node.is_literal()) {
        out.push_back(node.literal);
        return;
    }
    collect_literals(*node.left, out);
    collect_literals(*node.right, out);
}

// ---- Symbolic re-evaluator for the dependency-sufficiency invariant ------
//
// Rebuilds each line using only the text inside its ground-truth dependency
// ranges (plus the line itself). Facts are "a op b=...=r" statements; the
// task expression is substituted with completed facts and must make the
// line's own operation the next ready one.

struct Fact {
    BigInt a;
    BinaryOp op;
    BigInt b;
    std::optional<BigInt> result;  // absent on partial (split) chain lines
};

BinaryOp parse_op_char(char c) {
    switch (c) {
        case '+': return BinaryOp::kAdd;
        case '-': return BinaryOp::kSub;
        case '*': return BinaryOp::kMul;
        case '/': return BinaryOp::kDiv;
    }
    throw std::invalid_argument("not an operator");
}

// "a op b" with space-separated literal operands.
bool parse_binop_text(const std::string& text, Fact& out) {
    const auto first = text.find(' ');
    if (first == std::string::npos || first + 2 >= text.size()) return false;
    const auto second = text.find(' ', first + 1);
    if (second != first + 2 || text.find(' ', second + 1) != std::string::npos) return false;
    try {
        out.a = BigInt::from_string(text.substr(0, first));
        out.op = parse_op_char(text[first + 1]);
        out.b = BigInt::from_string(text.substr(second + 1));
    } catch (const std::invalid_argument&) {
        return false;
    }
    return true;
}

// Fully-parenthesized infix expression, as render_expression emits.
std::unique_ptr<ExprNode> parse_expression(const std::string& text) {
    // Locate the single depth-0 operator.
    int depth = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '(') ++depth;
        if (text[i] == ')') --depth;
        if (depth == 0 && i > 0 && i + 1 < text.size() && text[i - 1] == ' ' &&
            text[i + 1] == ' ' &&
            (text[i] == '+' || text[i] == '-' || text[i] == '*' || text[i] == '/')) {
            auto strip = [](std::string s) {
                if (!s.empty() && s.front() == '(' && s.back() == ')')
                    s = s.substr(1, s.size() - 2);
                return s;
            };
            return ExprNode::make_op(parse_op_char(text[i]),
                                     parse_expression(strip(text.substr(0, i - 1))),
                                     parse_expression(strip(text.substr(i + 2))));
        }
    }
    return ExprNode::make_literal(BigInt::from_string(text));
}

// Replaces the leftmost ready subtree matching the fact with its result.
bool substitute_fact_once(ExprNode& node, const Fact& fact) {
    if (node.is_literal()) return false;
    if (substitute_fact_once(*node.left, fact)) return true;
    if (substitute_fact_once(*node.right, fact)) return true;
    if (node.left->is_literal() && node.right->is_literal() && node.op == fact.op &&
        node.left->literal == fact.a && node.right->literal == fact.b) {
        node.literal = *fact.result;
        node.left.reset();
        node.right.reset();
        return true;
    }
    return false;
}

ExprNode* find_ready_node(ExprNode* node) {
    if (node->is_literal()) return nullptr;
    if (ExprNode* inner = find_ready_node(node->left.get())) return inner;
    if (ExprNode* inner = find_ready_node(node->right.get())) return inner;
    return node;
}

// Text of one dependency range with the protocol brackets stripped.
std::string range_text(const TokenizedTrace& tokenized, const Vocab& vocab,
                       const TokenRange& range) {
    std::vector<int> content;
    for (Index i = range.start; i <= range.end; ++i) {
        const int id = tokenized.tokens[i];
        if (vocab.is_protocol(id) || id == Vocab::kNewline) continue;
        content.push_back(id);
    }
    std::string text = vocab.detokenize(content);
    while (!text.empty() && text.front() == ' ') text.erase(text.begin());
    while (!text.empty() && text.back() == ' ') text.pop_back();
    return text;
}

// Verifies one trace line from its dependency ranges alone.
void check_line_rederivable(const EvaluationTrace& trace, const TokenizedTrace& tokenized,
                            std::size_t index, const Vocab& vocab) {
    const TraceLine& line = trace.lines[index];
    std::string task;
    std::vector<Fact> facts;
    for (const TokenRange& range : line.dependency_ranges) {
        const std::string text = range_text(tokenized, vocab, range);
        const auto eq = text.find('=');
        if (eq == std::string::npos) {
            task = text;  // the anchored task expression
            continue;
        }
        std::string head = text.substr(0, eq);
        if (head.rfind("So ", 0) == 0) head = head.substr(3);
        Fact fact;
        if (!parse_binop_text(head, fact)) continue;
        try {
            fact.result = BigInt::from_string(text.substr(text.rfind('=') + 1));
        } catch (const std::invalid_argument&) {
            // A split chain line ends mid-reduction; its head still counts.
        }
        facts.push_back(std::move(fact));
    }

    if (line.text.rfind("So ", 0) == 0) {
        // Summary of the previous (chain) line: head and tail must match.
        REQUIRE(facts.size() >= 1);
        const Fact& chain = facts.back();
        REQUIRE(chain.result.has_value());
        const std::string expected = "So " + chain.a.to_string() + " " +
                                     std::string(1, op_symbol(chain.op)) + " " +
                                     chain.b.to_string() + "=" + chain.result->to_string();
        CHECK(line.text == expected);
        return;
    }

    if (task.empty()) {
        // Continuation of a split chain: derivable from the previous chain
        // line alone. Its head names the same operation; the text must be
        // the successor line of the recomputed chain.
        REQUIRE(facts.size() == 1);
        const Fact& head = facts.front();
        REQUIRE(needs_decomposition(head.op, head.a, head.b));
        std::vector<AtomicStep> scratch;
        const auto chain_lines =
            chain_line_texts(decomposition_chain(head.op, head.a, head.b, scratch));
        const std::string prev_text = range_text(tokenized, vocab, line.dependency_ranges.front());
        bool matched = false;
        for (std::size_t i = 0; i + 1 < chain_lines.size(); ++i) {
            if (chain_lines[i] == prev_text) {
                CHECK(line.text == chain_lines[i + 1]);
                matched = true;
                break;
            }
        }
        CHECK(matched);
        return;
    }

    auto tree = parse_expression(task);
    for (const Fact& fact : facts)
        if (fact.result) substitute_fact_once(*tree, fact);

    if (index + 1 == trace.lines.size()) {
        // Answer line: at most the root operation may remain.
        CHECK(tree->op_count() <= 1);
        CHECK(oracles::eval_tree(*tree).to_string() == line.text);
        return;
    }

    // Evaluation line: its operation must be the next ready one, and the
    // full text must re-derive from the operands alone.
    Fact head;
    REQUIRE(parse_binop_text(line.text.substr(0, line.text.find('=')), head));
    ExprNode* ready = find_ready_node(tree.get());
    REQUIRE(ready != nullptr);
    CHECK(ready->left->literal == head.a);
    CHECK(ready->right->literal == head.b);
    CHECK(op_symbol(ready->op) == op_symbol(head.op));

    std::string expected;
    if (needs_decomposition(head.op, head.a, head.b)) {
        std::vector<AtomicStep> scratch;
        expected =
            chain_line_texts(decomposition_chain(head.op, head.a, head.b, scratch)).front();
    } else {
        std::vector<AtomicStep> scratch;
        BigInt result;
        if (head.op == BinaryOp::kDiv && head.a.abs() < head.b.abs())
            result = BigInt(0);
        else if (head.op == BinaryOp::kAdd)
            result = head.a + head.b;
        else if (head.op == BinaryOp::kSub)
            result = head.a - head.b;
        else if (head.op == BinaryOp::kMul)
            result = head.a * head.b;
        else
            result = head.a / head.b;
        expected = head.a.to_string() + " " + op_symbol(head.op) + " " + head.b.to_string() + "=" +
                   result.to_string();
    }
    CHECK(line.text == expected);
}

void check_trace_rederivable(const EvaluationTrace& trace, const Vocab& vocab) {
    const TokenizedTrace tokenized = tokenize_trace(trace, vocab);
    for (std::size_t i = 1; i < trace.lines.size(); ++i)
        check_line_rederivable(trace, tokenized, i, vocab);
}

}  // namespace

TEST_CASE("the worked multiplication example reproduces the published lines") {
    const auto expr = op(BinaryOp::kAdd, op(BinaryOp::kMul, lit(42), lit(56)),
                         op(BinaryOp::kMul, lit(5), lit(32)));
    const EvaluationTrace trace = solve_with_trace(*expr);

    CHECK(trace.expression == "(42 * 56) + (5 * 32)");
    REQUIRE(trace.lines.size() == 5);
    CHECK(trace.lines[0].text == "(42 * 56) + (5 * 32)");
    CHECK(trace.lines[0].anchor == 0);

    CHECK(trace.lines[1].refs == std::vector<Ref>{Ref::prev()});
    CHECK(trace.lines[1].text == "42 * 56=42 * (50 + 6)=2100 + 252=2352");
    CHECK(!trace.lines[1].anchor);

    CHECK(trace.lines[2].refs == std::vector<Ref>{Ref::prev()});
    CHECK(trace.lines[2].text == "So 42 * 56=2352");
    CHECK(trace.lines[2].anchor == 1);

    CHECK(trace.lines[3].refs == std::vector<Ref>{Ref::anchor(0), Ref::anchor(1)});
    CHECK(trace.lines[3].text == "5 * 32=160");
    CHECK(trace.lines[3].anchor == 2);

    CHECK(trace.lines[4].refs ==
          std::vector<Ref>{Ref::anchor(0), Ref::anchor(1), Ref::anchor(2)});
    CHECK(trace.lines[4].text == "2512");
    CHECK(!trace.lines[4].anchor);

    CHECK(trace.answer == BigInt(2512));
    check_trace_rederivable(trace, default_vocab());
}

TEST_CASE("the simple chained example yields 136") {
    const auto expr = op(BinaryOp::kAdd, lit(10), op(BinaryOp::kMul, lit(42), lit(3)));
    const EvaluationTrace trace = solve_with_trace(*expr);
    CHECK(trace.answer == BigInt(136));
    CHECK(trace.lines.back().text == "136");
    // The intermediate 126 appears on an evaluation line.
    bool saw_intermediate = false;
    for (const TraceLine& line : trace.lines)
        saw_intermediate |= line.text.find("126") != std::string::npos;
    CHECK(saw_intermediate);
    CHECK(check_answer(default_vocab().detokenize(tokenize_trace(trace).tokens), BigInt(136)));
}

TEST_CASE("a lone literal needs no evaluation") {
    const EvaluationTrace trace = solve_with_trace(*lit(7));
    REQUIRE(trace.lines.size() == 2);
    CHECK(trace.answer == BigInt(7));
    CHECK(trace.lines[1].text == "7");
}

TEST_CASE("division decomposes through partial quotients") {
    const auto expr = op(BinaryOp::kDiv, lit(2352), lit(56));
    const EvaluationTrace trace = solve_with_trace(*expr);
    REQUIRE(trace.lines.size() == 4);
    CHECK(trace.lines[1].text == "2352 / 56=40 + 112 / 56=40 + 2=42");
    CHECK(trace.lines[2].text == "So 2352 / 56=42");
    CHECK(trace.lines[3].text == "42");
    CHECK(trace.answer == BigInt(42));
    check_trace_rederivable(trace, default_vocab());
}

TEST_CASE("truncating division drops the final remainder") {
    const auto expr = op(BinaryOp::kDiv, lit(2383), lit(56));
    const EvaluationTrace trace = solve_with_trace(*expr);
    CHECK(trace.answer == BigInt(42));
    CHECK(trace.lines[1].text == "2383 / 56=40 + 143 / 56=40 + 2=42");
}

TEST_CASE("negative intermediates flow through decompositions") {
    // (0 - 56) picks up a negative result that then multiplies 42.
    const auto expr = op(BinaryOp::kMul, lit(42), op(BinaryOp::kSub, lit(0), lit(56)));
    const EvaluationTrace trace = solve_with_trace(*expr);
    CHECK(trace.answer == BigInt(-2352));
    CHECK(trace.lines[2].text == "42 * -56=42 * (-50 + -6)=-2100 + -252=-2352");
    CHECK(trace.answer.to_string() == "-2352");
    check_trace_rederivable(trace, default_vocab());

    const auto div_expr = op(BinaryOp::kDiv, op(BinaryOp::kSub, lit(0), lit(2352)), lit(56));
    const EvaluationTrace div_trace = solve_with_trace(*div_expr);
    CHECK(div_trace.answer == BigInt(-42));
    CHECK(div_trace.lines[2].text == "-2352 / 56=-40 + -112 / 56=-40 + -2=-42");
    check_trace_rederivable(div_trace, default_vocab());
}

TEST_CASE("small dividends resolve by comparison") {
    const auto expr = op(BinaryOp::kDiv, lit(112), lit(565));
    const EvaluationTrace trace = solve_with_trace(*expr);
    CHECK(trace.answer == BigInt(0));
    bool saw_compare = false;
    for (const AtomicStep& step : trace.atomic_steps)
        saw_compare |= step.kind == AtomicStep::Kind::kCompare;
    CHECK(saw_compare);
}

TEST_CASE("wide multiplications continue across lines that restate the head") {
    // A 9-part decomposition: 987654321 * 123456789.
    const auto wide = op(BinaryOp::kMul, ExprNode::make_literal(BigInt::from_string("987654321")),
                         ExprNode::make_literal(BigInt::from_string("123456789")));
    const EvaluationTrace trace = solve_with_trace(*wide);
    CHECK(trace.answer == BigInt::from_string("121932631112635269"));

    // Several chain lines, every continuation restating the operation head
    // and referencing only the previous line.
    int chain_lines = 0;
    for (std::size_t i = 1; i + 2 < trace.lines.size(); ++i) {
        const TraceLine& line = trace.lines[i];
        CHECK(line.text.rfind("987654321 * 123456789=", 0) == 0);
        if (i > 1) CHECK(line.refs == std::vector<Ref>{Ref::prev()});
        ++chain_lines;
    }
    CHECK(chain_lines >= 3);
    CHECK(trace.lines[trace.lines.size() - 2].text == "So 987654321 * 123456789=121932631112635269");
    check_trace_rederivable(trace, default_vocab());
}

TEST_CASE("gen_expression is deterministic under its seed") {
    GenConfig config;
    config.seed = 12345;
    const auto a = gen_expression(config);
    const auto b = gen_expression(config);
    CHECK(render_expression(*a) == render_expression(*b));
}

TEST_CASE("sampled depth statistics match the configured gaussian") {
    GenConfig config;
    double total_ops = 0;
    int max_literal_digits = 0;
    const int samples = 10000;
    for (int i = 0; i < samples; ++i) {
        config.seed = 100000 + i;
        const auto expr = gen_expression(config);
        total_ops += expr->op_count();
        std::vector<BigInt> literals;
        collect_literals(*expr, literals);
        for (const BigInt& value : literals)
            max_literal_digits = std::max(max_literal_digits, value.digit_count());
    }
    CHECK(total_ops / samples == doctest::Approx(5.0).epsilon(0.06));
    CHECK(max_literal_digits <= 10);
}

TEST_CASE("digit cap is honored when lowered") {
    GenConfig config;
    config.max_digits = 3;
    for (int i = 0; i < 200; ++i) {
        config.seed = 777 + i;
        std::vector<BigInt> literals;
        collect_literals(*gen_expression(config), literals);
        for (const BigInt& value : literals) CHECK(value.digit_count() <= 3);
    }
}

TEST_CASE("trace answers agree with direct tree evaluation on seeded expressions") {
    GenConfig config;
    int checked = 0;
    for (int i = 0; i < 300; ++i) {
        config.seed = 50000 + i;
        const auto expr = gen_expression(config);
        const EvaluationTrace trace = solve_with_trace(*expr);
        CHECK(trace.answer == oracles::eval_tree(*expr));
        CHECK(check_answer(trace.lines.back().text, trace.answer));
        ++checked;
    }
    CHECK(checked == 300);
}

TEST_CASE("traces re-derive from their dependency ranges alone") {
    GenConfig config;
    for (int i = 0; i < 60; ++i) {
        config.seed = 60000 + i;
        const EvaluationTrace trace = solve_with_trace(*gen_expression(config));
        check_trace_rederivable(trace, default_vocab());
    }
}

TEST_CASE("no atomic multiplication or division pairs two multi-digit operands") {
    GenConfig config;
    for (int i = 0; i < 200; ++i) {
        config.seed = 70000 + i;
        const EvaluationTrace trace = solve_with_trace(*gen_expression(config));
        for (const AtomicStep& step : trace.atomic_steps) {
            if (step.kind != AtomicStep::Kind::kMul && step.kind != AtomicStep::Kind::kDiv)
                continue;
            const bool both_wide =
                step.a.significant_digits() >= 2 && step.b.significant_digits() >= 2;
            CHECK(!both_wide);
        }
    }
}

TEST_CASE("anchor ids are dense and increasing") {
    GenConfig config;
    for (int i = 0; i < 100; ++i) {
        config.seed = 80000 + i;
        const EvaluationTrace trace = solve_with_trace(*gen_expression(config));
        int expected = 0;
        for (const TraceLine& line : trace.lines)
            if (line.anchor) CHECK(*line.anchor == expected++);
        CHECK(expected >= 1);
    }
}

TEST_CASE("check_answer parses the last space-separated term") {
    CHECK(check_answer("10 + 126\n136", BigInt(136)));
    CHECK(check_answer("... = 136", BigInt(136)));
    CHECK(!check_answer("abc", BigInt(5)));
    CHECK(!check_answer("", BigInt(5)));
    CHECK(check_answer("2512", BigInt(2512)));
    CHECK(!check_answer("2512", BigInt(2511)));
}

TEST_CASE("dataset generation bins evenly and round-trips through JSONL") {
    DatasetConfig config;
    config.count = 24;
    config.bin_width = 256;
    config.max_output_tokens = 1536;
    config.gen.seed = 9;
    config.max_attempts = 20000;
    const Dataset dataset = generate_dataset(config);
    CHECK(dataset.examples.size() <= 24);
    CHECK(dataset.bins.size() == 6);

    std::ostringstream out;
    write_dataset_jsonl(out, dataset);
    std::istringstream in(out.str());
    const auto readback = read_dataset_jsonl(in);
    REQUIRE(readback.size() == dataset.examples.size());
    for (std::size_t i = 0; i < readback.size(); ++i) {
        CHECK(readback[i].trace.expression == dataset.examples[i].trace.expression);
        CHECK(readback[i].trace.answer == dataset.examples[i].trace.answer);
        CHECK(readback[i].bin == dataset.examples[i].bin);
        REQUIRE(readback[i].trace.lines.size() == dataset.examples[i].trace.lines.size());
        for (std::size_t l = 0; l < readback[i].trace.lines.size(); ++l) {
            CHECK(readback[i].trace.lines[l].text == dataset.examples[i].trace.lines[l].text);
            CHECK(readback[i].trace.lines[l].refs == dataset.examples[i].trace.lines[l].refs);
            CHECK(readback[i].trace.lines[l].dependency_ranges ==
                  dataset.examples[i].trace.lines[l].dependency_ranges);
        }
    }

    // Tokenized traces round-trip through the text form.
    const Vocab& vocab = default_vocab();
    for (const DatasetExample& example : dataset.examples) {
        const auto tokens = tokenize_trace(example.trace, vocab).tokens;
        CHECK(vocab.tokenize(vocab.detokenize(tokens)) == tokens);
    }
}
