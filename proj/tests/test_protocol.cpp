#include "spanattn/protocol.hpp"

#include <doctest.h>

using namespace spanattn;

namespace {

const std::string kFigTrace =
    "(42 * 56) + (5 * 32) [0]\n"
    "[-1] 42 * 56=42 * (50 + 6)=2100 + 252=2352\n"
    "[-1] So 42 * 56=2352 [1]\n"
    "[0,1] 5 * 32=160 [2]\n"
    "[0,1,2] 2512\n";

}  // namespace

TEST_CASE("partition_context finds the anchored groups of the worked trace") {
    const Vocab& vocab = default_vocab();
    const std::vector<int> tokens = vocab.tokenize(kFigTrace);
    const AnchorTable table = partition_context(tokens, vocab);
    REQUIRE(table.size() == 3);

    const auto lines = line_ranges(tokens);
    REQUIRE(lines.size() == 5);
    // Anchor 0 names the prompt line, 1 the summary line, 2 the next
    // evaluation line; each anchor token sits at its group's end.
    CHECK(table.at(0).start == lines[0].start);
    CHECK(table.at(1).start == lines[2].start);
    CHECK(table.at(2).start == lines[3].start);
    // Ranges do not overlap and each ends at its own anchor token.
    Index prev_end = -1;
    for (const auto& [id, range] : table) {
        CHECK(vocab.is_anchor(tokens[range.end]));
        CHECK(vocab.anchor_id(tokens[range.end]) == id);
        CHECK(range.start > prev_end);
        prev_end = range.end;
    }
}

TEST_CASE("a line without an anchor contributes nothing") {
    const Vocab& vocab = default_vocab();
    CHECK(partition_context(vocab.tokenize("1 + 2=3\n"), vocab).empty());
}

TEST_CASE("duplicate anchor ids are rejected") {
    const Vocab& vocab = default_vocab();
    const auto tokens = vocab.tokenize("1 + 2=3 [0]\n4 + 5=9 [0]\n");
    CHECK_THROWS_AS(partition_context(tokens, vocab), DuplicateAnchorError);
}

TEST_CASE("an anchor away from its group end is rejected") {
    const Vocab& vocab = default_vocab();
    std::vector<int> tokens = vocab.tokenize("1 + 2=3 [0]\n");
    // Slide content in after the anchor but before the newline.
    tokens.insert(tokens.end() - 1, vocab.char_token('7'));
    CHECK_THROWS_AS(partition_context(tokens, vocab), TokenizeError);
}

TEST_CASE("resolve_references unions anchor groups, PREV, and the open line") {
    const Vocab& vocab = default_vocab();
    const std::vector<int> tokens = vocab.tokenize(kFigTrace);
    const AnchorTable table = partition_context(tokens, vocab);
    const auto lines = line_ranges(tokens);

    // Final line referencing [0,1,2] with two tokens already written. Each
    // reference pulls in the anchor's whole line, newline included.
    const Index final_start = lines[4].start;
    SpanRequest request{{Ref::anchor(0), Ref::anchor(1), Ref::anchor(2)}, final_start};
    const auto selected = resolve_references(request, table, lines, final_start + 2);
    std::size_t expected = 0;
    for (int li : {0, 2, 3}) expected += lines[li].end - lines[li].start + 1;
    CHECK(selected.size() == expected + 2);
    for (Index i : selected) CHECK(i < final_start + 2);

    // PREV picks up the entire previous line.
    SpanRequest prev_req{{Ref::prev()}, lines[2].start};
    const auto prev_sel = resolve_references(prev_req, table, lines, lines[2].start);
    CHECK(prev_sel.front() == lines[1].start);
    CHECK(prev_sel.back() == lines[1].end);

    // Range form unions the covered anchors' lines.
    SpanRequest range_req{{Ref::range(0, 2)}, final_start};
    const auto range_sel = resolve_references(range_req, table, lines, final_start);
    CHECK(range_sel.size() == expected);

    SpanRequest unknown{{Ref::anchor(7)}, final_start};
    CHECK_THROWS_AS(resolve_references(unknown, table, lines, final_start), UnknownAnchorError);

    SpanRequest first_line_prev{{Ref::prev()}, 0};
    CHECK_THROWS_AS(resolve_references(first_line_prev, table, lines, 0), MissingPrevLineError);
}

TEST_CASE("sparsity_of follows its definition") {
    CHECK(sparsity_of(8, 20) == doctest::Approx(0.6));
    CHECK(sparsity_of(20, 20) == 0.0);
    CHECK(sparsity_of(1, 20) == doctest::Approx(0.95));
    CHECK_THROWS_AS(sparsity_of(0, 0), DimensionError);
    CHECK_THROWS_AS(sparsity_of(5, 4), DimensionError);
}

TEST_CASE("protocol overhead counts anchor and reference tokens exactly") {
    const Vocab& vocab = default_vocab();
    CHECK(protocol_overhead(vocab.tokenize("1 + 2=3\n"), vocab) == 0.0);

    const std::vector<int> tokens = vocab.tokenize(kFigTrace);
    std::int64_t protocol = 0;
    for (int id : tokens) protocol += vocab.is_protocol(id);
    CHECK(protocol == 10);  // 3 anchors + 7 references
    const double ratio = protocol_overhead(tokens, vocab);
    CHECK(ratio == doctest::Approx(double(protocol) / tokens.size()));
    CHECK(ratio < 0.15);
}

TEST_CASE("doubling content length at fixed anchors roughly halves the overhead") {
    const Vocab& vocab = default_vocab();
    const std::string base = "[0] 11 + 22=33 [1]\n";
    const std::string doubled = "[0] 1111111 + 2222222=3333333 [1]\n";
    const double r1 = protocol_overhead(vocab.tokenize(base), vocab);
    const double r2 = protocol_overhead(vocab.tokenize(doubled), vocab);
    const double total2 = static_cast<double>(vocab.tokenize(doubled).size());
    CHECK(std::abs(r2 - r1 / 2) <= 2.0 / total2);
}
