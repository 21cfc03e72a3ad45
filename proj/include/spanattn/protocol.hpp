#pragma once

#include "spanattn/types.hpp"
#include "spanattn/vocab.hpp"

#include <map>
#include <vector>

namespace spanattn {

// One reference in a span request: a single anchor, the previous line, or a
// contiguous range of anchors.
struct Ref {
    enum class Kind { kAnchor, kPrev, kRange };
    Kind kind = Kind::kAnchor;
    int a = 0;
    int b = 0;

    static Ref anchor(int k) { return {Kind::kAnchor, k, k}; }
    static Ref prev() { return {Kind::kPrev, 0, 0}; }
    static Ref range(int a, int b) { return {Kind::kRange, a, b}; }
};

inline bool operator==(const Ref& x, const Ref& y) {
    return x.kind == y.kind && x.a == y.a && x.b == y.b;
}

// Inclusive token range [start, end].
struct TokenRange {
    Index start = 0;
    Index end = 0;
};

inline bool operator==(const TokenRange& x, const TokenRange& y) {
    return x.start == y.start && x.end == y.end;
}

// Maps an anchor id to the contiguous token range it names. The anchor token
// itself sits at the range's end.
using AnchorTable = std::map<int, TokenRange>;

struct SpanRequest {
    std::vector<Ref> refs;
    Index current_line_start = 0;
};

// Scans a token stream for newline-terminated groups whose last token is an
// anchor, and records each anchor's range. Throws DuplicateAnchorError on a
// reused id and TokenizeError if an anchor appears mid-line.
AnchorTable partition_context(const std::vector<int>& tokens, const Vocab& vocab);

// Inclusive ranges of the newline-terminated lines of a token stream (the
// terminating newline belongs to its line).
std::vector<TokenRange> line_ranges(const std::vector<int>& tokens);

// Union of the referenced anchor groups (anchor tokens included), PREV = the
// entire previous line, plus the in-progress current line tokens in
// [current_line_start, position). Sorted, duplicate-free, never empty.
std::vector<Index> resolve_references(const SpanRequest& request, const AnchorTable& table,
                                      const std::vector<TokenRange>& lines, Index position);

// Ignored tokens divided by total context tokens at a generation step.
double sparsity_of(std::int64_t selected_count, std::int64_t position);

// Fraction of anchor + reference tokens in a token stream.
double protocol_overhead(const std::vector<int>& tokens, const Vocab& vocab);

}  // namespace spanattn
