#include "spanattn/protocol.hpp"

#include <algorithm>
#include <string>

namespace spanattn {

std::vector<TokenRange> line_ranges(const std::vector<int>& tokens) {
    std::vector<TokenRange> lines;
    Index start = 0;
    for (Index i = 0; i < static_cast<Index>(tokens.size()); ++i) {
        if (tokens[i] == Vocab::kNewline) {
            lines.push_back({start, i});
            start = i + 1;
        }
    }
    if (start < static_cast<Index>(tokens.size()))
        lines.push_back({start, static_cast<Index>(tokens.size()) - 1});
    return lines;
}

AnchorTable partition_context(const std::vector<int>& tokens, const Vocab& vocab) {
    AnchorTable table;
    for (const TokenRange& line : line_ranges(tokens)) {
        Index last_content = line.end;
        if (last_content >= line.start && tokens[last_content] == Vocab::kNewline) --last_content;
        for (Index i = line.start; i <= last_content; ++i) {
            if (!vocab.is_anchor(tokens[i])) continue;
            if (i != last_content)
                throw TokenizeError("anchor token not at the end of its group (position " +
                                    std::to_string(i) + ")");
            const int id = vocab.anchor_id(tokens[i]);
            if (table.count(id))
                throw DuplicateAnchorError("anchor id " + std::to_string(id) + " defined twice");
            table[id] = {line.start, i};
        }
    }
    return table;
}

std::vector<Index> resolve_references(const SpanRequest& request, const AnchorTable& table,
                                      const std::vector<TokenRange>& lines, Index position) {
    std::vector<Index> selected;
    auto add_range = [&selected](const TokenRange& range) {
        for (Index i = range.start; i <= range.end; ++i) selected.push_back(i);
    };
    auto add_anchor = [&](int id) {
        const auto it = table.find(id);
        if (it == table.end())
            throw UnknownAnchorError("reference to undefined anchor " + std::to_string(id));
        // A reference selects the whole line the group lives on, so the
        // line's terminating newline travels with it.
        for (const TokenRange& line : lines) {
            if (line.start <= it->second.start && it->second.end <= line.end) {
                add_range(line);
                return;
            }
        }
        add_range(it->second);
    };

    for (const Ref& ref : request.refs) {
        switch (ref.kind) {
            case Ref::Kind::kAnchor:
                add_anchor(ref.a);
                break;
            case Ref::Kind::kRange:
                for (int k = ref.a; k <= ref.b; ++k) add_anchor(k);
                break;
            case Ref::Kind::kPrev: {
                // The line preceding the one that starts at current_line_start.
                const TokenRange* prev = nullptr;
                for (const TokenRange& line : lines)
                    if (line.end < request.current_line_start &&
                        (!prev || line.end > prev->end))
                        prev = &line;
                if (!prev) throw MissingPrevLineError("PREV reference on the first line");
                add_range(*prev);
                break;
            }
        }
    }
    for (Index i = request.current_line_start; i < position; ++i) selected.push_back(i);

    std::sort(selected.begin(), selected.end());
    selected.erase(std::unique(selected.begin(), selected.end()), selected.end());
    if (selected.empty()) throw EmptySpanError("resolved span is empty");
    return selected;
}

double sparsity_of(std::int64_t selected_count, std::int64_t position) {
    if (position <= 0) throw DimensionError("sparsity undefined at position 0");
    if (selected_count < 0 || selected_count > position)
        throw DimensionError("selected count out of range");
    return static_cast<double>(position - selected_count) / static_cast<double>(position);
}

double protocol_overhead(const std::vector<int>& tokens, const Vocab& vocab) {
    if (tokens.empty()) return 0.0;
    std::int64_t protocol = 0;
    for (int id : tokens) protocol += vocab.is_protocol(id);
    return static_cast<double>(protocol) / static_cast<double>(tokens.size());
}

}  // namespace spanattn
