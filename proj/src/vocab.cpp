#include "spanattn/vocab.hpp"

#include <array>

namespace spanattn {

namespace {
constexpr std::array<char, 7> kOperators = {'+', '-', '*', '/', '(', ')', '='};
}

int Vocab::size() const {
    return kRangeBase + (kMaxAnchor + 1) * (kMaxAnchor + 2) / 2;
}

int Vocab::char_token(char c) const {
    if (c >= '0' && c <= '9') return c - '0';
    for (std::size_t i = 0; i < kOperators.size(); ++i)
        if (kOperators[i] == c) return 10 + static_cast<int>(i);
    if (c == ' ') return kSpace;
    if (c == '\n') return kNewline;
    throw TokenizeError(std::string("character outside the alphabet: '") + c + "'");
}

int Vocab::anchor_token(int k) const {
    if (k < 0 || k > kMaxAnchor) throw TokenizeError("anchor id out of range");
    return kAnchorBase + k;
}

int Vocab::ref_token(int k) const {
    if (k < 0 || k > kMaxAnchor) throw TokenizeError("reference id out of range");
    return kRefBase + k;
}

int Vocab::ref_range_token(int a, int b) const {
    if (a < 0 || b < a || b > kMaxAnchor) throw TokenizeError("reference range out of bounds");
    // Pairs (a, b) with a <= b, enumerated by first element.
    int offset = 0;
    for (int i = 0; i < a; ++i) offset += kMaxAnchor + 1 - i;
    return kRangeBase + offset + (b - a);
}

int Vocab::anchor_id(int id) const {
    if (!is_anchor(id)) throw TokenizeError("not an anchor token");
    return id - kAnchorBase;
}

int Vocab::ref_anchor_id(int id) const {
    if (id < kRefBase || id >= kRefPrev) throw TokenizeError("not a plain reference token");
    return id - kRefBase;
}

std::pair<int, int> Vocab::ref_range_bounds(int id) const {
    if (!is_ref_range(id)) throw TokenizeError("not a range reference token");
    int rest = id - kRangeBase;
    for (int a = 0; a <= kMaxAnchor; ++a) {
        const int width = kMaxAnchor + 1 - a;
        if (rest < width) return {a, a + rest};
        rest -= width;
    }
    throw TokenizeError("corrupt range token");
}

std::string Vocab::token_text(int id) const {
    if (id >= 0 && id <= 9) return std::string(1, static_cast<char>('0' + id));
    if (id >= 10 && id < 17) return std::string(1, kOperators[id - 10]);
    if (id == kSpace) return " ";
    if (id == kNewline) return "\n";
    if (id == kWordSo) return "So";
    if (is_anchor(id)) return "[" + std::to_string(anchor_id(id)) + "]";
    if (id == kRefPrev) return "[-1]";
    if (is_ref_range(id)) {
        const auto [a, b] = ref_range_bounds(id);
        return "[" + std::to_string(a) + "-" + std::to_string(b) + "]";
    }
    if (is_ref(id)) return "[" + std::to_string(ref_anchor_id(id)) + "]";
    throw TokenizeError("unknown token id " + std::to_string(id));
}

std::vector<int> Vocab::tokenize_content(const std::string& text) const {
    std::vector<int> tokens;
    tokens.reserve(text.size());
    for (std::size_t i = 0; i < text.size();) {
        if (text[i] == 'S' && i + 1 < text.size() && text[i + 1] == 'o' &&
            (i + 2 == text.size() || text[i + 2] == ' ' || text[i + 2] == '\n')) {
            tokens.push_back(kWordSo);
            i += 2;
            continue;
        }
        tokens.push_back(char_token(text[i]));
        ++i;
    }
    return tokens;
}

namespace {

// Parses "a", "-1", or "a-b" from a bracket-group item.
struct RefItem {
    enum Kind { kPlain, kPrev, kRange } kind;
    int a = 0;
    int b = 0;
};

RefItem parse_ref_item(const std::string& item) {
    if (item == "-1") return {RefItem::kPrev, 0, 0};
    const auto dash = item.find('-', 1);
    try {
        if (dash == std::string::npos) return {RefItem::kPlain, std::stoi(item), 0};
        return {RefItem::kRange, std::stoi(item.substr(0, dash)), std::stoi(item.substr(dash + 1))};
    } catch (const std::exception&) {
        throw TokenizeError("malformed reference item '" + item + "'");
    }
}

}  // namespace

std::vector<int> Vocab::tokenize(const std::string& text) const {
    std::vector<int> tokens;
    std::size_t line_start = 0;
    while (line_start <= text.size()) {
        std::size_t line_end = text.find('\n', line_start);
        const bool has_newline = line_end != std::string::npos;
        if (!has_newline) line_end = text.size();
        std::string line = text.substr(line_start, line_end - line_start);

        // Leading bracket groups are references.
        std::size_t pos = 0;
        while (pos < line.size() && line[pos] == '[') {
            const auto close = line.find(']', pos);
            if (close == std::string::npos) throw TokenizeError("unterminated reference group");
            std::string group = line.substr(pos + 1, close - pos - 1);
            std::size_t item_start = 0;
            while (item_start <= group.size()) {
                auto comma = group.find(',', item_start);
                if (comma == std::string::npos) comma = group.size();
                const RefItem item = parse_ref_item(group.substr(item_start, comma - item_start));
                switch (item.kind) {
                    case RefItem::kPlain: tokens.push_back(ref_token(item.a)); break;
                    case RefItem::kPrev: tokens.push_back(kRefPrev); break;
                    case RefItem::kRange: tokens.push_back(ref_range_token(item.a, item.b)); break;
                }
                item_start = comma + 1;
            }
            pos = close + 1;
        }

        // A trailing " [k]" group is the line's anchor.
        std::string content = line.substr(pos);
        int anchor = -1;
        if (!content.empty() && content.back() == ']') {
            const auto open = content.rfind('[');
            if (open != std::string::npos && open > 0 && content[open - 1] == ' ') {
                const std::string id_text = content.substr(open + 1, content.size() - open - 2);
                bool numeric = !id_text.empty();
                for (char c : id_text) numeric &= c >= '0' && c <= '9';
                if (!numeric) throw TokenizeError("malformed anchor group '" + content + "'");
                anchor = std::stoi(id_text);
                content = content.substr(0, open - 1);  // drop " [k]"
            }
        }
        if (content.find('[') != std::string::npos || content.find(']') != std::string::npos)
            throw TokenizeError("stray bracket inside line content");

        const std::vector<int> body = tokenize_content(content);
        tokens.insert(tokens.end(), body.begin(), body.end());
        if (anchor >= 0) {
            tokens.push_back(kSpace);
            tokens.push_back(anchor_token(anchor));
        }
        if (has_newline) tokens.push_back(kNewline);
        line_start = line_end + 1;
        if (!has_newline) break;
    }
    return tokens;
}

std::string Vocab::detokenize(const std::vector<int>& tokens) const {
    std::string out;
    for (std::size_t i = 0; i < tokens.size();) {
        if (is_ref(tokens[i])) {
            // Consecutive reference tokens render as one comma-joined group.
            out.push_back('[');
            bool first = true;
            while (i < tokens.size() && is_ref(tokens[i])) {
                if (!first) out.push_back(',');
                const std::string text = token_text(tokens[i]);
                out += text.substr(1, text.size() - 2);
                first = false;
                ++i;
            }
            out.push_back(']');
            continue;
        }
        out += token_text(tokens[i]);
        ++i;
    }
    return out;
}

const Vocab& default_vocab() {
    static const Vocab vocab;
    return vocab;
}

}  // namespace spanattn
