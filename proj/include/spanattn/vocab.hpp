#pragma once

#include "spanattn/types.hpp"

#include <string>
#include <vector>

namespace spanattn {

// Closed token alphabet: digits, arithmetic operators, space, newline, the
// word "So", plus the protocol tokens. Every anchor and every individual
// reference is a single token; renders as bracketed text ("[1]", "[-1]",
// "[0,2]", "[3-5]") and round-trips through tokenize/detokenize.
//
// Layout of the id space:
//   0..9    digits            10..16  + - * / ( ) =
//   17      space             18      newline
//   19      word "So"
//   20..32  ANCHOR(0..12)     33..45  REF(0..12)
//   46      REF_PREV          47..137 REF_RANGE(a,b), 0 <= a <= b <= 12
class Vocab {
public:
    static constexpr int kMaxAnchor = 12;

    static constexpr int kSpace = 17;
    static constexpr int kNewline = 18;
    static constexpr int kWordSo = 19;
    static constexpr int kAnchorBase = 20;
    static constexpr int kRefBase = kAnchorBase + kMaxAnchor + 1;
    static constexpr int kRefPrev = kRefBase + kMaxAnchor + 1;
    static constexpr int kRangeBase = kRefPrev + 1;

    int size() const;

    int char_token(char c) const;       // digits, operators, space, newline
    int anchor_token(int k) const;
    int ref_token(int k) const;
    int ref_prev_token() const { return kRefPrev; }
    int ref_range_token(int a, int b) const;

    bool is_anchor(int id) const { return id >= kAnchorBase && id < kRefBase; }
    bool is_ref(int id) const { return id >= kRefBase && id < size(); }
    bool is_protocol(int id) const { return is_anchor(id) || is_ref(id); }
    int anchor_id(int id) const;                 // id of an ANCHOR token
    int ref_anchor_id(int id) const;             // id of a plain REF token
    bool is_ref_prev(int id) const { return id == kRefPrev; }
    bool is_ref_range(int id) const { return id >= kRangeBase && id < size(); }
    std::pair<int, int> ref_range_bounds(int id) const;

    // Content text: characters from the closed alphabet plus the word "So";
    // brackets are not allowed here.
    std::vector<int> tokenize_content(const std::string& text) const;
    // Full trace text: bracket groups at line starts are references, a
    // bracket group ending a line is its anchor.
    std::vector<int> tokenize(const std::string& text) const;
    std::string detokenize(const std::vector<int>& tokens) const;

    std::string token_text(int id) const;  // single-token rendering
};

// Shared immutable instance (the alphabet is closed and fixed).
const Vocab& default_vocab();

}  // namespace spanattn
