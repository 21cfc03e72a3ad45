#include "spanattn/bigint.hpp"

#include <algorithm>
#include <stdexcept>

namespace spanattn {

BigInt::BigInt(std::int64_t value) {
    negative_ = value < 0;
    std::uint64_t mag = negative_ ? 0ULL - static_cast<std::uint64_t>(value)
                                  : static_cast<std::uint64_t>(value);
    while (mag > 0) {
        digits_.push_back(static_cast<std::uint8_t>(mag % 10));
        mag /= 10;
    }
}

BigInt BigInt::from_string(const std::string& text) {
    BigInt out;
    std::size_t pos = 0;
    if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) {
        out.negative_ = text[pos] == '-';
        ++pos;
    }
    if (pos == text.size()) throw std::invalid_argument("not an integer: '" + text + "'");
    for (std::size_t i = pos; i < text.size(); ++i)
        if (text[i] < '0' || text[i] > '9')
            throw std::invalid_argument("not an integer: '" + text + "'");
    out.digits_.reserve(text.size() - pos);
    for (std::size_t i = text.size(); i > pos; --i)
        out.digits_.push_back(static_cast<std::uint8_t>(text[i - 1] - '0'));
    out.trim();
    return out;
}

void BigInt::trim() {
    while (!digits_.empty() && digits_.back() == 0) digits_.pop_back();
    if (digits_.empty()) negative_ = false;
}

int BigInt::digit_count() const { return digits_.empty() ? 1 : static_cast<int>(digits_.size()); }

int BigInt::significant_digits() const {
    if (digits_.empty()) return 1;
    std::size_t low = 0;
    while (low < digits_.size() && digits_[low] == 0) ++low;
    return static_cast<int>(digits_.size() - low);
}

int BigInt::digit_at(int place) const {
    if (place < 0 || place >= static_cast<int>(digits_.size())) return 0;
    return digits_[place];
}

std::string BigInt::to_string() const {
    if (digits_.empty()) return "0";
    std::string out;
    if (negative_) out.push_back('-');
    for (std::size_t i = digits_.size(); i > 0; --i)
        out.push_back(static_cast<char>('0' + digits_[i - 1]));
    return out;
}

BigInt BigInt::operator-() const {
    BigInt out = *this;
    if (!out.digits_.empty()) out.negative_ = !out.negative_;
    return out;
}

BigInt BigInt::abs() const {
    BigInt out = *this;
    out.negative_ = false;
    return out;
}

int BigInt::compare_magnitude(const BigInt& a, const BigInt& b) {
    if (a.digits_.size() != b.digits_.size())
        return a.digits_.size() < b.digits_.size() ? -1 : 1;
    for (std::size_t i = a.digits_.size(); i > 0; --i) {
        if (a.digits_[i - 1] != b.digits_[i - 1])
            return a.digits_[i - 1] < b.digits_[i - 1] ? -1 : 1;
    }
    return 0;
}

BigInt BigInt::add_magnitude(const BigInt& a, const BigInt& b) {
    BigInt out;
    const std::size_t n = std::max(a.digits_.size(), b.digits_.size());
    out.digits_.reserve(n + 1);
    int carry = 0;
    for (std::size_t i = 0; i < n || carry; ++i) {
        int sum = carry;
        if (i < a.digits_.size()) sum += a.digits_[i];
        if (i < b.digits_.size()) sum += b.digits_[i];
        out.digits_.push_back(static_cast<std::uint8_t>(sum % 10));
        carry = sum / 10;
    }
    return out;
}

BigInt BigInt::sub_magnitude(const BigInt& a, const BigInt& b) {
    BigInt out;
    out.digits_.reserve(a.digits_.size());
    int borrow = 0;
    for (std::size_t i = 0; i < a.digits_.size(); ++i) {
        int diff = a.digits_[i] - borrow - (i < b.digits_.size() ? b.digits_[i] : 0);
        borrow = diff < 0;
        if (borrow) diff += 10;
        out.digits_.push_back(static_cast<std::uint8_t>(diff));
    }
    out.trim();
    return out;
}

BigInt operator+(const BigInt& a, const BigInt& b) {
    if (a.negative_ == b.negative_) {
        BigInt out = BigInt::add_magnitude(a, b);
        out.negative_ = a.negative_ && !out.digits_.empty();
        return out;
    }
    const int cmp = BigInt::compare_magnitude(a, b);
    if (cmp == 0) return BigInt();
    BigInt out = cmp > 0 ? BigInt::sub_magnitude(a, b) : BigInt::sub_magnitude(b, a);
    out.negative_ = (cmp > 0 ? a.negative_ : b.negative_) && !out.digits_.empty();
    return out;
}

BigInt operator-(const BigInt& a, const BigInt& b) { return a + (-b); }

BigInt operator*(const BigInt& a, const BigInt& b) {
    if (a.is_zero() || b.is_zero()) return BigInt();
    BigInt out;
    out.digits_.assign(a.digits_.size() + b.digits_.size(), 0);
    for (std::size_t i = 0; i < a.digits_.size(); ++i) {
        int carry = 0;
        for (std::size_t j = 0; j < b.digits_.size() || carry; ++j) {
            int cur = out.digits_[i + j] + carry;
            if (j < b.digits_.size()) cur += a.digits_[i] * b.digits_[j];
            out.digits_[i + j] = static_cast<std::uint8_t>(cur % 10);
            carry = cur / 10;
        }
    }
    out.trim();
    out.negative_ = a.negative_ != b.negative_;
    return out;
}

std::pair<BigInt, BigInt> BigInt::divmod_trunc(const BigInt& a, const BigInt& b) {
    if (b.is_zero()) throw std::domain_error("division by zero");
    const BigInt mag_a = a.abs();
    const BigInt mag_b = b.abs();
    if (compare_magnitude(mag_a, mag_b) < 0) return {BigInt(), a};

    BigInt quotient;
    quotient.digits_.assign(mag_a.digits_.size(), 0);
    BigInt remainder;
    for (std::size_t i = mag_a.digits_.size(); i > 0; --i) {
        // remainder = remainder * 10 + next digit
        if (!remainder.digits_.empty() || mag_a.digits_[i - 1] != 0) {
            remainder.digits_.insert(remainder.digits_.begin(), mag_a.digits_[i - 1]);
            remainder.trim();
        }
        int digit = 0;
        while (compare_magnitude(remainder, mag_b) >= 0) {
            remainder = sub_magnitude(remainder, mag_b);
            ++digit;
        }
        quotient.digits_[i - 1] = static_cast<std::uint8_t>(digit);
    }
    quotient.trim();
    quotient.negative_ = (a.negative_ != b.negative_) && !quotient.digits_.empty();
    remainder.negative_ = a.negative_ && !remainder.digits_.empty();
    return {quotient, remainder};
}

BigInt operator/(const BigInt& a, const BigInt& b) { return BigInt::divmod_trunc(a, b).first; }

bool operator==(const BigInt& a, const BigInt& b) {
    return a.negative_ == b.negative_ && a.digits_ == b.digits_;
}

bool operator<(const BigInt& a, const BigInt& b) {
    if (a.negative_ != b.negative_) return a.negative_;
    const int cmp = BigInt::compare_magnitude(a, b);
    return a.negative_ ? cmp > 0 : cmp < 0;
}

BigInt BigInt::shifted(const BigInt& value, int shift) {
    if (value.is_zero() || shift == 0) return value;
    BigInt out = value;
    if (shift > 0) {
        out.digits_.insert(out.digits_.begin(), static_cast<std::size_t>(shift), 0);
    } else {
        const std::size_t drop = std::min<std::size_t>(-shift, out.digits_.size());
        out.digits_.erase(out.digits_.begin(), out.digits_.begin() + drop);
        out.trim();
    }
    return out;
}

}  // namespace spanattn
