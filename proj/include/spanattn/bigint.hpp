#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace spanattn {

// Signed arbitrary-precision integer on decimal digits (least significant
// first). Expression evaluation multiplies 10-digit operands repeatedly, so
// intermediate values outgrow any fixed-width type. Division truncates
// toward zero, matching the trace semantics.
class BigInt {
public:
    BigInt() = default;
    BigInt(std::int64_t value);  // NOLINT(google-explicit-constructor)
    static BigInt from_string(const std::string& text);  // throws std::invalid_argument

    bool is_zero() const { return digits_.empty(); }
    bool negative() const { return negative_; }
    // Decimal digits ignoring sign; significant digits ignore trailing zeros.
    int digit_count() const;
    int significant_digits() const;
    // Digit at decimal place `p` (10^p), 0 beyond the end.
    int digit_at(int place) const;

    std::string to_string() const;

    BigInt operator-() const;
    BigInt abs() const;

    friend BigInt operator+(const BigInt& a, const BigInt& b);
    friend BigInt operator-(const BigInt& a, const BigInt& b);
    friend BigInt operator*(const BigInt& a, const BigInt& b);
    // Truncating division; throws std::domain_error on zero divisor.
    friend BigInt operator/(const BigInt& a, const BigInt& b);

    friend bool operator==(const BigInt& a, const BigInt& b);
    friend bool operator!=(const BigInt& a, const BigInt& b) { return !(a == b); }
    friend bool operator<(const BigInt& a, const BigInt& b);
    friend bool operator<=(const BigInt& a, const BigInt& b) { return a < b || a == b; }
    friend bool operator>(const BigInt& a, const BigInt& b) { return b < a; }
    friend bool operator>=(const BigInt& a, const BigInt& b) { return b <= a; }

    // b * 10^shift, used by place-value decompositions.
    static BigInt shifted(const BigInt& value, int shift);
    static std::pair<BigInt, BigInt> divmod_trunc(const BigInt& a, const BigInt& b);

private:
    static int compare_magnitude(const BigInt& a, const BigInt& b);
    static BigInt add_magnitude(const BigInt& a, const BigInt& b);
    static BigInt sub_magnitude(const BigInt& a, const BigInt& b);  // |a| >= |b|
    void trim();

    std::vector<std::uint8_t> digits_;  // empty means zero
    bool negative_ = false;
};

}  // namespace spanattn
