#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace looprate {

// Arbitrary-precision signed integer, sign-magnitude over 32-bit limbs
// (little endian, no trailing zero limbs).  Division truncates toward zero,
// matching built-in integer semantics.
class BigInt {
public:
    BigInt() = default;
    BigInt(long long v);
    BigInt(int v) : BigInt(static_cast<long long>(v)) {}

    static BigInt from_string(std::string_view s);

    bool is_zero() const { return mag_.empty(); }
    bool is_negative() const { return sign_ < 0; }
    int sign() const { return sign_; }

    BigInt operator-() const;
    BigInt operator+(const BigInt& o) const;
    BigInt operator-(const BigInt& o) const;
    BigInt operator*(const BigInt& o) const;
    BigInt operator/(const BigInt& o) const;  // truncated quotient
    BigInt operator%(const BigInt& o) const;  // remainder, sign of dividend

    BigInt& operator+=(const BigInt& o) { return *this = *this + o; }
    BigInt& operator-=(const BigInt& o) { return *this = *this - o; }
    BigInt& operator*=(const BigInt& o) { return *this = *this * o; }
    BigInt& operator/=(const BigInt& o) { return *this = *this / o; }

    bool operator==(const BigInt& o) const { return sign_ == o.sign_ && mag_ == o.mag_; }
    bool operator!=(const BigInt& o) const { return !(*this == o); }
    bool operator<(const BigInt& o) const;
    bool operator>(const BigInt& o) const { return o < *this; }
    bool operator<=(const BigInt& o) const { return !(o < *this); }
    bool operator>=(const BigInt& o) const { return !(*this < o); }

    // Quotient and remainder in one pass; q*o + r == *this.
    void divmod(const BigInt& o, BigInt& q, BigInt& r) const;

    static BigInt gcd(BigInt a, BigInt b);  // non-negative
    static BigInt pow(const BigInt& base, unsigned exp);

    BigInt abs() const;

    std::string to_string() const;
    double to_double() const;
    bool fits_int64() const;
    long long to_int64() const;  // caller checks fits_int64

    size_t bit_length() const;

private:
    int sign_ = 0;                // -1, 0, +1
    std::vector<uint32_t> mag_;   // |value|, little endian

    void trim();
    static int cmp_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b);
    static std::vector<uint32_t> add_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b);
    static std::vector<uint32_t> sub_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b);
    static std::vector<uint32_t> mul_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b);
    static void divmod_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b,
                           std::vector<uint32_t>& q, std::vector<uint32_t>& r);
};

}  // namespace looprate
