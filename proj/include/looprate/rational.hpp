#pragma once

#include <string>
#include <string_view>

#include "looprate/bigint.hpp"

namespace looprate {

// Exact rational in lowest terms with positive denominator.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(long long v) : num_(v), den_(1) {}
    Rational(int v) : num_(v), den_(1) {}
    Rational(BigInt n) : num_(std::move(n)), den_(1) {}
    Rational(BigInt n, BigInt d);
    Rational(long long n, long long d) : Rational(BigInt(n), BigInt(d)) {}

    // Accepts "p/q", plain integers, and decimal strings such as "0.25".
    static Rational parse(std::string_view s);

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_negative() const { return num_.is_negative(); }
    bool is_integer() const { return den_ == BigInt(1); }

    Rational operator-() const;
    Rational operator+(const Rational& o) const;
    Rational operator-(const Rational& o) const;
    Rational operator*(const Rational& o) const;
    Rational operator/(const Rational& o) const;

    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const Rational& o) const { return !(*this == o); }
    bool operator<(const Rational& o) const;
    bool operator>(const Rational& o) const { return o < *this; }
    bool operator<=(const Rational& o) const { return !(o < *this); }
    bool operator>=(const Rational& o) const { return !(*this < o); }

    Rational abs() const { return is_negative() ? -*this : *this; }
    Rational inverse() const;

    std::string to_string() const;  // "p/q", or "p" when integral
    double to_double() const;

private:
    BigInt num_, den_;
    void normalize();
};

}  // namespace looprate
