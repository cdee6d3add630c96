#include "looprate/bigint.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace looprate {

namespace {
constexpr uint64_t kBase = 1ull << 32;
}

BigInt::BigInt(long long v) {
    if (v == 0) return;
    sign_ = v < 0 ? -1 : 1;
    // avoid overflow on LLONG_MIN
    uint64_t m = v < 0 ? ~static_cast<uint64_t>(v) + 1 : static_cast<uint64_t>(v);
    mag_.push_back(static_cast<uint32_t>(m & 0xffffffffu));
    if (m >> 32) mag_.push_back(static_cast<uint32_t>(m >> 32));
}

void BigInt::trim() {
    while (!mag_.empty() && mag_.back() == 0) mag_.pop_back();
    if (mag_.empty()) sign_ = 0;
}

int BigInt::cmp_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    for (size_t i = a.size(); i-- > 0;) {
        if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    }
    return 0;
}

std::vector<uint32_t> BigInt::add_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
    const std::vector<uint32_t>& x = a.size() >= b.size() ? a : b;
    const std::vector<uint32_t>& y = a.size() >= b.size() ? b : a;
    std::vector<uint32_t> r(x.size() + 1, 0);
    uint64_t carry = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        uint64_t s = carry + x[i] + (i < y.size() ? y[i] : 0);
        r[i] = static_cast<uint32_t>(s);
        carry = s >> 32;
    }
    r[x.size()] = static_cast<uint32_t>(carry);
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
}

// requires |a| >= |b|
std::vector<uint32_t> BigInt::sub_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
    std::vector<uint32_t> r(a.size(), 0);
    int64_t borrow = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        int64_t s = static_cast<int64_t>(a[i]) - borrow - (i < b.size() ? b[i] : 0);
        if (s < 0) {
            s += static_cast<int64_t>(kBase);
            borrow = 1;
        } else {
            borrow = 0;
        }
        r[i] = static_cast<uint32_t>(s);
    }
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
}

std::vector<uint32_t> BigInt::mul_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<uint32_t> r(a.size() + b.size(), 0);
    for (size_t i = 0; i < a.size(); ++i) {
        uint64_t carry = 0;
        uint64_t ai = a[i];
        for (size_t j = 0; j < b.size(); ++j) {
            uint64_t cur = r[i + j] + ai * b[j] + carry;
            r[i + j] = static_cast<uint32_t>(cur);
            carry = cur >> 32;
        }
        r[i + b.size()] += static_cast<uint32_t>(carry);
    }
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
}

// Knuth algorithm D on normalized operands.
void BigInt::divmod_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b,
                        std::vector<uint32_t>& q, std::vector<uint32_t>& r) {
    if (b.empty()) throw std::domain_error("BigInt: division by zero");
    if (cmp_mag(a, b) < 0) {
        q.clear();
        r = a;
        return;
    }
    if (b.size() == 1) {
        uint64_t d = b[0];
        q.assign(a.size(), 0);
        uint64_t rem = 0;
        for (size_t i = a.size(); i-- > 0;) {
            uint64_t cur = (rem << 32) | a[i];
            q[i] = static_cast<uint32_t>(cur / d);
            rem = cur % d;
        }
        while (!q.empty() && q.back() == 0) q.pop_back();
        r.clear();
        if (rem) r.push_back(static_cast<uint32_t>(rem));
        return;
    }

    int shift = 0;
    uint32_t top = b.back();
    while (!(top & 0x80000000u)) {
        top <<= 1;
        ++shift;
    }
    size_t n = b.size(), m = a.size() - n;

    auto shl = [&](const std::vector<uint32_t>& v, bool pad) {
        std::vector<uint32_t> out(v.size() + (pad ? 1 : 0), 0);
        uint32_t carry = 0;
        for (size_t i = 0; i < v.size(); ++i) {
            out[i] = (v[i] << shift) | carry;
            carry = shift ? static_cast<uint32_t>(static_cast<uint64_t>(v[i]) >> (32 - shift)) : 0;
        }
        if (pad) out[v.size()] = carry;
        return out;
    };
    std::vector<uint32_t> u = shl(a, true);
    std::vector<uint32_t> v = shl(b, false);

    q.assign(m + 1, 0);
    const uint64_t v1 = v[n - 1], v2 = v[n - 2];
    for (size_t j = m + 1; j-- > 0;) {
        uint64_t num = (static_cast<uint64_t>(u[j + n]) << 32) | u[j + n - 1];
        uint64_t qhat = num / v1;
        uint64_t rhat = num % v1;
        while (qhat >= kBase || qhat * v2 > ((rhat << 32) | u[j + n - 2])) {
            --qhat;
            rhat += v1;
            if (rhat >= kBase) break;
        }
        // multiply-subtract
        int64_t borrow = 0;
        uint64_t carry = 0;
        for (size_t i = 0; i < n; ++i) {
            uint64_t p = qhat * v[i] + carry;
            carry = p >> 32;
            int64_t t = static_cast<int64_t>(u[i + j]) - borrow - static_cast<int64_t>(p & 0xffffffffu);
            if (t < 0) {
                t += static_cast<int64_t>(kBase);
                borrow = 1;
            } else {
                borrow = 0;
            }
            u[i + j] = static_cast<uint32_t>(t);
        }
        int64_t t = static_cast<int64_t>(u[j + n]) - borrow - static_cast<int64_t>(carry);
        if (t < 0) {
            // qhat was one too large: add back
            t += static_cast<int64_t>(kBase);
            --qhat;
            uint64_t c2 = 0;
            for (size_t i = 0; i < n; ++i) {
                uint64_t s = static_cast<uint64_t>(u[i + j]) + v[i] + c2;
                u[i + j] = static_cast<uint32_t>(s);
                c2 = s >> 32;
            }
            t += static_cast<int64_t>(c2);
        }
        u[j + n] = static_cast<uint32_t>(t);
        q[j] = static_cast<uint32_t>(qhat);
    }
    while (!q.empty() && q.back() == 0) q.pop_back();

    r.assign(u.begin(), u.begin() + n);
    if (shift) {
        uint32_t carry = 0;
        for (size_t i = r.size(); i-- > 0;) {
            uint32_t cur = r[i];
            r[i] = (cur >> shift) | carry;
            carry = static_cast<uint32_t>(static_cast<uint64_t>(cur) << (32 - shift));
        }
    }
    while (!r.empty() && r.back() == 0) r.pop_back();
}

BigInt BigInt::operator-() const {
    BigInt r = *this;
    r.sign_ = -r.sign_;
    return r;
}

BigInt BigInt::abs() const {
    BigInt r = *this;
    if (r.sign_ < 0) r.sign_ = 1;
    return r;
}

BigInt BigInt::operator+(const BigInt& o) const {
    if (sign_ == 0) return o;
    if (o.sign_ == 0) return *this;
    BigInt r;
    if (sign_ == o.sign_) {
        r.sign_ = sign_;
        r.mag_ = add_mag(mag_, o.mag_);
    } else {
        int c = cmp_mag(mag_, o.mag_);
        if (c == 0) return BigInt{};
        if (c > 0) {
            r.sign_ = sign_;
            r.mag_ = sub_mag(mag_, o.mag_);
        } else {
            r.sign_ = o.sign_;
            r.mag_ = sub_mag(o.mag_, mag_);
        }
    }
    return r;
}

BigInt BigInt::operator-(const BigInt& o) const { return *this + (-o); }

BigInt BigInt::operator*(const BigInt& o) const {
    BigInt r;
    if (sign_ == 0 || o.sign_ == 0) return r;
    r.sign_ = sign_ * o.sign_;
    r.mag_ = mul_mag(mag_, o.mag_);
    return r;
}

void BigInt::divmod(const BigInt& o, BigInt& q, BigInt& r) const {
    std::vector<uint32_t> qm, rm;
    divmod_mag(mag_, o.mag_, qm, rm);
    q.mag_ = std::move(qm);
    r.mag_ = std::move(rm);
    q.sign_ = q.mag_.empty() ? 0 : sign_ * o.sign_;
    r.sign_ = r.mag_.empty() ? 0 : sign_;
}

BigInt BigInt::operator/(const BigInt& o) const {
    BigInt q, r;
    divmod(o, q, r);
    return q;
}

BigInt BigInt::operator%(const BigInt& o) const {
    BigInt q, r;
    divmod(o, q, r);
    return r;
}

bool BigInt::operator<(const BigInt& o) const {
    if (sign_ != o.sign_) return sign_ < o.sign_;
    int c = cmp_mag(mag_, o.mag_);
    return sign_ >= 0 ? c < 0 : c > 0;
}

BigInt BigInt::gcd(BigInt a, BigInt b) {
    a.sign_ = a.mag_.empty() ? 0 : 1;
    b.sign_ = b.mag_.empty() ? 0 : 1;
    while (!b.is_zero()) {
        BigInt r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

BigInt BigInt::pow(const BigInt& base, unsigned exp) {
    BigInt r(1), b = base;
    while (exp) {
        if (exp & 1) r = r * b;
        exp >>= 1;
        if (exp) b = b * b;
    }
    return r;
}

BigInt BigInt::from_string(std::string_view s) {
    BigInt r;
    size_t i = 0;
    int sign = 1;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
        if (s[i] == '-') sign = -1;
        ++i;
    }
    if (i == s.size()) throw std::invalid_argument("BigInt: empty numeral");
    for (; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("BigInt: bad digit");
        r = r * BigInt(10) + BigInt(s[i] - '0');
    }
    if (sign < 0) r.sign_ = -r.sign_;
    return r;
}

std::string BigInt::to_string() const {
    if (is_zero()) return "0";
    std::vector<uint32_t> m = mag_;
    std::string digits;
    while (!m.empty()) {
        // divide magnitude by 10^9, collect remainder
        uint64_t rem = 0;
        for (size_t i = m.size(); i-- > 0;) {
            uint64_t cur = (rem << 32) | m[i];
            m[i] = static_cast<uint32_t>(cur / 1000000000ull);
            rem = cur % 1000000000ull;
        }
        while (!m.empty() && m.back() == 0) m.pop_back();
        for (int k = 0; k < 9; ++k) {
            digits.push_back(static_cast<char>('0' + rem % 10));
            rem /= 10;
        }
    }
    while (digits.size() > 1 && digits.back() == '0') digits.pop_back();
    if (sign_ < 0) digits.push_back('-');
    std::reverse(digits.begin(), digits.end());
    return digits;
}

double BigInt::to_double() const {
    double r = 0;
    for (size_t i = mag_.size(); i-- > 0;) r = r * 4294967296.0 + mag_[i];
    return sign_ < 0 ? -r : r;
}

bool BigInt::fits_int64() const {
    if (mag_.size() > 2) return false;
    if (mag_.size() < 2) return true;
    uint64_t m = (static_cast<uint64_t>(mag_[1]) << 32) | mag_[0];
    return sign_ < 0 ? m <= (1ull << 63) : m < (1ull << 63);
}

long long BigInt::to_int64() const {
    uint64_t m = 0;
    if (mag_.size() >= 1) m |= mag_[0];
    if (mag_.size() >= 2) m |= static_cast<uint64_t>(mag_[1]) << 32;
    return sign_ < 0 ? -static_cast<long long>(m) : static_cast<long long>(m);
}

size_t BigInt::bit_length() const {
    if (mag_.empty()) return 0;
    uint32_t top = mag_.back();
    size_t bits = (mag_.size() - 1) * 32;
    while (top) {
        ++bits;
        top >>= 1;
    }
    return bits;
}

}  // namespace looprate
