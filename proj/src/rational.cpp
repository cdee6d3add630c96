#include "looprate/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace looprate {

Rational::Rational(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) {
    if (den_.is_zero()) throw std::domain_error("Rational: zero denominator");
    normalize();
}

void Rational::normalize() {
    if (den_.is_negative()) {
        num_ = -num_;
        den_ = -den_;
    }
    if (num_.is_zero()) {
        den_ = BigInt(1);
        return;
    }
    BigInt g = BigInt::gcd(num_, den_);
    if (g != BigInt(1)) {
        num_ = num_ / g;
        den_ = den_ / g;
    }
}

Rational Rational::operator-() const {
    Rational r = *this;
    r.num_ = -r.num_;
    return r;
}

Rational Rational::operator+(const Rational& o) const {
    return Rational(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

Rational Rational::operator-(const Rational& o) const {
    return Rational(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

Rational Rational::operator*(const Rational& o) const {
    return Rational(num_ * o.num_, den_ * o.den_);
}

Rational Rational::operator/(const Rational& o) const {
    if (o.num_.is_zero()) throw std::domain_error("Rational: division by zero");
    return Rational(num_ * o.den_, den_ * o.num_);
}

bool Rational::operator<(const Rational& o) const {
    return num_ * o.den_ < o.num_ * den_;
}

Rational Rational::inverse() const {
    if (num_.is_zero()) throw std::domain_error("Rational: inverse of zero");
    return Rational(den_, num_);
}

Rational Rational::parse(std::string_view s) {
    if (s.empty()) throw std::invalid_argument("Rational: empty numeral");
    size_t slash = s.find('/');
    if (slash != std::string_view::npos) {
        return Rational(BigInt::from_string(s.substr(0, slash)),
                        BigInt::from_string(s.substr(slash + 1)));
    }
    size_t dot = s.find('.');
    if (dot != std::string_view::npos) {
        std::string digits(s.substr(0, dot));
        std::string_view frac = s.substr(dot + 1);
        digits.append(frac);
        BigInt den = BigInt::pow(BigInt(10), static_cast<unsigned>(frac.size()));
        // "-.5" style: from_string rejects bare "-", so normalize it
        if (digits == "-" || digits == "+" || digits.empty()) digits += "0";
        return Rational(BigInt::from_string(digits), den);
    }
    return Rational(BigInt::from_string(s));
}

std::string Rational::to_string() const {
    if (is_integer()) return num_.to_string();
    return num_.to_string() + "/" + den_.to_string();
}

double Rational::to_double() const {
    // integer part plus 64 fractional bits; exact operands of any size
    BigInt q, r;
    num_.divmod(den_, q, r);
    BigInt frac = (r * BigInt::pow(BigInt(2), 64)) / den_;
    return q.to_double() + std::ldexp(frac.to_double(), -64);
}

}  // namespace looprate
