#include <cstdint>
#include <random>

#include "doctest.h"
#include "looprate/matrix.hpp"

using namespace looprate;

namespace {

// Reference arithmetic on __int128 for cross-checking BigInt.
__int128 to_i128(const BigInt& b) {
    bool neg = b.is_negative();
    BigInt a = b.abs();
    __int128 r = 0;
    std::string s = a.to_string();
    for (char c : s) r = r * 10 + (c - '0');
    return neg ? -r : r;
}

}  // namespace

TEST_CASE("bigint arithmetic agrees with __int128 on random values") {
    std::mt19937_64 rng(12345);
    for (int iter = 0; iter < 3000; ++iter) {
        long long x = static_cast<long long>(rng()) >> (rng() % 40);
        long long y = static_cast<long long>(rng()) >> (rng() % 40);
        BigInt a(x), b(y);
        CHECK(to_i128(a + b) == static_cast<__int128>(x) + y);
        CHECK(to_i128(a - b) == static_cast<__int128>(x) - y);
        CHECK(to_i128(a * b) == static_cast<__int128>(x) * y);
        if (y != 0) {
            CHECK(to_i128(a / b) == static_cast<__int128>(x) / y);
            CHECK(to_i128(a % b) == static_cast<__int128>(x) % y);
        }
        CHECK((a < b) == (x < y));
    }
}

TEST_CASE("bigint large-operand identities") {
    std::mt19937_64 rng(99);
    for (int iter = 0; iter < 200; ++iter) {
        BigInt a(1), b(1);
        int la = 1 + static_cast<int>(rng() % 8), lb = 1 + static_cast<int>(rng() % 8);
        for (int i = 0; i < la; ++i) a = a * BigInt(static_cast<long long>(rng() >> 8)) + BigInt(static_cast<long long>(rng() % 1000));
        for (int i = 0; i < lb; ++i) b = b * BigInt(static_cast<long long>(rng() >> 8)) + BigInt(static_cast<long long>(rng() % 1000));
        if (rng() & 1) a = -a;
        if (rng() & 1) b = -b;
        if (b.is_zero()) continue;
        BigInt q, r;
        a.divmod(b, q, r);
        CHECK(q * b + r == a);
        CHECK(r.abs() < b.abs());
        // string round trip
        CHECK(BigInt::from_string(a.to_string()) == a);
    }
}

TEST_CASE("bigint gcd") {
    CHECK(BigInt::gcd(BigInt(12), BigInt(18)) == BigInt(6));
    CHECK(BigInt::gcd(BigInt(-12), BigInt(18)) == BigInt(6));
    CHECK(BigInt::gcd(BigInt(0), BigInt(5)) == BigInt(5));
    BigInt big = BigInt::pow(BigInt(1000003), 7);
    CHECK(BigInt::gcd(big * BigInt(4), big * BigInt(6)) == big * BigInt(2));
}

TEST_CASE("rational canonical form and parsing") {
    CHECK(Rational(2, 4).to_string() == "1/2");
    CHECK(Rational(-2, -4).to_string() == "1/2");
    CHECK(Rational(2, -4).to_string() == "-1/2");
    CHECK(Rational(0, 7).to_string() == "0");
    CHECK(Rational::parse("3/6") == Rational(1, 2));
    CHECK(Rational::parse("0.25") == Rational(1, 4));
    CHECK(Rational::parse("-1.5") == Rational(-3, 2));
    CHECK(Rational::parse("7") == Rational(7));
    CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
    CHECK(Rational(1, 3) * Rational(3, 5) == Rational(1, 5));
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK(Rational(22, 7).to_double() == doctest::Approx(22.0 / 7.0).epsilon(1e-15));
}

TEST_CASE("determinant examples") {
    Matrix<Rational> one(1, 1);
    one(0, 0) = Rational(1);
    CHECK(determinant(one) == Rational(1));

    Matrix<Rational> m(2, 2);
    m(0, 0) = Rational(2);
    m(0, 1) = Rational(-1);
    m(1, 0) = Rational(-1);
    m(1, 1) = Rational(2);
    CHECK(determinant(m) == Rational(3));

    Matrix<Rational> empty(0, 0);
    CHECK(determinant(empty) == Rational(1));

    Matrix<Rational> rect(2, 3);
    CHECK_THROWS_AS(determinant(rect), Error);
}

TEST_CASE("reduced laplacian of weighted K3 (delete row/col 3)") {
    // det [[w12+w13, -w12], [-w12, w12+w23]] = w12*w23 + w12*w13 + w13*w23
    Rational w12(3, 2), w13(5, 7), w23(2);
    Matrix<Rational> m(2, 2);
    m(0, 0) = w12 + w13;
    m(0, 1) = -w12;
    m(1, 0) = -w12;
    m(1, 1) = w12 + w23;
    CHECK(determinant(m) == w12 * w23 + w12 * w13 + w13 * w23);
}

TEST_CASE("solve examples") {
    Matrix<Rational> id = Matrix<Rational>::identity(3);
    std::vector<Rational> b{Rational(1), Rational(2, 3), Rational(-5)};
    CHECK(solve(id, b) == b);

    Matrix<Rational> m(2, 2);
    m(0, 0) = Rational(2);
    m(0, 1) = Rational(-1);
    m(1, 0) = Rational(-1);
    m(1, 1) = Rational(2);
    auto x = solve(m, {Rational(1), Rational(0)});
    CHECK(x[0] == Rational(2, 3));
    CHECK(x[1] == Rational(1, 3));

    Matrix<Rational> sing(2, 2);
    sing(0, 0) = sing(0, 1) = sing(1, 0) = sing(1, 1) = Rational(1);
    CHECK_THROWS_AS(solve(sing, {Rational(1), Rational(0)}), Error);

    Matrix<double> fs(2, 2);
    fs(0, 0) = 2;
    fs(0, 1) = -1;
    fs(1, 0) = -1;
    fs(1, 1) = 2;
    auto xf = solve(fs, std::vector<double>{1.0, 0.0});
    CHECK(xf[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("minor extraction") {
    Matrix<Rational> m(3, 3);
    for (size_t i = 0; i < 3; ++i)
        for (size_t j = 0; j < 3; ++j) m(i, j) = Rational(static_cast<long long>(3 * i + j));
    CHECK(m.minor_matrix({}, {}) == m);
    Matrix<Rational> lead = m.minor_matrix({2}, {2});
    CHECK(lead.rows() == 2);
    CHECK(lead(1, 1) == Rational(4));
    Matrix<Rational> none = m.minor_matrix({0, 1, 2}, {});
    CHECK(none.rows() == 0);
    CHECK_THROWS_AS(m.minor_matrix({5}, {}), Error);
}

TEST_CASE("exact and float determinants agree on random integer matrices") {
    std::mt19937_64 rng(2024);
    for (int iter = 0; iter < 20; ++iter) {
        const size_t n = 10;
        Matrix<Rational> m(n, n);
        Matrix<double> f(n, n);
        for (size_t i = 0; i < n; ++i) {
            for (size_t j = 0; j < n; ++j) {
                long long v = static_cast<long long>(rng() % 19) - 9;
                if (i == j) v += 40;  // keep well conditioned
                m(i, j) = Rational(v);
                f(i, j) = static_cast<double>(v);
            }
        }
        double exact = determinant(m).to_double();
        double approx = determinant(f);
        CHECK(std::fabs(exact - approx) <= 1e-8 * std::max(1.0, std::fabs(exact)));
    }
}

TEST_CASE("inverse round trip") {
    std::mt19937_64 rng(7);
    Matrix<Rational> m(4, 4);
    for (size_t i = 0; i < 4; ++i)
        for (size_t j = 0; j < 4; ++j)
            m(i, j) = Rational(static_cast<long long>(rng() % 9), 1 + static_cast<long long>(rng() % 5));
    for (size_t i = 0; i < 4; ++i) m(i, i) += Rational(10);
    Matrix<Rational> inv = inverse(m);
    // m * inv == I
    for (size_t i = 0; i < 4; ++i) {
        for (size_t j = 0; j < 4; ++j) {
            Rational s(0);
            for (size_t k = 0; k < 4; ++k) s += m(i, k) * inv(k, j);
            CHECK(s == (i == j ? Rational(1) : Rational(0)));
        }
    }
}
