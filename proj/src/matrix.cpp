#include "looprate/matrix.hpp"

#include <algorithm>

namespace looprate {

BigInt determinant_bareiss(Matrix<BigInt> m) {
    if (!m.square()) fail(errc::non_square, "determinant of non-square matrix");
    const size_t n = m.rows();
    if (n == 0) return BigInt(1);
    BigInt prev(1);
    int sign = 1;
    for (size_t k = 0; k + 1 < n; ++k) {
        if (m(k, k).is_zero()) {
            size_t p = k + 1;
            while (p < n && m(p, k).is_zero()) ++p;
            if (p == n) return BigInt(0);
            m.swap_rows(k, p);
            sign = -sign;
        }
        for (size_t i = k + 1; i < n; ++i) {
            for (size_t j = k + 1; j < n; ++j) {
                m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
            }
            m(i, k) = BigInt(0);
        }
        prev = m(k, k);
    }
    BigInt d = m(n - 1, n - 1);
    return sign < 0 ? -d : d;
}

Rational determinant(const Matrix<Rational>& m) {
    if (!m.square()) fail(errc::non_square, "determinant of non-square matrix");
    const size_t n = m.rows();
    if (n == 0) return Rational(1);
    Matrix<BigInt> im(n, n);
    Rational scale(1);
    for (size_t i = 0; i < n; ++i) {
        BigInt l(1);
        for (size_t j = 0; j < n; ++j) {
            const BigInt& d = m(i, j).den();
            l = l / BigInt::gcd(l, d) * d;
        }
        for (size_t j = 0; j < n; ++j) {
            im(i, j) = m(i, j).num() * (l / m(i, j).den());
        }
        scale = scale * Rational(BigInt(1), l);
    }
    return Rational(determinant_bareiss(std::move(im))) * scale;
}

double determinant(const Matrix<double>& mat) {
    if (!mat.square()) fail(errc::non_square, "determinant of non-square matrix");
    Matrix<double> m = mat;
    const size_t n = m.rows();
    if (n == 0) return 1.0;
    double det = 1.0;
    for (size_t k = 0; k < n; ++k) {
        size_t p = k;
        for (size_t i = k + 1; i < n; ++i)
            if (std::fabs(m(i, k)) > std::fabs(m(p, k))) p = i;
        if (m(p, k) == 0.0) return 0.0;
        if (p != k) {
            m.swap_rows(k, p);
            det = -det;
        }
        det *= m(k, k);
        for (size_t i = k + 1; i < n; ++i) {
            double f = m(i, k) / m(k, k);
            for (size_t j = k + 1; j < n; ++j) m(i, j) -= f * m(k, j);
        }
    }
    return det;
}

namespace {

template <typename T, typename PivotOk>
Matrix<T> gauss_jordan(Matrix<T> a, Matrix<T> rhs, PivotOk better) {
    const size_t n = a.rows();
    for (size_t k = 0; k < n; ++k) {
        size_t p = n;
        for (size_t i = k; i < n; ++i) {
            if (a(i, k) == T(0)) continue;
            if (p == n || better(a(i, k), a(p, k))) p = i;
        }
        if (p == n) fail(errc::singular, "singular matrix");
        if (p != k) {
            a.swap_rows(k, p);
            rhs.swap_rows(k, p);
        }
        T piv = a(k, k);
        for (size_t j = 0; j < n; ++j) a(k, j) = a(k, j) / piv;
        for (size_t j = 0; j < rhs.cols(); ++j) rhs(k, j) = rhs(k, j) / piv;
        for (size_t i = 0; i < n; ++i) {
            if (i == k || a(i, k) == T(0)) continue;
            T f = a(i, k);
            for (size_t j = k; j < n; ++j) a(i, j) = a(i, j) - f * a(k, j);
            for (size_t j = 0; j < rhs.cols(); ++j) rhs(i, j) = rhs(i, j) - f * rhs(k, j);
        }
    }
    return rhs;
}

bool pivot_first(const Rational&, const Rational&) { return false; }
bool pivot_abs(const double& a, const double& b) { return std::fabs(a) > std::fabs(b); }

template <typename T, typename PivotOk>
std::vector<T> solve_impl(const Matrix<T>& m, const std::vector<T>& b, PivotOk better) {
    if (!m.square()) fail(errc::non_square, "solve needs a square matrix");
    if (b.size() != m.rows()) fail(errc::index_out_of_range, "rhs size mismatch");
    Matrix<T> rhs(b.size(), 1);
    for (size_t i = 0; i < b.size(); ++i) rhs(i, 0) = b[i];
    Matrix<T> x = gauss_jordan(m, std::move(rhs), better);
    std::vector<T> out(b.size());
    for (size_t i = 0; i < b.size(); ++i) out[i] = x(i, 0);
    return out;
}

}  // namespace

std::vector<Rational> solve(const Matrix<Rational>& m, const std::vector<Rational>& b) {
    return solve_impl(m, b, pivot_first);
}

std::vector<double> solve(const Matrix<double>& m, const std::vector<double>& b) {
    return solve_impl(m, b, pivot_abs);
}

Matrix<Rational> inverse(const Matrix<Rational>& m) {
    if (!m.square()) fail(errc::non_square, "inverse of non-square matrix");
    return gauss_jordan(m, Matrix<Rational>::identity(m.rows()), pivot_first);
}

Matrix<double> inverse(const Matrix<double>& m) {
    if (!m.square()) fail(errc::non_square, "inverse of non-square matrix");
    return gauss_jordan(m, Matrix<double>::identity(m.rows()), pivot_abs);
}

Matrix<double> to_float(const Matrix<Rational>& m) {
    Matrix<double> f(m.rows(), m.cols());
    for (size_t i = 0; i < m.rows(); ++i)
        for (size_t j = 0; j < m.cols(); ++j) f(i, j) = m(i, j).to_double();
    return f;
}

}  // namespace looprate
