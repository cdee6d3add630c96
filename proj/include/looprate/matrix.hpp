#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "looprate/error.hpp"
#include "looprate/rational.hpp"

namespace looprate {

template <typename T>
class Matrix {
public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(size_t rows, size_t cols, T fill = T(0))
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(size_t n) {
        Matrix m(n, n);
        for (size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    T& operator()(size_t i, size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(size_t i, size_t j) const { return data_[i * cols_ + j]; }

    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

    void swap_rows(size_t a, size_t b) {
        for (size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
    }

    // Matrix with the listed rows and columns removed.
    Matrix minor_matrix(const std::vector<size_t>& drop_rows,
                        const std::vector<size_t>& drop_cols) const;

    // Principal submatrix on the given (row == column) indices, in order.
    Matrix principal(const std::vector<size_t>& idx) const {
        Matrix m(idx.size(), idx.size());
        for (size_t i = 0; i < idx.size(); ++i)
            for (size_t j = 0; j < idx.size(); ++j) m(i, j) = (*this)(idx[i], idx[j]);
        return m;
    }

private:
    size_t rows_, cols_;
    std::vector<T> data_;
};

template <typename T>
Matrix<T> Matrix<T>::minor_matrix(const std::vector<size_t>& drop_rows,
                                  const std::vector<size_t>& drop_cols) const {
    std::vector<char> rdrop(rows_, 0), cdrop(cols_, 0);
    for (size_t r : drop_rows) {
        if (r >= rows_) fail(errc::index_out_of_range, "row index " + std::to_string(r));
        rdrop[r] = 1;
    }
    for (size_t c : drop_cols) {
        if (c >= cols_) fail(errc::index_out_of_range, "column index " + std::to_string(c));
        cdrop[c] = 1;
    }
    std::vector<size_t> rk, ck;
    for (size_t i = 0; i < rows_; ++i)
        if (!rdrop[i]) rk.push_back(i);
    for (size_t j = 0; j < cols_; ++j)
        if (!cdrop[j]) ck.push_back(j);
    Matrix m(rk.size(), ck.size());
    for (size_t i = 0; i < rk.size(); ++i)
        for (size_t j = 0; j < ck.size(); ++j) m(i, j) = (*this)(rk[i], ck[j]);
    return m;
}

// Fraction-free (Bareiss) determinant of an integer matrix.  All divisions
// are exact; the empty matrix has determinant 1.
BigInt determinant_bareiss(Matrix<BigInt> m);

// Exact determinant; rows are scaled to integers first so the elimination
// stays fraction-free.
Rational determinant(const Matrix<Rational>& m);

// Partially pivoted LU determinant.
double determinant(const Matrix<double>& m);

// Exact linear solve (Gauss with first-nonzero pivoting).  Throws Singular.
std::vector<Rational> solve(const Matrix<Rational>& m, const std::vector<Rational>& b);
std::vector<double> solve(const Matrix<double>& m, const std::vector<double>& b);

// Exact inverse via Gauss-Jordan.  Throws Singular.
Matrix<Rational> inverse(const Matrix<Rational>& m);
Matrix<double> inverse(const Matrix<double>& m);

Matrix<double> to_float(const Matrix<Rational>& m);

}  // namespace looprate
