#pragma once

#include "wes/error.hpp"
#include "wes/integer.hpp"

#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

namespace wes {

/// Dense row-major matrix of exact integers. Zero rows or columns are allowed.
class IntMatrix {
public:
    IntMatrix() = default;

    IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), entries_(rows * cols) {}

    IntMatrix(std::initializer_list<std::initializer_list<long long>> rows)
    {
        rows_ = rows.size();
        cols_ = rows_ == 0 ? 0 : rows.begin()->size();
        entries_.reserve(rows_ * cols_);
        for (const auto& row : rows) {
            if (row.size() != cols_)
                throw Error(ErrorCode::ShapeMismatch, "ragged matrix literal");
            for (long long v : row)
                entries_.emplace_back(v);
        }
    }

    static IntMatrix identity(std::size_t n)
    {
        IntMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = 1;
        return m;
    }

    static IntMatrix diagonal(std::span<const Integer> diag)
    {
        IntMatrix m(diag.size(), diag.size());
        for (std::size_t i = 0; i < diag.size(); ++i)
            m(i, i) = diag[i];
        return m;
    }

    static IntMatrix column(std::span<const Integer> v)
    {
        IntMatrix m(v.size(), 1);
        for (std::size_t i = 0; i < v.size(); ++i)
            m(i, 0) = v[i];
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return entries_.empty(); }

    Integer& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
    const Integer& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

    const std::vector<Integer>& entries() const noexcept { return entries_; }

    std::vector<Integer> col(std::size_t c) const
    {
        std::vector<Integer> v(rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            v[r] = (*this)(r, c);
        return v;
    }

    std::vector<Integer> row(std::size_t r) const
    {
        return {entries_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                entries_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_)};
    }

    void set_col(std::size_t c, std::span<const Integer> v)
    {
        for (std::size_t r = 0; r < rows_; ++r)
            (*this)(r, c) = v[r];
    }

    bool is_zero() const
    {
        for (const auto& e : entries_)
            if (e != 0)
                return false;
        return true;
    }

    IntMatrix transpose() const
    {
        IntMatrix t(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c)
                t(c, r) = (*this)(r, c);
        return t;
    }

    /// Rows [r0, r1) and columns [c0, c1).
    IntMatrix block(std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1) const
    {
        IntMatrix b(r1 - r0, c1 - c0);
        for (std::size_t r = r0; r < r1; ++r)
            for (std::size_t c = c0; c < c1; ++c)
                b(r - r0, c - c0) = (*this)(r, c);
        return b;
    }

    IntMatrix select_rows(std::span<const std::size_t> which) const
    {
        IntMatrix s(which.size(), cols_);
        for (std::size_t i = 0; i < which.size(); ++i)
            for (std::size_t c = 0; c < cols_; ++c)
                s(i, c) = (*this)(which[i], c);
        return s;
    }

    IntMatrix select_cols(std::span<const std::size_t> which) const
    {
        IntMatrix s(rows_, which.size());
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t i = 0; i < which.size(); ++i)
                s(r, i) = (*this)(r, which[i]);
        return s;
    }

    /// [this | other]
    IntMatrix hconcat(const IntMatrix& other) const
    {
        if (rows_ != other.rows_)
            throw Error(ErrorCode::ShapeMismatch, "hconcat row count differs");
        IntMatrix m(rows_, cols_ + other.cols_);
        for (std::size_t r = 0; r < rows_; ++r) {
            for (std::size_t c = 0; c < cols_; ++c)
                m(r, c) = (*this)(r, c);
            for (std::size_t c = 0; c < other.cols_; ++c)
                m(r, cols_ + c) = other(r, c);
        }
        return m;
    }

    /// [this; other]
    IntMatrix vconcat(const IntMatrix& other) const
    {
        if (cols_ != other.cols_)
            throw Error(ErrorCode::ShapeMismatch, "vconcat column count differs");
        IntMatrix m(rows_ + other.rows_, cols_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c)
                m(r, c) = (*this)(r, c);
        for (std::size_t r = 0; r < other.rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c)
                m(rows_ + r, c) = other(r, c);
        return m;
    }

    /// Block-diagonal sum diag(this, other).
    IntMatrix direct_sum(const IntMatrix& other) const
    {
        IntMatrix m(rows_ + other.rows_, cols_ + other.cols_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c)
                m(r, c) = (*this)(r, c);
        for (std::size_t r = 0; r < other.rows_; ++r)
            for (std::size_t c = 0; c < other.cols_; ++c)
                m(rows_ + r, cols_ + c) = other(r, c);
        return m;
    }

    // Elementary operations used by the Smith reduction.
    void swap_rows(std::size_t a, std::size_t b)
    {
        if (a == b)
            return;
        for (std::size_t c = 0; c < cols_; ++c)
            std::swap((*this)(a, c), (*this)(b, c));
    }

    void swap_cols(std::size_t a, std::size_t b)
    {
        if (a == b)
            return;
        for (std::size_t r = 0; r < rows_; ++r)
            std::swap((*this)(r, a), (*this)(r, b));
    }

    /// row[dst] += factor * row[src]
    void add_row_multiple(std::size_t dst, std::size_t src, const Integer& factor)
    {
        for (std::size_t c = 0; c < cols_; ++c)
            (*this)(dst, c) += factor * (*this)(src, c);
    }

    /// col[dst] += factor * col[src]
    void add_col_multiple(std::size_t dst, std::size_t src, const Integer& factor)
    {
        for (std::size_t r = 0; r < rows_; ++r)
            (*this)(r, dst) += factor * (*this)(r, src);
    }

    void negate_row(std::size_t r)
    {
        for (std::size_t c = 0; c < cols_; ++c)
            (*this)(r, c) = -(*this)(r, c);
    }

    void negate_col(std::size_t c)
    {
        for (std::size_t r = 0; r < rows_; ++r)
            (*this)(r, c) = -(*this)(r, c);
    }

    friend bool operator==(const IntMatrix& a, const IntMatrix& b)
    {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
    }

    friend bool operator<(const IntMatrix& a, const IntMatrix& b)
    {
        if (a.rows_ != b.rows_)
            return a.rows_ < b.rows_;
        if (a.cols_ != b.cols_)
            return a.cols_ < b.cols_;
        return a.entries_ < b.entries_;
    }

    friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b)
    {
        if (a.cols_ != b.rows_)
            throw Error(ErrorCode::ShapeMismatch, "matrix product inner dimensions differ");
        IntMatrix p(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const Integer& aik = a(i, k);
                if (aik == 0)
                    continue;
                for (std::size_t j = 0; j < b.cols_; ++j)
                    p(i, j) += aik * b(k, j);
            }
        return p;
    }

    friend std::vector<Integer> operator*(const IntMatrix& a, std::span<const Integer> v)
    {
        if (a.cols_ != v.size())
            throw Error(ErrorCode::ShapeMismatch, "matrix-vector dimensions differ");
        std::vector<Integer> out(a.rows_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k)
                out[i] += a(i, k) * v[k];
        return out;
    }

    friend IntMatrix operator+(IntMatrix a, const IntMatrix& b)
    {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
            throw Error(ErrorCode::ShapeMismatch, "matrix sum shapes differ");
        for (std::size_t i = 0; i < a.entries_.size(); ++i)
            a.entries_[i] += b.entries_[i];
        return a;
    }

    friend IntMatrix operator-(IntMatrix a, const IntMatrix& b)
    {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
            throw Error(ErrorCode::ShapeMismatch, "matrix difference shapes differ");
        for (std::size_t i = 0; i < a.entries_.size(); ++i)
            a.entries_[i] -= b.entries_[i];
        return a;
    }

    friend IntMatrix operator*(const Integer& s, IntMatrix a)
    {
        for (auto& e : a.entries_)
            e *= s;
        return a;
    }

    friend std::ostream& operator<<(std::ostream& os, const IntMatrix& m)
    {
        os << '[';
        for (std::size_t r = 0; r < m.rows_; ++r) {
            os << (r ? ", [" : "[");
            for (std::size_t c = 0; c < m.cols_; ++c)
                os << (c ? ", " : "") << m(r, c);
            os << ']';
        }
        return os << ']';
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Integer> entries_;
};

} // namespace wes
