#pragma once

#include "wes/int_matrix.hpp"

#include <algorithm>
#include <optional>
#include <vector>

namespace wes {

/// Smith decomposition U * M * V = D with U, V unimodular. The inverses of
/// U and V are tracked alongside so callers never need a separate inversion.
struct SnfResult {
    IntMatrix U;
    IntMatrix D;
    IntMatrix V;
    IntMatrix U_inv;
    IntMatrix V_inv;

    /// Number of nonzero diagonal entries.
    std::size_t rank() const
    {
        std::size_t k = 0;
        while (k < std::min(D.rows(), D.cols()) && D(k, k) != 0)
            ++k;
        return k;
    }

    std::vector<Integer> diagonal() const
    {
        std::vector<Integer> d;
        for (std::size_t k = 0; k < std::min(D.rows(), D.cols()); ++k)
            d.push_back(D(k, k));
        return d;
    }
};

namespace detail {

struct SnfWork {
    IntMatrix A, U, U_inv, V, V_inv;

    void swap_rows(std::size_t a, std::size_t b)
    {
        A.swap_rows(a, b);
        U.swap_rows(a, b);
        U_inv.swap_cols(a, b);
    }
    void swap_cols(std::size_t a, std::size_t b)
    {
        A.swap_cols(a, b);
        V.swap_cols(a, b);
        V_inv.swap_rows(a, b);
    }
    // row[dst] += f * row[src]
    void add_row(std::size_t dst, std::size_t src, const Integer& f)
    {
        A.add_row_multiple(dst, src, f);
        U.add_row_multiple(dst, src, f);
        U_inv.add_col_multiple(src, dst, -f);
    }
    // col[dst] += f * col[src]
    void add_col(std::size_t dst, std::size_t src, const Integer& f)
    {
        A.add_col_multiple(dst, src, f);
        V.add_col_multiple(dst, src, f);
        V_inv.add_row_multiple(src, dst, -f);
    }
    void negate_row(std::size_t r)
    {
        A.negate_row(r);
        U.negate_row(r);
        U_inv.negate_col(r);
    }
};

} // namespace detail

/// Smith normal form with a fixed pivot rule: at each stage the pivot is the
/// nonzero entry of smallest absolute value in the trailing submatrix, ties
/// broken row-major. The transforms are therefore reproducible bit for bit.
inline SnfResult snf(const IntMatrix& M)
{
    const std::size_t m = M.rows(), n = M.cols();
    detail::SnfWork w{M, IntMatrix::identity(m), IntMatrix::identity(m), IntMatrix::identity(n),
                      IntMatrix::identity(n)};
    auto& A = w.A;

    for (std::size_t k = 0; k < std::min(m, n); ++k) {
        bool zero_tail = false;
        for (;;) {
            // pivot search
            std::size_t pi = m, pj = n;
            Integer best;
            for (std::size_t i = k; i < m; ++i)
                for (std::size_t j = k; j < n; ++j) {
                    if (A(i, j) == 0)
                        continue;
                    Integer a = abs_value(A(i, j));
                    if (pi == m || a < best) {
                        best = a;
                        pi = i;
                        pj = j;
                    }
                }
            if (pi == m) {
                zero_tail = true;
                break;
            }
            w.swap_rows(k, pi);
            w.swap_cols(k, pj);

            bool remainder = false;
            for (std::size_t i = k + 1; i < m; ++i) {
                if (A(i, k) == 0)
                    continue;
                Integer q = A(i, k) / A(k, k);
                if (q != 0)
                    w.add_row(i, k, -q);
                if (A(i, k) != 0)
                    remainder = true;
            }
            for (std::size_t j = k + 1; j < n; ++j) {
                if (A(k, j) == 0)
                    continue;
                Integer q = A(k, j) / A(k, k);
                if (q != 0)
                    w.add_col(j, k, -q);
                if (A(k, j) != 0)
                    remainder = true;
            }
            if (remainder)
                continue;

            // divisibility: pull an offending row into row k and retry
            bool fixed = false;
            for (std::size_t i = k + 1; i < m && !fixed; ++i)
                for (std::size_t j = k + 1; j < n; ++j)
                    if (A(i, j) % A(k, k) != 0) {
                        w.add_row(k, i, 1);
                        fixed = true;
                        break;
                    }
            if (!fixed)
                break;
        }
        if (zero_tail)
            break;
        if (A(k, k) < 0)
            w.negate_row(k);
    }
    return SnfResult{std::move(w.U), std::move(w.A), std::move(w.V), std::move(w.U_inv), std::move(w.V_inv)};
}

/// Columns form a basis of the integer kernel {x : M x = 0}.
inline IntMatrix integer_kernel(const IntMatrix& M)
{
    SnfResult s = snf(M);
    const std::size_t r = s.rank();
    IntMatrix K(M.cols(), M.cols() - r);
    for (std::size_t j = r; j < M.cols(); ++j)
        for (std::size_t i = 0; i < M.cols(); ++i)
            K(i, j - r) = s.V(i, j);
    return K;
}

/// Some integer x with M x = b, or nullopt when none exists.
inline std::optional<std::vector<Integer>> solve_integer(const IntMatrix& M, std::span<const Integer> b)
{
    if (b.size() != M.rows())
        throw Error(ErrorCode::ShapeMismatch, "right-hand side length differs from row count");
    SnfResult s = snf(M);
    std::vector<Integer> c = s.U * b;
    const std::size_t r = s.rank();
    std::vector<Integer> y(M.cols());
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i < r) {
            if (c[i] % s.D(i, i) != 0)
                return std::nullopt;
            y[i] = c[i] / s.D(i, i);
        } else if (c[i] != 0) {
            return std::nullopt;
        }
    }
    return s.V * std::span<const Integer>(y);
}

} // namespace wes
