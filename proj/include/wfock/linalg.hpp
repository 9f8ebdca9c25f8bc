#pragma once

#include "wfock/errors.hpp"
#include "wfock/rational.hpp"

#include <optional>
#include <vector>

namespace wfock {

/// Dense matrix over exact complex rationals; desk-scale only.
struct QMatrix {
    int rows = 0, cols = 0;
    std::vector<GC> a;  // row-major

    QMatrix() = default;
    QMatrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c) {}

    GC& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
    const GC& at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }

    QMatrix conj_transpose() const {
        QMatrix t(cols, rows);
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c) t.at(c, r) = at(r, c).conj();
        return t;
    }

    friend QMatrix operator*(const QMatrix& x, const QMatrix& y) {
        QMatrix z(x.rows, y.cols);
        for (int i = 0; i < x.rows; ++i)
            for (int k = 0; k < x.cols; ++k) {
                const GC& v = x.at(i, k);
                if (v.is_zero()) continue;
                for (int j = 0; j < y.cols; ++j) z.at(i, j) += v * y.at(k, j);
            }
        return z;
    }
};

using QVector = std::vector<GC>;

inline QVector mat_vec(const QMatrix& m, const QVector& v) {
    QVector r(m.rows);
    for (int i = 0; i < m.rows; ++i) {
        GC acc(0);
        for (int j = 0; j < m.cols; ++j)
            if (!m.at(i, j).is_zero()) acc += m.at(i, j) * v[j];
        r[i] = acc;
    }
    return r;
}

/// Solves M x = b by exact Gaussian elimination with partial (nonzero) pivoting.
/// Returns nullopt when M is singular.
inline std::optional<QVector> solve_exact(QMatrix M, QVector b) {
    int n = M.rows;
    if (M.cols != n || static_cast<int>(b.size()) != n)
        throw std::invalid_argument("solve_exact: shape mismatch");
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int r = col; r < n; ++r)
            if (!M.at(r, col).is_zero()) { piv = r; break; }
        if (piv < 0) return std::nullopt;
        if (piv != col) {
            for (int c = 0; c < n; ++c) std::swap(M.at(piv, c), M.at(col, c));
            std::swap(b[piv], b[col]);
        }
        GC inv = GC(1) / M.at(col, col);
        for (int r = col + 1; r < n; ++r) {
            if (M.at(r, col).is_zero()) continue;
            GC f = M.at(r, col) * inv;
            M.at(r, col) = GC(0);
            for (int c = col + 1; c < n; ++c) M.at(r, c) -= f * M.at(col, c);
            b[r] -= f * b[col];
        }
    }
    QVector x(n);
    for (int r = n - 1; r >= 0; --r) {
        GC acc = b[r];
        for (int c = r + 1; c < n; ++c) acc -= M.at(r, c) * x[c];
        x[r] = acc / M.at(r, r);
    }
    return x;
}

/// Exact affine solve of A x = b: a particular solution plus a nullspace basis.
/// Returns nullopt when the system is inconsistent.
struct AffineSolution {
    QVector particular;
    std::vector<QVector> nullspace;  // basis columns
};

inline std::optional<AffineSolution> solve_affine(QMatrix A, QVector b) {
    int m = A.rows, n = A.cols;
    if (static_cast<int>(b.size()) != m) throw std::invalid_argument("solve_affine: shape mismatch");
    std::vector<int> pivot_col;  // pivot column of each used row
    int row = 0;
    for (int col = 0; col < n && row < m; ++col) {
        int piv = -1;
        for (int r = row; r < m; ++r)
            if (!A.at(r, col).is_zero()) { piv = r; break; }
        if (piv < 0) continue;
        if (piv != row) {
            for (int c = 0; c < n; ++c) std::swap(A.at(piv, c), A.at(row, c));
            std::swap(b[piv], b[row]);
        }
        GC inv = GC(1) / A.at(row, col);
        for (int c = col; c < n; ++c) A.at(row, c) = A.at(row, c) * inv;
        b[row] = b[row] * inv;
        for (int r = 0; r < m; ++r) {
            if (r == row || A.at(r, col).is_zero()) continue;
            GC f = A.at(r, col);
            for (int c = col; c < n; ++c) A.at(r, c) -= f * A.at(row, c);
            b[r] -= f * b[row];
        }
        pivot_col.push_back(col);
        ++row;
    }
    for (int r = row; r < m; ++r)
        if (!b[r].is_zero()) return std::nullopt;  // inconsistent

    AffineSolution sol;
    sol.particular.assign(n, GC(0));
    for (int i = 0; i < static_cast<int>(pivot_col.size()); ++i)
        sol.particular[pivot_col[i]] = b[i];

    std::vector<bool> is_pivot(n, false);
    for (int c : pivot_col) is_pivot[c] = true;
    for (int freec = 0; freec < n; ++freec) {
        if (is_pivot[freec]) continue;
        QVector v(n, GC(0));
        v[freec] = GC(1);
        for (int i = 0; i < static_cast<int>(pivot_col.size()); ++i)
            v[pivot_col[i]] = -A.at(i, freec);
        sol.nullspace.push_back(std::move(v));
    }
    return sol;
}

}  // namespace wfock
