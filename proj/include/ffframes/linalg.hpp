#pragma once

#include <initializer_list>
#include <vector>

#include "ffframes/gf.hpp"

namespace ff {

/// Dense row-major matrix over a fixed field. All matrices in scope are tiny
/// (<= 32x32), so no attempt is made at anything asymptotically clever.
struct Matrix {
    FieldPtr F;
    int rows = 0, cols = 0;
    std::vector<Elem> a;

    Matrix() = default;
    Matrix(FieldPtr f, int r, int c) : F(std::move(f)), rows(r), cols(c), a(r * c) {}

    Elem& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
    Elem at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }

    bool is_square() const { return rows == cols; }

    static Matrix identity(FieldPtr f, int n) {
        Matrix m(f, n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = f->one();
        return m;
    }

    static Matrix zero(FieldPtr f, int r, int c) { return Matrix(std::move(f), r, c); }

    std::vector<Elem> column(int j) const {
        std::vector<Elem> v(rows);
        for (int i = 0; i < rows; ++i) v[i] = at(i, j);
        return v;
    }

    void set_column(int j, const std::vector<Elem>& v) {
        for (int i = 0; i < rows; ++i) at(i, j) = v[i];
    }

    friend bool operator==(const Matrix& x, const Matrix& y) {
        return x.rows == y.rows && x.cols == y.cols && x.a == y.a && x.F && y.F &&
               x.F->same_field(*y.F);
    }
    friend bool operator!=(const Matrix& x, const Matrix& y) { return !(x == y); }
};

/// Build a matrix from integer rows (entries embedded via from_int).
inline Matrix make_matrix(const FieldPtr& F, std::initializer_list<std::initializer_list<long long>> rows) {
    int r = static_cast<int>(rows.size());
    int c = r ? static_cast<int>(rows.begin()->size()) : 0;
    Matrix m(F, r, c);
    int i = 0;
    for (const auto& row : rows) {
        require(static_cast<int>(row.size()) == c, errc::shape_mismatch, "ragged rows");
        int j = 0;
        for (long long v : row) m.at(i, j++) = F->from_int(v);
        ++i;
    }
    return m;
}

inline void check_same_field(const Matrix& x, const Matrix& y) {
    require(x.F && y.F && x.F->same_field(*y.F), errc::shape_mismatch,
            "matrices live over different fields");
}

inline Matrix matmul(const Matrix& x, const Matrix& y) {
    check_same_field(x, y);
    require(x.cols == y.rows, errc::dimension_mismatch, "matmul shape mismatch");
    const Field& F = *x.F;
    Matrix r(x.F, x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            Elem xv = x.at(i, k);
            if (F.is_zero(xv)) continue;
            for (int j = 0; j < y.cols; ++j)
                r.at(i, j) = F.add(r.at(i, j), F.mul(xv, y.at(k, j)));
        }
    return r;
}

inline Matrix matadd(const Matrix& x, const Matrix& y) {
    check_same_field(x, y);
    require(x.rows == y.rows && x.cols == y.cols, errc::dimension_mismatch, "matadd shape mismatch");
    Matrix r = x;
    for (size_t i = 0; i < r.a.size(); ++i) r.a[i] = x.F->add(x.a[i], y.a[i]);
    return r;
}

inline Matrix matsub(const Matrix& x, const Matrix& y) {
    check_same_field(x, y);
    require(x.rows == y.rows && x.cols == y.cols, errc::dimension_mismatch, "matsub shape mismatch");
    Matrix r = x;
    for (size_t i = 0; i < r.a.size(); ++i) r.a[i] = x.F->sub(x.a[i], y.a[i]);
    return r;
}

inline Matrix scale(const Matrix& x, Elem c) {
    Matrix r = x;
    for (auto& v : r.a) v = x.F->mul(v, c);
    return r;
}

inline bool is_zero_matrix(const Matrix& x) {
    for (Elem v : x.a)
        if (!x.F->is_zero(v)) return false;
    return true;
}

/// Entrywise involution plus transpose.
inline Matrix conj_transpose(const Matrix& x) {
    Matrix r(x.F, x.cols, x.rows);
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < x.cols; ++j) r.at(j, i) = x.F->involve(x.at(i, j));
    return r;
}

inline Matrix submatrix(const Matrix& x, const std::vector<int>& rows, const std::vector<int>& cols) {
    Matrix r(x.F, static_cast<int>(rows.size()), static_cast<int>(cols.size()));
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < cols.size(); ++j) r.at(static_cast<int>(i), static_cast<int>(j)) = x.at(rows[i], cols[j]);
    return r;
}

struct Rref {
    Matrix rref;
    std::vector<int> pivot_cols;
    int rank = 0;
};

inline Rref row_reduce(const Matrix& m) {
    Rref out{m, {}, 0};
    Matrix& r = out.rref;
    const Field& F = *m.F;
    int lead = 0;
    for (int col = 0; col < r.cols && lead < r.rows; ++col) {
        int piv = -1;
        for (int i = lead; i < r.rows; ++i)
            if (!F.is_zero(r.at(i, col))) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        if (piv != lead)
            for (int j = 0; j < r.cols; ++j) std::swap(r.at(piv, j), r.at(lead, j));
        Elem s = F.inv(r.at(lead, col));
        for (int j = 0; j < r.cols; ++j) r.at(lead, j) = F.mul(r.at(lead, j), s);
        for (int i = 0; i < r.rows; ++i) {
            if (i == lead) continue;
            Elem f = r.at(i, col);
            if (F.is_zero(f)) continue;
            for (int j = 0; j < r.cols; ++j)
                r.at(i, j) = F.sub(r.at(i, j), F.mul(f, r.at(lead, j)));
        }
        out.pivot_cols.push_back(col);
        ++lead;
    }
    out.rank = static_cast<int>(out.pivot_cols.size());
    return out;
}

inline int rank_of(const Matrix& m) { return row_reduce(m).rank; }

struct RankKernel {
    int rank = 0;
    Matrix kernel_basis;  // cols x (cols - rank), columns span {x : Mx = 0}
};

inline RankKernel rank_kernel(const Matrix& m) {
    Rref rr = row_reduce(m);
    const Field& F = *m.F;
    std::vector<bool> is_pivot(m.cols, false);
    for (int c : rr.pivot_cols) is_pivot[c] = true;
    Matrix ker(m.F, m.cols, m.cols - rr.rank);
    int k = 0;
    for (int free = 0; free < m.cols; ++free) {
        if (is_pivot[free]) continue;
        ker.at(free, k) = F.one();
        for (int i = 0; i < rr.rank; ++i) ker.at(rr.pivot_cols[i], k) = F.neg(rr.rref.at(i, free));
        ++k;
    }
    return {rr.rank, std::move(ker)};
}

/// Exact determinant via Gaussian elimination (all arithmetic is in the field,
/// so there is nothing to round).
inline Elem determinant(const Matrix& m) {
    require(m.is_square(), errc::not_square_matrix, "determinant of a non-square matrix");
    const Field& F = *m.F;
    Matrix w = m;
    Elem det = F.one();
    for (int col = 0; col < w.cols; ++col) {
        int piv = -1;
        for (int i = col; i < w.rows; ++i)
            if (!F.is_zero(w.at(i, col))) {
                piv = i;
                break;
            }
        if (piv < 0) return F.zero();
        if (piv != col) {
            for (int j = 0; j < w.cols; ++j) std::swap(w.at(piv, j), w.at(col, j));
            det = F.neg(det);
        }
        det = F.mul(det, w.at(col, col));
        Elem s = F.inv(w.at(col, col));
        for (int i = col + 1; i < w.rows; ++i) {
            Elem f = F.mul(w.at(i, col), s);
            if (F.is_zero(f)) continue;
            for (int j = col; j < w.cols; ++j)
                w.at(i, j) = F.sub(w.at(i, j), F.mul(f, w.at(col, j)));
        }
    }
    return det;
}

inline bool is_invertible(const Matrix& m) {
    return m.is_square() && !m.F->is_zero(determinant(m));
}

inline Matrix inverse(const Matrix& m) {
    require(m.is_square(), errc::not_square_matrix, "inverse of a non-square matrix");
    const Field& F = *m.F;
    Matrix aug(m.F, m.rows, 2 * m.cols);
    for (int i = 0; i < m.rows; ++i) {
        for (int j = 0; j < m.cols; ++j) aug.at(i, j) = m.at(i, j);
        aug.at(i, m.cols + i) = F.one();
    }
    Rref rr = row_reduce(aug);
    require(rr.rank >= m.rows && (rr.pivot_cols.empty() || rr.pivot_cols[m.rows - 1] < m.cols),
            errc::degenerate, "matrix is singular");
    std::vector<int> right(m.cols);
    for (int j = 0; j < m.cols; ++j) right[j] = m.cols + j;
    std::vector<int> all_rows(m.rows);
    for (int i = 0; i < m.rows; ++i) all_rows[i] = i;
    return submatrix(rr.rref, all_rows, right);
}

struct CrDecomposition {
    Matrix C;  // n x r, the first independent columns in index order
    Matrix R;  // r x m, coefficients expressing every column in terms of C
    std::vector<int> pivot_cols;
};

inline CrDecomposition cr_decompose(const Matrix& m) {
    Rref rr = row_reduce(m);
    CrDecomposition out;
    out.pivot_cols = rr.pivot_cols;
    std::vector<int> all_rows(m.rows);
    for (int i = 0; i < m.rows; ++i) all_rows[i] = i;
    out.C = submatrix(m, all_rows, rr.pivot_cols);
    std::vector<int> top(rr.rank);
    for (int i = 0; i < rr.rank; ++i) top[i] = i;
    std::vector<int> all_cols(m.cols);
    for (int j = 0; j < m.cols; ++j) all_cols[j] = j;
    out.R = submatrix(rr.rref, top, all_cols);
    return out;
}

/// Exact solution X of A X = B, or nullopt when some column of B is outside
/// the column space of A. Free variables are set to zero.
inline std::optional<Matrix> solve_columns(const Matrix& A, const Matrix& B) {
    check_same_field(A, B);
    require(A.rows == B.rows, errc::dimension_mismatch, "solve shape mismatch");
    Matrix aug(A.F, A.rows, A.cols + B.cols);
    for (int i = 0; i < A.rows; ++i) {
        for (int j = 0; j < A.cols; ++j) aug.at(i, j) = A.at(i, j);
        for (int j = 0; j < B.cols; ++j) aug.at(i, A.cols + j) = B.at(i, j);
    }
    Rref rr = row_reduce(aug);
    for (int c : rr.pivot_cols)
        if (c >= A.cols) return std::nullopt;
    Matrix X(A.F, A.cols, B.cols);
    for (size_t i = 0; i < rr.pivot_cols.size(); ++i)
        for (int j = 0; j < B.cols; ++j)
            X.at(rr.pivot_cols[i], j) = rr.rref.at(static_cast<int>(i), A.cols + j);
    return X;
}

struct BasicSubmatrix {
    std::vector<int> indices;  // 0-based column/row set K
    Matrix sub;                // M restricted to K x K
};

namespace detail {
inline bool next_subset(std::vector<int>& s, int n) {
    int k = static_cast<int>(s.size());
    for (int i = k - 1; i >= 0; --i) {
        if (s[i] < n - (k - i)) {
            ++s[i];
            for (int j = i + 1; j < k; ++j) s[j] = s[j - 1] + 1;
            return true;
        }
    }
    return false;
}
}  // namespace detail

/// First column set (greedy in index order) forming a basis of the column
/// space, restricted to those rows and columns. For Hermitian inputs the
/// greedy block is always invertible; a lexicographic fallback search guards
/// everything else.
inline BasicSubmatrix basic_submatrix(const Matrix& m) {
    require(m.is_square(), errc::not_square_matrix, "basic submatrix of a non-square matrix");
    Rref rr = row_reduce(m);
    BasicSubmatrix out;
    out.indices = rr.pivot_cols;
    out.sub = submatrix(m, out.indices, out.indices);
    if (rr.rank == 0 || is_invertible(out.sub)) return out;
    std::vector<int> s(rr.rank);
    for (int i = 0; i < rr.rank; ++i) s[i] = i;
    do {
        std::vector<int> all_rows(m.rows);
        for (int i = 0; i < m.rows; ++i) all_rows[i] = i;
        if (rank_of(submatrix(m, all_rows, s)) != rr.rank) continue;
        Matrix cand = submatrix(m, s, s);
        if (is_invertible(cand)) {
            out.indices = s;
            out.sub = std::move(cand);
            return out;
        }
    } while (detail::next_subset(s, m.cols));
    raise(errc::no_invertible_principal_block, "no invertible principal block spans the column space");
}

}  // namespace ff
