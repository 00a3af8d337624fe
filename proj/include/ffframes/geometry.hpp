#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "ffframes/linalg.hpp"

namespace ff {

/// A non-degenerate Hermitian scalar-product space: dimension d plus an
/// invertible Hermitian Gram matrix M defining <u,v> = u* M v.
struct HermitianSpace {
    FieldPtr F;
    int dim = 0;
    Matrix form;

    bool case_u() const { return F->case_u(); }
};

inline bool is_hermitian(const Matrix& m) {
    return m.is_square() && conj_transpose(m) == m;
}

inline HermitianSpace space_make(const Matrix& form) {
    require(is_hermitian(form), errc::not_hermitian, "form is not Hermitian");
    require(!form.F->is_zero(determinant(form)), errc::degenerate, "form is singular");
    return
        HermitianSpace{form.F, form.rows, form};
}

inline HermitianSpace standard_space(const FieldPtr& F, int dim) {
    return HermitianSpace{F, dim, Matrix::identity(F, dim)};
}

inline Elem scalar_product(const HermitianSpace& V, const std::vector<Elem>& u,
                           const std::vector<Elem>& v) {
    require(static_cast<int>(u.size()) == V.dim && static_cast<int>(v.size()) == V.dim,
            errc::dimension_mismatch, "vector length does not match the space dimension");
    const Field& F = *V.F;
    Elem acc = F.zero();
    for (int i = 0; i < V.dim; ++i) {
        Elem mv = F.zero();
        for (int j = 0; j < V.dim; ++j) mv = F.add(mv, F.mul(V.form.at(i, j), v[j]));
        acc = F.add(acc, F.mul(F.involve(u[i]), mv));
    }
    return acc;
}

/// Unique adjoint of A : domain -> codomain, i.e. M^{-1} A* N.
inline Matrix adjoint_of(const Matrix& A, const HermitianSpace& domain,
                         const HermitianSpace& codomain) {
    require(A.rows == codomain.dim && A.cols == domain.dim, errc::dimension_mismatch,
            "map shape does not match the spaces");
    return matmul(inverse(domain.form), matmul(conj_transpose(A), codomain.form));
}

/// Columns of A and B span subspaces of the same F^d; returns a basis of the
/// intersection.
inline Matrix subspace_intersection(const Matrix& A, const Matrix& B) {
    check_same_field(A, B);
    require(A.rows == B.rows, errc::dimension_mismatch, "ambient dimensions differ");
    Matrix stacked(A.F, A.rows, A.cols + B.cols);
    for (int i = 0; i < A.rows; ++i) {
        for (int j = 0; j < A.cols; ++j) stacked.at(i, j) = A.at(i, j);
        for (int j = 0; j < B.cols; ++j) stacked.at(i, A.cols + j) = A.F->neg(B.at(i, j));
    }
    auto rk = rank_kernel(stacked);
    std::vector<int> top(A.cols);
    for (int i = 0; i < A.cols; ++i) top[i] = i;
    std::vector<int> all(rk.kernel_basis.cols);
    for (int j = 0; j < rk.kernel_basis.cols; ++j) all[j] = j;
    Matrix coeff = submatrix(rk.kernel_basis, top, all);
    Matrix vecs = matmul(A, coeff);
    auto cr = cr_decompose(vecs);
    return cr.C;
}

inline bool same_subspace(const Matrix& A, const Matrix& B) {
    check_same_field(A, B);
    if (A.rows != B.rows) return false;
    int ra = rank_of(A), rb = rank_of(B);
    if (ra != rb) return false;
    Matrix stacked(A.F, A.rows, A.cols + B.cols);
    for (int i = 0; i < A.rows; ++i) {
        for (int j = 0; j < A.cols; ++j) stacked.at(i, j) = A.at(i, j);
        for (int j = 0; j < B.cols; ++j) stacked.at(i, A.cols + j) = B.at(i, j);
    }
    return rank_of(stacked) == ra;
}

struct SubspaceReport {
    Matrix basis;                  // reduced basis of W (first independent input columns)
    Matrix orth_complement_basis;  // basis of W-perp
    Matrix radical_basis;          // basis of W intersect W-perp
    int dim = 0;
    int radical_dim = 0;
    bool nonisotropic = false;
    bool isotropic = false;
    bool totally_isotropic = false;
};

inline SubspaceReport subspace_analyze(const HermitianSpace& V, const Matrix& basis) {
    require(basis.rows == V.dim, errc::dimension_mismatch,
            "basis columns do not live in the space");
    SubspaceReport rep;
    rep.basis = cr_decompose(basis).C;
    rep.dim = rep.basis.cols;
    // W-perp = kernel of v -> (<w_i, v>)_i
    Matrix pairing = matmul(conj_transpose(rep.basis), V.form);
    rep.orth_complement_basis = rank_kernel(pairing).kernel_basis;
    rep.radical_basis = subspace_intersection(rep.basis, rep.orth_complement_basis);
    rep.radical_dim = rep.radical_basis.cols;
    rep.nonisotropic = rep.radical_dim == 0;
    rep.isotropic = !rep.nonisotropic;
    rep.totally_isotropic = rep.dim > 0 && rep.radical_dim == rep.dim;
    return rep;
}

struct DiagForm {
    Matrix basis;            // P with P* M P diagonal
    std::vector<Elem> diag;  // the diagonal entries
};

namespace detail {

// Current Gram of the candidate basis P.
inline Matrix congruent_form(const Matrix& M0, const Matrix& P) {
    return matmul(conj_transpose(P), matmul(M0, P));
}

}  // namespace detail

/// Congruence diagonalization with the char != 2 pivot repair, then the
/// canonical normalization: Case U all ones; Case O ones with at most one
/// trailing canonical nonsquare.
inline DiagForm diagonalize_form(const HermitianSpace& V) {
    const Field& F = *V.F;
    const Matrix& M0 = V.form;
    int d = V.dim;
    Matrix P = Matrix::identity(V.F, d);

    for (int i = 0; i < d; ++i) {
        Matrix M = detail::congruent_form(M0, P);
        if (F.is_zero(M.at(i, i))) {
            int swap_j = -1;
            for (int j = i + 1; j < d; ++j)
                if (!F.is_zero(M.at(j, j))) {
                    swap_j = j;
                    break;
                }
            if (swap_j >= 0) {
                for (int r = 0; r < d; ++r) std::swap(P.at(r, i), P.at(r, swap_j));
            } else {
                int j = -1;
                for (int k = i + 1; k < d; ++k)
                    if (!F.is_zero(M.at(i, k))) {
                        j = k;
                        break;
                    }
                require(j >= 0, errc::degenerate, "form is singular");
                // v_i += lam * v_j with lam * M_ij + (lam * M_ij)^sigma != 0
                bool fixed = false;
                for (uint64_t t = 1; t < F.size() && !fixed; ++t) {
                    Elem lam = F.element_at(t);
                    Elem cand = F.add(F.mul(lam, M.at(i, j)),
                                      F.involve(F.mul(lam, M.at(i, j))));
                    cand = F.add(cand, F.mul(F.norm(lam), M.at(j, j)));
                    if (!F.is_zero(cand)) {
                        for (int r = 0; r < d; ++r)
                            P.at(r, i) = F.add(P.at(r, i), F.mul(lam, P.at(r, j)));
                        fixed = true;
                    }
                }
                require(fixed, errc::degenerate, "no polarization pivot found");
            }
            M = detail::congruent_form(M0, P);
        }
        Elem pivot = M.at(i, i);
        Elem pinv = F.inv(pivot);
        for (int j = i + 1; j < d; ++j) {
            Elem mu = F.mul(M.at(i, j), pinv);
            if (F.is_zero(mu)) continue;
            for (int r = 0; r < d; ++r) P.at(r, j) = F.sub(P.at(r, j), F.mul(mu, P.at(r, i)));
        }
    }

    // Normalize the diagonal.
    Matrix M = detail::congruent_form(M0, P);
    if (F.case_u()) {
        for (int i = 0; i < d; ++i) {
            Elem alpha = *F.norm_solve(M.at(i, i));
            Elem s = F.inv(alpha);
            for (int r = 0; r < d; ++r) P.at(r, i) = F.mul(P.at(r, i), s);
        }
    } else {
        std::vector<int> nonsquare_pos;
        for (int i = 0; i < d; ++i) {
            Elem di = M.at(i, i);
            if (F.square_class(di) == SquareClass::square) {
                Elem s = F.inv(*F.sqrt_or_none(di));
                for (int r = 0; r < d; ++r) P.at(r, i) = F.mul(P.at(r, i), s);
            } else {
                Elem delta = F.canonical_nonsquare();
                Elem s = F.inv(*F.sqrt_or_none(F.div(di, delta)));
                for (int r = 0; r < d; ++r) P.at(r, i) = F.mul(P.at(r, i), s);
                nonsquare_pos.push_back(i);
            }
        }
        // Sweep nonsquare pairs into squares: diag(delta, delta) represents 1.
        Elem delta = nonsquare_pos.empty() ? F.one() : F.canonical_nonsquare();
        while (nonsquare_pos.size() >= 2) {
            int i1 = nonsquare_pos[nonsquare_pos.size() - 2];
            int i2 = nonsquare_pos[nonsquare_pos.size() - 1];
            nonsquare_pos.pop_back();
            nonsquare_pos.pop_back();
            bool done = false;
            for (uint64_t tx = 0; tx < F.size() && !done; ++tx)
                for (uint64_t ty = 0; ty < F.size() && !done; ++ty) {
                    Elem x = F.element_at(tx), y = F.element_at(ty);
                    Elem val = F.mul(delta, F.add(F.mul(x, x), F.mul(y, y)));
                    if (val == F.one()) {
                        for (int r = 0; r < d; ++r) {
                            Elem c1 = P.at(r, i1), c2 = P.at(r, i2);
                            P.at(r, i1) = F.add(F.mul(x, c1), F.mul(y, c2));
                            P.at(r, i2) = F.add(F.mul(F.neg(y), c1), F.mul(x, c2));
                        }
                        done = true;
                    }
                }
            require(done, errc::degenerate, "binary form failed to represent 1");
        }
        // Park a leftover nonsquare in the last slot.
        if (!nonsquare_pos.empty() && nonsquare_pos[0] != d - 1) {
            int i = nonsquare_pos[0];
            for (int r = 0; r < d; ++r) std::swap(P.at(r, i), P.at(r, d - 1));
        }
    }

    M = detail::congruent_form(M0, P);
    DiagForm out{P, {}};
    out.diag.resize(d);
    for (int i = 0; i < d; ++i) out.diag[i] = M.at(i, i);
    return out;
}

struct Discriminant {
    SquareClass cls = SquareClass::zero;
    Elem representative;
};

/// Square class of det(M); for a singular Hermitian Gram the basic-submatrix
/// determinant is used.
inline Discriminant discriminant_of(const Matrix& gram) {
    require(is_hermitian(gram), errc::not_hermitian, "discriminant of a non-Hermitian matrix");
    Elem rep = determinant(gram);
    if (gram.F->is_zero(rep)) {
        auto bs = basic_submatrix(gram);
        rep = bs.indices.empty() ? gram.F->one() : determinant(bs.sub);
    }
    return {gram.F->square_class(rep), rep};
}

inline Discriminant discriminant_of(const HermitianSpace& V) { return discriminant_of(V.form); }

}  // namespace ff
