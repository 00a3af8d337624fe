#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ffframes/geometry.hpp"

namespace ff {

/// A vector system identified with its synthesis operator: an ambient space
/// plus a d x n matrix whose columns are the vectors. Gram matrix, analysis
/// operator and frame operator are computed eagerly; everything is immutable
/// afterwards.
struct FrameSystem {
    HermitianSpace space;
    Matrix synthesis;  // d x n
    Matrix analysis;   // n x d, the adjoint Phi* M (F^n carries the dot product)
    Matrix gram;       // n x n
    Matrix frame_op;   // d x d

    int n() const { return synthesis.cols; }
    int d() const { return space.dim; }
    const FieldPtr& field() const { return space.F; }
    Elem g(int j, int k) const { return gram.at(j, k); }  // 0-based
};

inline FrameSystem frame_make(const HermitianSpace& V, const Matrix& synthesis) {
    require(synthesis.F && synthesis.F->same_field(*V.F), errc::shape_mismatch,
            "synthesis over a different field than the space");
    require(synthesis.rows == V.dim, errc::dimension_mismatch,
            "synthesis must have one row per space dimension");
    FrameSystem fs;
    fs.space = V;
    fs.synthesis = synthesis;
    fs.analysis = matmul(conj_transpose(synthesis), V.form);
    fs.gram = matmul(fs.analysis, synthesis);
    fs.frame_op = matmul(synthesis, fs.analysis);
    return fs;
}

/// The subsystem on the given 0-based column indices, in the same space.
inline FrameSystem sub_system(const FrameSystem& fs, const std::vector<int>& cols) {
    std::vector<int> rows(fs.d());
    for (int i = 0; i < fs.d(); ++i) rows[i] = i;
    return frame_make(fs.space, submatrix(fs.synthesis, rows, cols));
}

struct TightnessReport {
    bool is_frame_for_ambient = false;
    bool is_frame_for_span = false;
    int span_dim = 0;
    bool tight = false;
    Elem c;
    bool ambiguous_c = false;  // only the all-zero synthesis admits several c
    bool totally_isotropic_tight = false;
};

/// Frame / tightness status. Tightness is decided by the direct operator test:
/// Phi Phi-dagger Phi = c Phi together with rank(Gram) = rank(Phi), which
/// restricts to Phi Phi-dagger = cI on the span (and on the ambient space when
/// the system is a frame for it).
inline TightnessReport frame_status(const FrameSystem& fs) {
    const Field& F = *fs.field();
    TightnessReport rep;
    rep.span_dim = rank_of(fs.synthesis);
    rep.is_frame_for_ambient = rep.span_dim == fs.d();
    rep.is_frame_for_span = rank_of(fs.gram) == rep.span_dim;
    rep.c = F.zero();

    Matrix t = matmul(fs.frame_op, fs.synthesis);
    if (is_zero_matrix(fs.synthesis)) {
        rep.tight = true;
        rep.ambiguous_c = true;
    } else {
        Elem c{};
        bool found = false;
        for (int i = 0; i < fs.synthesis.rows && !found; ++i)
            for (int j = 0; j < fs.synthesis.cols && !found; ++j)
                if (!F.is_zero(fs.synthesis.at(i, j))) {
                    c = F.div(t.at(i, j), fs.synthesis.at(i, j));
                    found = true;
                }
        rep.tight = rep.is_frame_for_span && t == scale(fs.synthesis, c);
        if (rep.tight) rep.c = c;
    }
    rep.totally_isotropic_tight = rep.tight && F.is_zero(rep.c);
    return rep;
}

struct EquiangularParams {
    Elem a;  // common norm
    Elem b;  // common pairwise product <phi_j,phi_k><phi_k,phi_j>
};

/// (a,b) when the Gram diagonal is constant and all off-diagonal pair
/// products agree; nullopt otherwise (and for n < 2, where b is undefined).
inline std::optional<EquiangularParams> equiangular_of(const FrameSystem& fs) {
    const Field& F = *fs.field();
    int n = fs.n();
    if (n < 2) return std::nullopt;
    Elem a = fs.g(0, 0);
    for (int j = 1; j < n; ++j)
        if (fs.g(j, j) != a) return std::nullopt;
    Elem b = F.mul(fs.g(0, 1), fs.g(1, 0));
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k)
            if (F.mul(fs.g(j, k), fs.g(k, j)) != b) return std::nullopt;
    return EquiangularParams{a, b};
}

struct EtfReport {
    EquiangularParams params;
    Elem c;
    bool welch_holds = false;
    bool triple_sum_holds = false;
    bool verdict = false;
    bool criteria_applicable = false;   // Char > span_dim and na/d != 0
    bool certified_by_criteria = false; // Welch + triple sums alone certify tightness
    std::vector<std::pair<int, int>> triple_sum_failures;  // 1-based pairs
    std::vector<std::string> failure_reasons;
    TightnessReport tightness;
};

/// Full ETF verification: direct tightness (authoritative), the
/// characteristic-free Welch identity a^2(n-d) = d(n-1)b, and the triple-sum
/// criterion sum_l Delta(j,k,l) = nab/d for all j != k. The criteria-only
/// certification is reported separately.
inline EtfReport etf_verify(const FrameSystem& fs) {
    const Field& F = *fs.field();
    auto eq = equiangular_of(fs);
    require(eq.has_value(), errc::not_equiangular, "system is not equiangular");

    EtfReport rep;
    rep.params = *eq;
    rep.tightness = frame_status(fs);
    int n = fs.n();
    int d = rep.tightness.span_dim;
    Elem a = eq->a, b = eq->b;

    Elem lhs = F.mul(F.mul(a, a), F.from_int(n - d));
    Elem rhs = F.mul(F.mul(F.from_int(d), F.from_int(n - 1)), b);
    rep.welch_holds = lhs == rhs;

    // Triple-sum target nab/d (equivalently cb). When char | d, fall back to
    // the direct c if tight.
    std::optional<Elem> c_formula;
    if (!F.is_zero(F.from_int(d)))
        c_formula = F.div(F.mul(F.from_int(n), a), F.from_int(d));
    std::optional<Elem> target;
    if (c_formula)
        target = F.mul(*c_formula, b);
    else if (rep.tightness.tight)
        target = F.mul(rep.tightness.c, b);

    if (target) {
        Matrix g2 = matmul(fs.gram, fs.gram);
        rep.triple_sum_holds = true;
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                if (j == k) continue;
                Elem sum = F.mul(fs.g(j, k), g2.at(k, j));
                if (sum != *target) {
                    rep.triple_sum_holds = false;
                    rep.triple_sum_failures.emplace_back(j + 1, k + 1);
                }
            }
    } else {
        rep.triple_sum_holds = false;
        rep.failure_reasons.push_back("triple_sum_target_undefined");
    }

    rep.criteria_applicable =
        c_formula.has_value() && !F.is_zero(*c_formula) && F.characteristic() > d;
    rep.certified_by_criteria =
        rep.criteria_applicable && rep.welch_holds && rep.triple_sum_holds;

    rep.verdict = rep.tightness.tight;
    rep.c = rep.tightness.tight ? rep.tightness.c
                                : (c_formula ? *c_formula : F.zero());

    if (!rep.tightness.is_frame_for_span) rep.failure_reasons.push_back("not_frame_for_span");
    if (!rep.tightness.tight) rep.failure_reasons.push_back("not_tight");
    if (!rep.welch_holds) rep.failure_reasons.push_back("welch_identity_fails");
    if (!rep.triple_sum_holds && target) rep.failure_reasons.push_back("triple_sum_fails");
    return rep;
}

/// Vectors in an r = rank(G)-dimensional space whose pairwise products
/// reproduce G exactly. Case O ambient form is diag(1,...,1,delta) with delta
/// matching the discriminant of G; Case U ambient form is the identity. An
/// explicit larger ambient dimension embeds by zero padding.
inline FrameSystem gram_realize(const Matrix& G, std::optional<int> ambient_dim = {}) {
    require(is_hermitian(G), errc::not_hermitian, "Gram input is not Hermitian");
    const FieldPtr& F = G.F;
    int n = G.cols;
    int r = rank_of(G);

    Matrix synthesis(F, r, n);
    Matrix form = Matrix::identity(F, r);
    if (r > 0) {
        BasicSubmatrix bs = basic_submatrix(G);
        require(static_cast<int>(bs.indices.size()) == r, errc::inconsistent_rank,
                "invertible principal block does not span the column space");
        DiagForm df = diagonalize_form(space_make(bs.sub));
        form = Matrix::zero(F, r, r);
        for (int i = 0; i < r; ++i) form.at(i, i) = df.diag[i];
        Matrix Q = inverse(df.basis);  // G_b = Q* form Q
        std::vector<int> all_rows(n);
        for (int i = 0; i < n; ++i) all_rows[i] = i;
        Matrix ck = submatrix(G, all_rows, bs.indices);
        auto X = solve_columns(ck, G);  // linear dependencies of every column on K
        require(X.has_value(), errc::inconsistent_rank, "columns escape the basic column space");
        synthesis = matmul(Q, *X);
    }

    FrameSystem fs = frame_make(space_make(form), synthesis);
    require(fs.gram == G, errc::inconsistent_rank, "realized Gram does not reproduce the input");

    if (ambient_dim && *ambient_dim > r) {
        int a = *ambient_dim;
        bool trailing_delta = r > 0 && form.at(r - 1, r - 1) != F->one();
        Matrix big_form = Matrix::identity(F, a);
        Matrix big_synth = Matrix::zero(F, a, n);
        for (int i = 0; i + (trailing_delta ? 1 : 0) < r; ++i)
            for (int j = 0; j < n; ++j) big_synth.at(i, j) = synthesis.at(i, j);
        if (trailing_delta) {
            big_form.at(a - 1, a - 1) = form.at(r - 1, r - 1);
            for (int j = 0; j < n; ++j) big_synth.at(a - 1, j) = synthesis.at(r - 1, j);
        }
        fs = frame_make(space_make(big_form), big_synth);
        require(fs.gram == G, errc::inconsistent_rank, "embedded Gram does not reproduce the input");
    } else if (ambient_dim && *ambient_dim < r) {
        raise(errc::dimension_mismatch, "ambient dimension below rank of the Gram");
    }
    return fs;
}

/// Discriminant of the span of the columns, as a subspace of the ambient
/// space: square class of the Gram determinant of any basis of the span.
inline Discriminant span_discriminant(const FrameSystem& fs) {
    Matrix basis = cr_decompose(fs.synthesis).C;
    Matrix gram_w = matmul(conj_transpose(basis), matmul(fs.space.form, basis));
    if (basis.cols == 0) return {SquareClass::square, fs.field()->one()};
    Elem det = determinant(gram_w);
    return {fs.field()->square_class(det), det};
}

/// Naimark complement: Psi with c I = Phi-dagger Phi + Psi-dagger Psi and
/// Psi Phi-dagger = 0, realized in dimension n - d. The optional scale factor
/// lambda builds Psi from lambda(cI - G) instead (lambda*c-tight, parameters
/// scale accordingly).
inline FrameSystem naimark_of(const FrameSystem& fs, std::optional<Elem> scale_factor = {}) {
    const Field& F = *fs.field();
    Elem lambda = scale_factor.value_or(F.one());
    require(!F.is_zero(lambda), errc::hypothesis_violated, "scale factor must be nonzero");

    TightnessReport ts = frame_status(fs);
    require(ts.tight, errc::not_tight, "Naimark complement needs a tight frame");
    require(!F.is_zero(ts.c), errc::zero_tight,
            "totally isotropic tight frames have no Naimark complement");

    int n = fs.n();
    int d = ts.span_dim;
    Matrix k = scale(matsub(Matrix::identity(fs.field(), n), scale(fs.gram, F.inv(ts.c))), F.mul(lambda, ts.c));
    // k = lambda * (c I - G)
    FrameSystem psi = gram_realize(k);

    require(rank_of(psi.synthesis) == n - d, errc::complement_verification_failed,
            "complement dimension is not n - d");
    require(is_zero_matrix(matmul(psi.synthesis, fs.analysis)),
            errc::complement_verification_failed, "Psi Phi-dagger does not vanish");

    TightnessReport tpsi = frame_status(psi);
    require(tpsi.tight && tpsi.c == F.mul(lambda, ts.c), errc::complement_verification_failed,
            "complement is not c-tight");

    if (auto eq = equiangular_of(fs); eq && etf_verify(fs).verdict && n - d >= 1 && n >= 2) {
        auto eq_psi = equiangular_of(psi);
        require(eq_psi.has_value(), errc::complement_verification_failed,
                "complement of an ETF is not equiangular");
        Elem want_a = F.mul(lambda, F.sub(ts.c, eq->a));
        Elem want_b = F.mul(F.mul(lambda, lambda), eq->b);
        require(eq_psi->a == want_a && eq_psi->b == want_b && etf_verify(psi).verdict,
                errc::complement_verification_failed,
                "complement of an ETF is not a (c-a, b, c)-ETF");
    }

    if (!F.case_u() && !scale_factor.has_value()) {
        // discr(image Psi) = c^n discr(V), V the space Phi is tight for.
        Discriminant lhs = span_discriminant(psi);
        Discriminant rhs_base = ts.is_frame_for_ambient ? discriminant_of(fs.space)
                                                        : span_discriminant(fs);
        SquareClass rhs = F.square_class(F.pow(ts.c, static_cast<unsigned long long>(n))) * rhs_base.cls;
        require(lhs.cls == rhs, errc::complement_verification_failed,
                "discriminant law c^n discr(V) fails");
    }
    return psi;
}

struct GerzonReport {
    long long bound = 0;
    bool within = false;
    bool saturated = false;
};

/// Absolute bound n <= d + k/2 (d^2 - d), k = 1 in Case O and 2 in Case U.
/// Requires a^2 != b.
inline GerzonReport gerzon_check(int n, int d, const FieldPtr& F, const EquiangularParams& params) {
    require(F->mul(params.a, params.a) != params.b, errc::hypothesis_violated,
            "Gerzon bound needs a^2 != b");
    long long k = F->case_u() ? 2 : 1;
    long long dd = d;
    GerzonReport rep;
    rep.bound = dd + k * (dd * dd - dd) / 2;
    rep.within = n <= rep.bound;
    rep.saturated = n == rep.bound;
    return rep;
}

}  // namespace ff
