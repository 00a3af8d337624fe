#include <catch2/catch_amalgamated.hpp>

#include "ffframes/geometry.hpp"
#include "test_util.hpp"

using namespace ff;
using fftest::random_matrix;

namespace {
FieldPtr f3 = field_make(3, 1);
FieldPtr f5 = field_make(5, 1);
FieldPtr f11 = field_make(11, 1);
FieldPtr f25 = field_make(5, 2, {1, 1, 1}, Involution::frobenius);

Matrix random_hermitian_invertible(const FieldPtr& F, int d, std::mt19937& rng) {
    while (true) {
        Matrix m(F, d, d);
        for (int i = 0; i < d; ++i) {
            // fixed diagonal
            while (true) {
                Elem x = fftest::random_elem(F, rng);
                if (F->is_fixed(x)) {
                    m.at(i, i) = x;
                    break;
                }
            }
            for (int j = i + 1; j < d; ++j) {
                Elem x = fftest::random_elem(F, rng);
                m.at(i, j) = x;
                m.at(j, i) = F->involve(x);
            }
        }
        if (is_invertible(m)) return m;
    }
}
}  // namespace

TEST_CASE("space validation") {
    Matrix form = make_matrix(f3, {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 2}});
    auto V = space_make(form);
    CHECK(V.dim == 4);

    CHECK_THROWS_MATCHES(space_make(make_matrix(f3, {{1, 0}, {0, 0}})), error,
                         Catch::Matchers::Predicate<error>(
                             [](const error& e) { return e.code() == errc::degenerate; }));
    CHECK_THROWS_MATCHES(space_make(make_matrix(f5, {{0, 1}, {2, 0}})), error,
                         Catch::Matchers::Predicate<error>(
                             [](const error& e) { return e.code() == errc::not_hermitian; }));
}

TEST_CASE("scalar products") {
    auto V = standard_space(f11, 2);
    CHECK(scalar_product(V, {f11->from_int(3), f11->from_int(5)},
                         {f11->from_int(8), f11->from_int(5)}) == f11->from_int(5));

    Matrix form = make_matrix(f5, {{1, 0}, {0, 3}});
    auto W = space_make(form);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            std::vector<Elem> ei(2, f5->zero()), ej(2, f5->zero());
            ei[i] = f5->one();
            ej[j] = f5->one();
            CHECK(scalar_product(W, ei, ej) == form.at(i, j));
        }

    // double-loop oracle over F_25 with conjugation
    std::mt19937 rng(17);
    Matrix uform = random_hermitian_invertible(f25, 3, rng);
    auto U = space_make(uform);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Elem> u(3), v(3);
        for (int i = 0; i < 3; ++i) {
            u[i] = fftest::random_elem(f25, rng);
            v[i] = fftest::random_elem(f25, rng);
        }
        Elem expect = f25->zero();
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                expect = f25->add(expect,
                                  f25->mul(f25->involve(u[i]), f25->mul(uform.at(i, j), v[j])));
        CHECK(scalar_product(U, u, v) == expect);
    }

    CHECK_THROWS_AS(scalar_product(V, {f11->one()}, {f11->one()}), error);
}

TEST_CASE("adjoints") {
    std::mt19937 rng(23);
    auto dom = standard_space(f5, 3);
    auto cod = standard_space(f5, 2);
    Matrix A = random_matrix(f5, 2, 3, rng);
    CHECK(adjoint_of(A, dom, cod) == conj_transpose(A));

    auto cod2 = space_make(make_matrix(f5, {{1, 0}, {0, 3}}));
    Matrix B = random_matrix(f5, 2, 3, rng);
    Matrix Bd = adjoint_of(B, dom, cod2);
    // adjoint identity on all basis pairs
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 2; ++j) {
            std::vector<Elem> ei(3, f5->zero()), ej(2, f5->zero());
            ei[i] = f5->one();
            ej[j] = f5->one();
            Elem lhs = scalar_product(cod2, B.column(i), ej);
            Elem rhs = scalar_product(dom, ei, Bd.column(j));
            CHECK(lhs == rhs);
        }
    CHECK(adjoint_of(Bd, cod2, dom) == B);

    auto U = space_make(random_hermitian_invertible(f25, 2, rng));
    Matrix C = random_matrix(f25, 2, 2, rng);
    CHECK(adjoint_of(adjoint_of(C, U, U), U, U) == C);
}

TEST_CASE("subspace analysis") {
    auto V5 = standard_space(f5, 2);
    Matrix w(f5, 2, 1);
    w.at(0, 0) = f5->one();
    w.at(1, 0) = f5->from_int(2);
    auto rep = subspace_analyze(V5, w);  // <(1,2),(1,2)> = 1 + 4 = 0
    CHECK(rep.totally_isotropic);
    CHECK(rep.radical_dim == 1);

    auto V = standard_space(f5, 4);
    Matrix e1(f5, 4, 1);
    e1.at(0, 0) = f5->one();
    auto r1 = subspace_analyze(V, e1);
    CHECK(r1.nonisotropic);
    CHECK(r1.orth_complement_basis.cols == 3);
    Matrix rest(f5, 4, 3);
    for (int i = 0; i < 3; ++i) rest.at(i + 1, i) = f5->one();
    CHECK(same_subspace(r1.orth_complement_basis, rest));

    auto rfull = subspace_analyze(V, Matrix::identity(f5, 4));
    CHECK(rfull.nonisotropic);
    CHECK(rfull.radical_dim == 0);
    CHECK(rfull.orth_complement_basis.cols == 0);

    // W == W-perp-perp on random subspaces of F_5^4
    std::mt19937 rng(29);
    for (int trial = 0; trial < 30; ++trial) {
        Matrix basis = random_matrix(f5, 4, 1 + trial % 3, rng);
        auto r = subspace_analyze(V, basis);
        auto rperp = subspace_analyze(V, r.orth_complement_basis);
        CHECK(r.dim + r.orth_complement_basis.cols == 4);
        CHECK(same_subspace(rperp.orth_complement_basis, r.basis));
    }
}

TEST_CASE("form diagonalization") {
    auto V = space_make(make_matrix(f3, {{2, 0}, {0, 2}}));
    auto d = diagonalize_form(V);
    Matrix final_form = matmul(conj_transpose(d.basis), matmul(V.form, d.basis));
    CHECK(final_form == Matrix::identity(f3, 2));

    auto Vid = standard_space(f5, 3);
    auto did = diagonalize_form(Vid);
    CHECK(did.basis == Matrix::identity(f5, 3));

    std::mt19937 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        auto U = space_make(random_hermitian_invertible(f25, 3, rng));
        auto du = diagonalize_form(U);
        CHECK(matmul(conj_transpose(du.basis), matmul(U.form, du.basis)) ==
              Matrix::identity(f25, 3));
    }

    // Case O: P*MP diagonal, entries 1..1,delta; diagonal product in the same
    // square class as det(M).
    for (const auto& F : {f3, f5, f11}) {
        for (int trial = 0; trial < 30; ++trial) {
            int dim = 1 + trial % 4;
            auto S = space_make(random_hermitian_invertible(F, dim, rng));
            auto ds = diagonalize_form(S);
            Matrix got = matmul(conj_transpose(ds.basis), matmul(S.form, ds.basis));
            for (int i = 0; i < dim; ++i)
                for (int j = 0; j < dim; ++j)
                    if (i != j) CHECK(F->is_zero(got.at(i, j)));
            Elem prod = F->one();
            for (int i = 0; i < dim; ++i) {
                CHECK(got.at(i, i) == ds.diag[i]);
                bool unit = ds.diag[i] == F->one();
                bool canon_ns = ds.diag[i] == F->canonical_nonsquare() && i == dim - 1;
                CHECK((unit || canon_ns));
                prod = F->mul(prod, ds.diag[i]);
            }
            CHECK(F->square_class(prod) == F->square_class(determinant(S.form)));
        }
    }
}

TEST_CASE("discriminants") {
    Matrix g = make_matrix(f5, {{2, 1, 1}, {1, 2, 4}, {1, 4, 2}});
    auto disc = discriminant_of(g);
    CHECK(disc.cls == SquareClass::nonsquare);
    CHECK(disc.representative == f5->from_int(3));

    CHECK(discriminant_of(standard_space(f11, 4)).cls == SquareClass::square);
    CHECK(discriminant_of(make_matrix(f3, {{2, 0}, {0, 2}})).cls == SquareClass::square);

    // Case U discriminants are always trivial.
    std::mt19937 rng(37);
    for (int trial = 0; trial < 20; ++trial) {
        Matrix h = random_hermitian_invertible(f25, 2 + trial % 3, rng);
        CHECK(discriminant_of(h).cls == SquareClass::square);
    }
}

TEST_CASE("case O congruence is classified by the discriminant") {
    // Exhaustive d = 2 over F_3 and F_5: two invertible symmetric forms are
    // congruent iff their determinants share a square class.
    for (const auto& F : {f3, f5}) {
        int64_t q = static_cast<int64_t>(F->size());
        std::vector<Matrix> forms;
        for (int64_t a = 0; a < q; ++a)
            for (int64_t b = 0; b < q; ++b)
                for (int64_t c = 0; c < q; ++c) {
                    Matrix m = make_matrix(F, {{a, b}, {b, c}});
                    if (is_invertible(m)) forms.push_back(m);
                }
        std::vector<Matrix> gl2;
        for (uint64_t t = 0; t < F->size() * F->size() * F->size() * F->size(); ++t) {
            uint64_t v = t;
            Matrix A(F, 2, 2);
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) {
                    A.at(i, j) = F->element_at(v % F->size());
                    v /= F->size();
                }
            if (is_invertible(A)) gl2.push_back(A);
        }
        for (size_t x = 0; x < forms.size(); x += 7)
            for (size_t y = 0; y < forms.size(); y += 5) {
                const Matrix& M = forms[x];
                const Matrix& N = forms[y];
                bool congruent = false;
                for (const Matrix& A : gl2)
                    if (matmul(conj_transpose(A), matmul(N, A)) == M) {
                        congruent = true;
                        break;
                    }
                bool same_disc = F->square_class(determinant(M)) == F->square_class(determinant(N));
                CHECK(congruent == same_disc);
            }
    }
}
