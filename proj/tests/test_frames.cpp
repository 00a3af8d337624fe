#include <catch2/catch_amalgamated.hpp>

#include "ffframes/frames.hpp"
#include "paper_examples.hpp"
#include "test_util.hpp"

using namespace ff;
using fftest::random_matrix;

namespace {

Elem trace_of(const Matrix& m) {
    Elem t = m.F->zero();
    for (int i = 0; i < m.rows; ++i) t = m.F->add(t, m.at(i, i));
    return t;
}

FrameSystem random_frame(const HermitianSpace& V, int n, std::mt19937& rng) {
    while (true) {
        Matrix syn = random_matrix(V.F, V.dim, n, rng);
        if (rank_of(syn) == V.dim) return frame_make(V, syn);
    }
}

}  // namespace

TEST_CASE("frame_make caches Gram and frame operator") {
    auto fs = paper::twonotswitch();
    CHECK(fs.gram == make_matrix(paper::f11(), {{1, 5, 5}, {5, 1, 5}, {5, 5, 1}}));

    auto V = space_make(make_matrix(paper::f5(), {{1, 0}, {0, 3}}));
    auto basis = frame_make(V, Matrix::identity(paper::f5(), 2));
    CHECK(basis.gram == V.form);

    auto hesse = paper::hesse();
    for (int j = 0; j < 9; ++j) CHECK(hesse.g(j, j) == paper::f25()->from_int(2));

    CHECK_THROWS_AS(frame_make(V, Matrix::zero(paper::f5(), 3, 2)), error);
}

TEST_CASE("frame status") {
    auto ww = paper::welchweird();
    auto ts = frame_status(ww);
    CHECK(ts.is_frame_for_ambient);
    CHECK_FALSE(ts.tight);

    auto np = paper::naiweird_psi();
    auto tp = frame_status(np);
    CHECK(rank_of(np.synthesis) == 2);
    CHECK(rank_of(np.gram) == 1);
    CHECK_FALSE(tp.is_frame_for_span);
    CHECK_FALSE(tp.tight);

    auto basis = frame_make(standard_space(paper::f5(), 3), Matrix::identity(paper::f5(), 3));
    auto tb = frame_status(basis);
    CHECK(tb.tight);
    CHECK(tb.c == paper::f5()->one());

    auto ws = paper::weridsimplices();
    auto tw = frame_status(ws);
    CHECK(tw.is_frame_for_ambient);
    CHECK(tw.tight);
    CHECK(paper::f3()->is_zero(tw.c));
    CHECK(tw.totally_isotropic_tight);
    CHECK(ws.n() >= 2 * tw.span_dim);
}

TEST_CASE("equiangular parameters") {
    auto ww = equiangular_of(paper::welchweird());
    REQUIRE(ww.has_value());
    CHECK(ww->a == paper::f5()->from_int(2));
    CHECK(ww->b == paper::f5()->one());

    auto dw = equiangular_of(paper::discrisweird_phi());
    REQUIRE(dw.has_value());
    CHECK(dw->a == paper::f5()->from_int(2));
    CHECK(dw->b == paper::f5()->one());

    auto basis = frame_make(standard_space(paper::f11(), 3), Matrix::identity(paper::f11(), 3));
    auto eb = equiangular_of(basis);
    REQUIRE(eb.has_value());
    CHECK(eb->a == paper::f11()->one());
    CHECK(paper::f11()->is_zero(eb->b));

    CHECK_FALSE(equiangular_of(paper::chain_frame(4, 1)).has_value());
}

TEST_CASE("etf verification") {
    auto F11 = paper::f11();
    auto rep = etf_verify(paper::twonotswitch());
    CHECK(rep.verdict);
    CHECK(rep.params.a == F11->one());
    CHECK(rep.params.b == F11->from_int(3));
    CHECK(rep.c == F11->from_int(7));
    CHECK(rep.welch_holds);
    CHECK(rep.triple_sum_holds);
    CHECK(rep.criteria_applicable);
    CHECK(rep.certified_by_criteria);

    auto ww = etf_verify(paper::welchweird());
    CHECK(ww.welch_holds);
    CHECK_FALSE(ww.verdict);
    CHECK_FALSE(ww.triple_sum_holds);
    CHECK_FALSE(ww.triple_sum_failures.empty());
    CHECK_FALSE(ww.certified_by_criteria);

    auto hesse = etf_verify(paper::hesse());
    CHECK(hesse.verdict);
    CHECK(hesse.params.a == paper::f25()->from_int(2));
    CHECK(hesse.params.b == paper::f25()->one());
    CHECK(hesse.c == paper::f25()->one());
    CHECK(hesse.certified_by_criteria);

    auto dw = etf_verify(paper::discrisweird_phi());
    CHECK(dw.verdict);
    CHECK(dw.c == paper::f5()->from_int(3));
    CHECK(dw.tightness.span_dim == 2);
    CHECK_FALSE(dw.tightness.is_frame_for_ambient);

    auto ws = etf_verify(paper::weridsimplices());
    CHECK(ws.verdict);
    CHECK(paper::f3()->is_zero(ws.c));
    CHECK(ws.welch_holds);

    // a(c-a) = (n-1)b on every verified ETF
    for (const auto& fs : {paper::twonotswitch(), paper::hesse(), paper::discrisweird_phi(),
                           paper::weridsimplices()}) {
        auto r = etf_verify(fs);
        REQUIRE(r.verdict);
        const Field& F = *fs.field();
        CHECK(F.mul(r.params.a, F.sub(r.c, r.params.a)) ==
              F.mul(F.from_int(fs.n() - 1), r.params.b));
    }

    CHECK_THROWS_MATCHES(etf_verify(paper::chain_frame(4, 1)), error,
                         Catch::Matchers::Predicate<error>(
                             [](const error& e) { return e.code() == errc::not_equiangular; }));
}

TEST_CASE("gram realization") {
    auto fs = paper::twonotswitch();
    auto realized = gram_realize(fs.gram);
    CHECK(realized.gram == fs.gram);
    CHECK(realized.space.form == Matrix::identity(paper::f11(), 2));

    // aI_n realizes as orthogonal vectors of norm a
    auto F7 = field_make(7, 1);
    Matrix g2 = scale(Matrix::identity(F7, 3), F7->from_int(2));
    auto orth = gram_realize(g2);
    CHECK(orth.gram == g2);
    CHECK(orth.d() == 3);

    // nonsquare-discriminant Gram realizes in diag(1, delta0)
    auto dphi = paper::discrisweird_phi();
    auto dre = gram_realize(dphi.gram);
    CHECK(dre.gram == dphi.gram);
    CHECK(dre.d() == 2);
    CHECK(dre.space.form == make_matrix(paper::f5(), {{1, 0}, {0, 2}}));
    CHECK(discriminant_of(dre.space).cls == SquareClass::nonsquare);
    CHECK(discriminant_of(dre.space).cls ==
          discriminant_of(paper::discrisweird_psi().space).cls);

    // zero-padded ambient embedding
    auto padded = gram_realize(dphi.gram, 4);
    CHECK(padded.gram == dphi.gram);
    CHECK(padded.d() == 4);

    // round-trips on every example system
    for (const auto& sys : {paper::twonotswitch(), paper::discrisweird_phi(), paper::hesse(),
                            paper::weridsimplices(), paper::welchweird()}) {
        CHECK(gram_realize(sys.gram).gram == sys.gram);
    }

    CHECK_THROWS_AS(gram_realize(make_matrix(paper::f5(), {{0, 1}, {2, 0}})), error);
}

TEST_CASE("naimark complements") {
    auto fs = paper::twonotswitch();
    auto psi = naimark_of(fs);
    CHECK(psi.d() == 1);
    CHECK(psi.n() == 3);
    auto eq = equiangular_of(psi);
    REQUIRE(eq.has_value());
    CHECK(eq->a == paper::f11()->from_int(6));  // c - a = 7 - 1
    CHECK(eq->b == paper::f11()->from_int(3));
    auto ts = frame_status(psi);
    CHECK(ts.tight);
    CHECK(ts.c == paper::f11()->from_int(7));

    // image(Psi-dagger) = kernel(Phi) as subspaces
    CHECK(same_subspace(psi.analysis, rank_kernel(fs.synthesis).kernel_basis));

    auto hesse = paper::hesse();
    auto hc = naimark_of(hesse);
    CHECK(hc.d() == 6);
    CHECK(hc.n() == 9);
    auto he = etf_verify(hc);
    CHECK(he.verdict);
    CHECK(he.params.a == paper::f25()->from_int(4));  // 1 - 2 = -1 = 4
    CHECK(he.params.b == paper::f25()->one());
    CHECK(he.c == paper::f25()->one());
    CHECK(same_subspace(hc.analysis, rank_kernel(hesse.synthesis).kernel_basis));

    CHECK_THROWS_MATCHES(naimark_of(paper::weridsimplices()), error,
                         Catch::Matchers::Predicate<error>(
                             [](const error& e) { return e.code() == errc::zero_tight; }));
    CHECK_THROWS_MATCHES(naimark_of(paper::welchweird()), error,
                         Catch::Matchers::Predicate<error>(
                             [](const error& e) { return e.code() == errc::not_tight; }));

    // scaled complement: psi from 2(cI - G) is 2c-tight
    auto scaled = naimark_of(fs, paper::f11()->from_int(2));
    auto tscaled = frame_status(scaled);
    CHECK(tscaled.tight);
    CHECK(tscaled.c == paper::f11()->from_int(3));  // 2 * 7 = 14 = 3
}

TEST_CASE("gerzon bound") {
    EquiangularParams ws{paper::f3()->zero(), paper::f3()->one()};
    auto g1 = gerzon_check(10, 4, paper::f3(), ws);
    CHECK(g1.bound == 10);
    CHECK(g1.saturated);

    EquiangularParams hp{paper::f25()->from_int(2), paper::f25()->one()};
    auto g2 = gerzon_check(9, 3, paper::f25(), hp);
    CHECK(g2.bound == 9);
    CHECK(g2.saturated);

    EquiangularParams tp{paper::f11()->one(), paper::f11()->from_int(3)};
    auto g3 = gerzon_check(3, 2, paper::f11(), tp);
    CHECK(g3.bound == 3);
    CHECK(g3.within);
    CHECK(g3.saturated);

    EquiangularParams bad{paper::f11()->from_int(2), paper::f11()->from_int(4)};
    CHECK_THROWS_MATCHES(gerzon_check(3, 2, paper::f11(), bad), error,
                         Catch::Matchers::Predicate<error>(
                             [](const error& e) { return e.code() == errc::hypothesis_violated; }));
}

TEST_CASE("tightness equivalences on random frames") {
    // For frames, and for every c: PhiPhi+ = cI iff PhiPhi+Phi = cPhi iff
    // (Phi+Phi)^2 = c Phi+Phi.
    std::vector<FieldPtr> fields = {paper::f3(), paper::f5(), field_make(7, 1), paper::f11(),
                                    paper::f25()};
    std::mt19937 rng(41);
    for (const auto& F : fields) {
        for (int trial = 0; trial < 100; ++trial) {
            int d = 1 + trial % 3;
            int n = d + trial % 3;
            auto fs = random_frame(standard_space(F, d), n, rng);
            Matrix ppp = matmul(fs.frame_op, fs.synthesis);
            Matrix gg = matmul(fs.gram, fs.gram);
            for (uint64_t t = 0; t < F->size(); ++t) {
                Elem c = F->element_at(t);
                bool i1 = fs.frame_op == scale(Matrix::identity(F, d), c);
                bool i2 = ppp == scale(fs.synthesis, c);
                bool i3 = gg == scale(fs.gram, c);
                CHECK(i1 == i2);
                CHECK(i2 == i3);
            }
        }
    }

    // exercise the all-true branch on known tight frames
    for (const auto& fs : {paper::twonotswitch(), paper::hesse(), paper::weridsimplices()}) {
        const auto& F = fs.field();
        auto ts = frame_status(fs);
        REQUIRE(ts.tight);
        CHECK(fs.frame_op == scale(Matrix::identity(F, fs.d()), ts.c));
        CHECK(matmul(fs.frame_op, fs.synthesis) == scale(fs.synthesis, ts.c));
        CHECK(matmul(fs.gram, fs.gram) == scale(fs.gram, ts.c));
    }
}

TEST_CASE("trace identity") {
    std::mt19937 rng(43);
    for (int trial = 0; trial < 50; ++trial) {
        auto F = trial % 2 ? paper::f5() : paper::f25();
        Matrix syn = random_matrix(F, 2 + trial % 3, 1 + trial % 5, rng);
        auto fs = frame_make(standard_space(F, syn.rows), syn);
        CHECK(trace_of(fs.gram) == trace_of(fs.frame_op));
    }
}

TEST_CASE("all-zero synthesis is the only ambiguous-c case") {
    auto fs = frame_make(standard_space(paper::f5(), 2), Matrix::zero(paper::f5(), 2, 3));
    auto ts = frame_status(fs);
    CHECK(ts.tight);
    CHECK(ts.ambiguous_c);
    CHECK(paper::f5()->is_zero(ts.c));

    auto ts2 = frame_status(paper::twonotswitch());
    CHECK_FALSE(ts2.ambiguous_c);
}
