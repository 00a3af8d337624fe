// Acceptance suite: one test case per criterion, one printed verdict line
// each. All arithmetic is exact, so every comparison below is equality.

#include <catch2/catch_amalgamated.hpp>

#include <chrono>
#include <cstdio>

#include "ffframes/json_io.hpp"
#include "paper_examples.hpp"
#include "search_oracles.hpp"
#include "test_util.hpp"

using namespace ff;

namespace {

std::chrono::steady_clock::time_point t_start;

class AcceptanceReporter : public Catch::EventListenerBase {
public:
    using EventListenerBase::EventListenerBase;

    void testCaseStarting(Catch::TestCaseInfo const&) override {
        t_start = std::chrono::steady_clock::now();
    }

    void testCaseEnded(Catch::TestCaseStats const& stats) override {
        double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
        std::printf("[acceptance] %s: %s (%.2fs)\n", stats.testInfo->name.c_str(),
                    stats.totals.assertions.allPassed() ? "PASS" : "FAIL", dt);
        std::fflush(stdout);
    }
};

Matrix random_full_rank(const FieldPtr& F, int d, int n, std::mt19937& rng) {
    while (true) {
        Matrix m = fftest::random_matrix(F, d, n, rng);
        if (rank_of(m) == d) return m;
    }
}

}  // namespace

CATCH_REGISTER_LISTENER(AcceptanceReporter)

TEST_CASE("criterion 1: F_11 ETF and Gram realization") {
    auto fs = paper::twonotswitch();
    auto rep = etf_verify(fs);
    REQUIRE(rep.verdict);
    CHECK(rep.params.a == paper::f11()->one());
    CHECK(rep.params.b == paper::f11()->from_int(3));
    CHECK(rep.c == paper::f11()->from_int(7));

    auto realized = gram_realize(fs.gram);
    CHECK(realized.gram == fs.gram);
    CHECK(unitary_equiv(fs, realized).equivalent);
}

TEST_CASE("criterion 2: Welch holds but tightness fails") {
    auto rep = etf_verify(paper::welchweird());
    CHECK(rep.welch_holds);
    CHECK_FALSE(rep.verdict);
    CHECK_FALSE(rep.triple_sum_holds);
    CHECK_FALSE(rep.triple_sum_failures.empty());
}

TEST_CASE("criterion 3: Hesse analog over F_25") {
    auto hesse = paper::hesse();
    auto rep = etf_verify(hesse);
    REQUIRE(rep.verdict);
    CHECK(hesse.n() == 9);
    CHECK(hesse.d() == 3);
    CHECK(rep.params.a == paper::f25()->from_int(2));
    CHECK(rep.params.b == paper::f25()->one());
    CHECK(rep.c == paper::f25()->one());
    auto gz = gerzon_check(9, 3, paper::f25(), rep.params);
    CHECK(gz.bound == 9);
    CHECK(gz.saturated);

    auto simplices = simplex_enumerate(hesse);
    CHECK(simplices.size() == 12);
    for (const auto& s : simplices) CHECK(s.s == 2);
}

TEST_CASE("criterion 4: the F_3 maximal ETF and its simplex designs") {
    auto ws = paper::weridsimplices();
    auto rep = etf_verify(ws);
    REQUIRE(rep.verdict);
    CHECK(paper::f3()->is_zero(rep.params.a));
    CHECK(rep.params.b == paper::f3()->one());
    CHECK(paper::f3()->is_zero(rep.c));
    auto gz = gerzon_check(10, 4, paper::f3(), rep.params);
    CHECK(gz.bound == 10);
    CHECK(gz.saturated);

    auto simplices = simplex_enumerate(ws);
    REQUIRE(simplices.size() == 30);
    std::vector<std::vector<int>> trivial_class, nonsquare_class;
    for (const auto& s : simplices) {
        CHECK(s.s == 3);
        (s.discr.cls == SquareClass::square ? trivial_class : nonsquare_class)
            .push_back(s.indices);
    }
    CHECK(trivial_class.size() == 15);
    CHECK(nonsquare_class.size() == 15);
    CHECK(trivial_class == paper::realsimps_blocks());
    CHECK(nonsquare_class == paper::nonsquaresimps_blocks());

    for (const auto& blocks : {trivial_class, nonsquare_class}) {
        auto d = design_verify(10, blocks, 2);
        CHECK(d.is_design);
        CHECK(d.k == 4);
        CHECK(d.lambda == 2);
    }
}

TEST_CASE("criterion 5: incoherence numbers") {
    auto fs = paper::twonotswitch();
    CHECK(incoherence_number(fs, paper::f11()->from_int(5)).inc == 3);
    CHECK(incoherence_number(fs, paper::f11()->from_int(6)).inc == 2);

    auto ws2 = paper::weridsimplices2();
    auto rep = incoherence_number(ws2, paper::f3()->one());
    CHECK(rep.inc == 4);
    CHECK(rep.witness.indices.size() == 4);
    CHECK_FALSE(rep.witness.linearly_independent);
}

TEST_CASE("criterion 6: Naimark round-trips") {
    for (const auto& fs : {paper::twonotswitch(), paper::hesse()}) {
        const auto& F = fs.field();
        auto base = etf_verify(fs);
        REQUIRE(base.verdict);
        auto psi = naimark_of(fs);
        CHECK(psi.d() == fs.n() - fs.d());
        CHECK(is_zero_matrix(matmul(psi.synthesis, fs.analysis)));
        auto comp = etf_verify(psi);
        CHECK(comp.verdict);
        CHECK(comp.params.a == F->sub(base.c, base.params.a));
        CHECK(comp.params.b == base.params.b);
        CHECK(comp.c == base.c);
        if (!F->case_u()) {
            // discriminant law c^n discr(V)
            SquareClass lhs = span_discriminant(psi).cls;
            SquareClass rhs =
                F->square_class(F->pow(base.c, static_cast<unsigned long long>(fs.n()))) *
                discriminant_of(fs.space).cls;
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("criterion 7: switching-equivalence decision") {
    auto a = paper::chain_frame(4, 1);
    auto b = paper::chain_frame(4, -1);
    for (int m = 1; m <= 3; ++m) {
        int total = 1;
        for (int i = 0; i < m; ++i) total *= a.n();
        for (int t = 0; t < total; ++t) {
            std::vector<int> idx(m);
            int v = t;
            for (int i = 0; i < m; ++i) {
                idx[i] = 1 + v % a.n();
                v /= a.n();
            }
            REQUIRE(m_product(a, idx).value == m_product(b, idx).value);
        }
    }
    auto cert = switching_equiv(a, b);
    CHECK_FALSE(cert.equivalent);
    CHECK(cert.obstruction == "4-product mismatch");

    std::mt19937 rng(2026);
    for (const auto& fs : {paper::twonotswitch(), paper::welchweird(), paper::hesse(),
                           paper::weridsimplices()}) {
        const auto& F = fs.field();
        const auto& mu = F->unimodulars();
        Matrix syn = fs.synthesis;
        std::vector<Elem> t(fs.n());
        for (int j = 0; j < fs.n(); ++j) {
            t[j] = mu[rng() % mu.size()];
            for (int i = 0; i < syn.rows; ++i) syn.at(i, j) = F->mul(syn.at(i, j), t[j]);
        }
        auto moved = frame_make(fs.space, syn);
        auto c = switching_equiv(fs, moved);
        REQUIRE(c.equivalent);
        // re-check the Gram identity of the returned certificate
        Matrix conj(F, fs.n(), fs.n());
        for (int j = 0; j < fs.n(); ++j)
            for (int k = 0; k < fs.n(); ++k)
                conj.at(j, k) =
                    F->mul(F->mul(F->involve(c.t_diag[j]), fs.g(j, k)), c.t_diag[k]);
        CHECK(conj == moved.gram);
        for (Elem e : c.t_diag) CHECK(F->norm(e) == F->one());
    }
}

TEST_CASE("criterion 8: property suites") {
    // (a) tightness equivalences on 100 random frames per field
    std::mt19937 rng(4096);
    for (const auto& F : {paper::f3(), paper::f5(), field_make(7, 1), paper::f11(), paper::f25()}) {
        for (int trial = 0; trial < 100; ++trial) {
            int d = 1 + trial % 3;
            int n = d + trial % 3;
            auto fs = frame_make(standard_space(F, d), random_full_rank(F, d, n, rng));
            Matrix ppp = matmul(fs.frame_op, fs.synthesis);
            Matrix gg = matmul(fs.gram, fs.gram);
            for (uint64_t t = 0; t < F->size(); ++t) {
                Elem c = F->element_at(t);
                bool i1 = fs.frame_op == scale(Matrix::identity(F, d), c);
                bool i2 = ppp == scale(fs.synthesis, c);
                bool i3 = gg == scale(fs.gram, c);
                REQUIRE(i1 == i2);
                REQUIRE(i2 == i3);
            }
        }
    }

    // (b) a(c-a) = (n-1)b on every ETF the search finds for F_3/F_5, d <= 3
    for (const auto& F : {paper::f3(), paper::f5()}) {
        for (int d = 1; d <= 3; ++d)
            for (uint64_t ai = 0; ai < F->size(); ++ai)
                for (uint64_t bi = 0; bi < F->size(); ++bi) {
                    SearchSpec spec{standard_space(F, d), F->element_at(ai), F->element_at(bi),
                                    std::nullopt, SearchMode::all};
                    spec.etf_filter = true;
                    auto res = search_equiangular(spec);
                    for (const auto& fs : res.systems) {
                        auto rep = etf_verify(fs);
                        REQUIRE(rep.verdict);
                        REQUIRE(F->mul(rep.params.a, F->sub(rep.c, rep.params.a)) ==
                                F->mul(F->from_int(fs.n() - 1), rep.params.b));
                    }
                }
    }

    // (c) simplex existence over F_p iff p does not divide s+1
    for (long long p : {3, 5, 7})
        for (int s = 2; s <= 6; ++s) {
            INFO("p=" << p << " s=" << s);
            REQUIRE(fftest::simplex_exists(p, s) == ((s + 1) % p != 0));
        }

    // (d) CR reconstruction on 200 random matrices
    for (int trial = 0; trial < 200; ++trial) {
        auto F = trial % 2 ? paper::f5() : paper::f25();
        Matrix m = fftest::random_matrix(F, 1 + trial % 6, 1 + (trial / 2) % 6, rng);
        auto cr = cr_decompose(m);
        REQUIRE(matmul(cr.C, cr.R) == m);
        REQUIRE(rank_of(cr.C) == rank_of(m));
        REQUIRE(rank_of(cr.R) == rank_of(m));
    }

    // (e) quadruple axiom on every induced two-graph with n <= 12
    auto check_axiom = [](const FrameSystem& fs) {
        const auto& F = fs.field();
        auto eq = equiangular_of(fs);
        REQUIRE(eq.has_value());
        Elem beta = *F->sqrt_plain(eq->b);
        for (Elem root : {beta, F->neg(beta)}) {
            auto tg = two_graph_of(fs, root);
            REQUIRE(two_graph_axiom_holds(tg));
        }
    };
    check_axiom(paper::twonotswitch());
    check_axiom(paper::discrisweird_phi());
    check_axiom(paper::welchweird());
    check_axiom(paper::weridsimplices());
    check_axiom(paper::weridsimplices2());
    check_axiom(fftest::icosahedral_f11());
}

TEST_CASE("criterion 9: design machinery") {
    // affine-plane lines over F_3: quasi-symmetric 2-(9,3,1; 0,1) with Fisher
    std::vector<std::vector<int>> lines;
    for (auto [dx, dy] : std::vector<std::pair<int, int>>{{1, 0}, {0, 1}, {1, 1}, {1, 2}}) {
        std::set<std::set<int>> seen;
        for (int x0 = 0; x0 < 3; ++x0)
            for (int y0 = 0; y0 < 3; ++y0) {
                std::set<int> line;
                for (int t = 0; t < 3; ++t)
                    line.insert(1 + (x0 + t * dx) % 3 + 3 * ((y0 + t * dy) % 3));
                if (seen.insert(line).second) lines.push_back({line.begin(), line.end()});
            }
    }
    auto affine = design_verify(9, lines, 2);
    CHECK(affine.is_design);
    CHECK(affine.k == 3);
    CHECK(affine.lambda == 1);
    CHECK(affine.quasi_symmetric);
    CHECK(affine.intersection_numbers == std::vector<long long>{0, 1});
    CHECK(affine.fisher.applicable);
    CHECK(affine.fisher.holds);

    // every regular-two-graph instance the search produces over F_13 with
    // n <= 10: check the Gamma sum identity whenever the incoherent-set
    // hypotheses hold
    auto F = field_make(13, 1);
    int qualifying = 0;
    for (int d = 2; d <= 3; ++d) {
        for (int fk = 0; fk < 2; ++fk) {
            Matrix form = Matrix::identity(F, d);
            if (fk) form.at(d - 1, d - 1) = F->from_int(2);
            auto V = space_make(form);
            for (uint64_t bi = 1; bi < F->size(); ++bi) {
                Elem b = F->element_at(bi);
                if (F->square_class(b) != SquareClass::square) continue;
                for (uint64_t ai = 1; ai < F->size(); ++ai) {
                    Elem a = F->element_at(ai);
                    if (F->mul(a, a) == b) continue;
                    long long gerzon = d + (d * d - d) / 2;
                    for (int n = d + 1; n <= std::min<long long>(10, gerzon); ++n) {
                        Elem lhs = F->mul(F->mul(a, a), F->from_int(n - d));
                        Elem rhs = F->mul(F->mul(F->from_int(d), F->from_int(n - 1)), b);
                        if (lhs != rhs) continue;  // Welch-inconsistent, no ETF possible
                        SearchSpec spec{V, a, b, n, SearchMode::first};
                        spec.etf_filter = true;
                        auto res = search_equiangular(spec);
                        if (res.count == 0) continue;
                        const auto& fs = res.systems[0];
                        Elem beta0 = *F->sqrt_plain(b);
                        for (Elem beta : {beta0, F->neg(beta0)}) {
                            auto tg = two_graph_of(fs, beta);
                            if (!two_graph_regularity(tg).regular) continue;
                            auto inc = incoherence_number(fs, beta);
                            if (inc.inc != fs.d() || !inc.witness.linearly_independent) continue;
                            auto ex = design_extract(fs, inc.witness);
                            CHECK(ex.sum_identity_ok);
                            CHECK(ex.lambda_formula_ok);
                            ++qualifying;
                        }
                    }
                }
            }
        }
    }
    CHECK(qualifying >= 1);

    // the icosahedral instance over F_11 exercises the nondegenerate clauses
    auto ico = fftest::icosahedral_f11();
    auto inc = incoherence_number(ico, ico.field()->one());
    auto ex = design_extract(ico, inc.witness);
    CHECK(ex.sum_identity_ok);
    CHECK(ex.lambda_formula_ok);
    CHECK(ex.symmetric_case_ok);
    CHECK(ex.b1.is_design);
    CHECK(ex.b2.is_design);
}
