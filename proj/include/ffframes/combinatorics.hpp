#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ffframes/equivalence.hpp"

namespace ff {

struct TwoGraph {
    int n = 0;
    std::vector<std::array<int, 3>> coherent;  // 1-based, each sorted, list sorted
    std::optional<Elem> beta;

    bool is_coherent(int i, int j, int k) const {
        std::array<int, 3> t{i, j, k};
        std::sort(t.begin(), t.end());
        return std::binary_search(coherent.begin(), coherent.end(), t);
    }
};

inline bool two_graph_axiom_holds(const TwoGraph& tg) {
    for (int a = 1; a <= tg.n; ++a)
        for (int b = a + 1; b <= tg.n; ++b)
            for (int c = b + 1; c <= tg.n; ++c)
                for (int d = c + 1; d <= tg.n; ++d) {
                    int count = tg.is_coherent(a, b, c) + tg.is_coherent(a, b, d) +
                                tg.is_coherent(a, c, d) + tg.is_coherent(b, c, d);
                    if (count % 2 != 0) return false;
                }
    return true;
}

/// Two-graph induced by a Case-O equiangular system: coherent triples are the
/// ones with triple product -beta^3.
inline TwoGraph two_graph_of(const FrameSystem& fs, Elem beta) {
    const Field& F = *fs.field();
    require(!F.case_u(), errc::case_u, "two-graphs need an orthogonal geometry");
    auto eq = equiangular_of(fs);
    require(eq.has_value() && !F.is_zero(eq->b), errc::not_equiangular,
            "two-graphs need an (a,b)-equiangular system with b != 0");
    require(F.mul(beta, beta) == eq->b, errc::beta_not_root, "beta^2 != b");

    TwoGraph tg;
    tg.n = fs.n();
    tg.beta = beta;
    Elem target = F.neg(F.mul(F.mul(beta, beta), beta));
    for (int j = 0; j < tg.n; ++j)
        for (int k = j + 1; k < tg.n; ++k)
            for (int l = k + 1; l < tg.n; ++l) {
                Elem d3 = F.mul(F.mul(fs.g(j, k), fs.g(k, l)), fs.g(l, j));
                if (d3 == target) tg.coherent.push_back({j + 1, k + 1, l + 1});
            }
    require(two_graph_axiom_holds(tg), errc::invalid_two_graph,
            "induced triple set violates the even-quadruple axiom");
    return tg;
}

struct TwoGraphAnalysis {
    bool regular = false;
    long long ell = -1;     // triples through each pair, when regular
    long long m_quad = -1;  // coherent quadruples per coherent triple, when constant
    bool m_constant = false;
    bool nontrivial = false;  // some but not all triples coherent
    bool two_eigenvalue = false;
    bool point_relation_holds = false;  // n = 3 ell - 2 m, regular nontrivial case
    std::vector<std::vector<long long>> seidel;  // inducing graph with vertex 1 isolated
};

/// Regularity, quadruple counts, and the Seidel two-eigenvalue test (done over
/// the integers: S^2 must lie in span{S, I}).
inline TwoGraphAnalysis two_graph_regularity(const TwoGraph& tg) {
    require(two_graph_axiom_holds(tg), errc::invalid_two_graph,
            "triple set violates the even-quadruple axiom");
    TwoGraphAnalysis an;
    int n = tg.n;

    long long total = static_cast<long long>(n) * (n - 1) * (n - 2) / 6;
    an.nontrivial = !tg.coherent.empty() &&
                    static_cast<long long>(tg.coherent.size()) != total;

    bool first = true;
    an.regular = true;
    for (int a = 1; a <= n && an.regular; ++a)
        for (int b = a + 1; b <= n && an.regular; ++b) {
            long long cnt = 0;
            for (int c = 1; c <= n; ++c)
                if (c != a && c != b && tg.is_coherent(a, b, c)) ++cnt;
            if (first) {
                an.ell = cnt;
                first = false;
            } else if (cnt != an.ell) {
                an.regular = false;
                an.ell = -1;
            }
        }

    first = true;
    an.m_constant = true;
    for (const auto& t : tg.coherent) {
        long long cnt = 0;
        for (int x = 1; x <= n; ++x) {
            if (x == t[0] || x == t[1] || x == t[2]) continue;
            if (tg.is_coherent(t[0], t[1], x) && tg.is_coherent(t[0], t[2], x) &&
                tg.is_coherent(t[1], t[2], x))
                ++cnt;
        }
        if (first) {
            an.m_quad = cnt;
            first = false;
        } else if (cnt != an.m_quad) {
            an.m_constant = false;
            an.m_quad = -1;
        }
    }
    if (tg.coherent.empty()) {
        an.m_quad = 0;
        an.m_constant = true;
    }

    // Canonical inducing graph: vertex 1 isolated, {j,k} an edge iff {1,j,k}
    // is coherent. The two-graph axiom makes this induce tg.
    an.seidel.assign(n, std::vector<long long>(n, 0));
    for (int j = 2; j <= n; ++j)
        for (int k = 2; k <= n; ++k) {
            if (j == k) continue;
            an.seidel[j - 1][k - 1] = tg.is_coherent(1, j, k) ? -1 : 1;
        }
    for (int j = 2; j <= n; ++j) {
        an.seidel[0][j - 1] = 1;
        an.seidel[j - 1][0] = 1;
    }

    if (n <= 1) {
        an.two_eigenvalue = true;
    } else {
        std::vector<std::vector<long long>> s2(n, std::vector<long long>(n, 0));
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) {
                if (an.seidel[i][k] == 0) continue;
                for (int j = 0; j < n; ++j) s2[i][j] += an.seidel[i][k] * an.seidel[k][j];
            }
        long long alpha = s2[0][1] * an.seidel[0][1];
        an.two_eigenvalue = true;
        for (int i = 0; i < n && an.two_eigenvalue; ++i)
            for (int j = 0; j < n && an.two_eigenvalue; ++j) {
                long long want = alpha * an.seidel[i][j] + (i == j ? n - 1 : 0);
                if (s2[i][j] != want) an.two_eigenvalue = false;
            }
    }

    an.point_relation_holds =
        an.regular && an.nontrivial && an.m_constant && n == 3 * an.ell - 2 * an.m_quad;
    return an;
}

struct SrgResult {
    bool is_srg = false;
    long long v = 0, k = -1, lambda = -1, mu = -1;
    std::optional<long long> modular_p;
    std::string failure;
};

/// Exact (or mod-p) strongly-regular-graph verification on a simple graph
/// given by its 0/1 adjacency matrix.
inline SrgResult srg_check(const std::vector<std::vector<long long>>& adj,
                           std::optional<long long> modular_p = {}) {
    int n = static_cast<int>(adj.size());
    require(n >= 1, errc::hypothesis_violated, "empty graph");
    for (int i = 0; i < n; ++i) {
        require(static_cast<int>(adj[i].size()) == n, errc::shape_mismatch,
                "adjacency matrix is not square");
        require(adj[i][i] == 0, errc::hypothesis_violated, "loops are not allowed");
        for (int j = 0; j < n; ++j) {
            require(adj[i][j] == 0 || adj[i][j] == 1, errc::hypothesis_violated,
                    "adjacency entries must be 0/1");
            require(adj[i][j] == adj[j][i], errc::hypothesis_violated,
                    "graph must be undirected");
        }
    }
    long long edges = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) edges += adj[i][j];
    require(edges != 0 && edges != static_cast<long long>(n) * (n - 1) / 2,
            errc::complete_or_empty, "SRG parameters need a graph that is neither complete nor empty");

    auto reduce = [&](long long x) {
        if (!modular_p) return x;
        long long r = x % *modular_p;
        return r < 0 ? r + *modular_p : r;
    };

    SrgResult res;
    res.v = n;
    res.modular_p = modular_p;
    for (int i = 0; i < n; ++i) {
        long long deg = 0;
        for (int j = 0; j < n; ++j) deg += adj[i][j];
        deg = reduce(deg);
        if (res.k < 0)
            res.k = deg;
        else if (deg != res.k) {
            res.failure = "degree not constant";
            return res;
        }
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            long long common = 0;
            for (int x = 0; x < n; ++x) common += adj[i][x] * adj[j][x];
            common = reduce(common);
            long long& slot = adj[i][j] ? res.lambda : res.mu;
            if (slot < 0)
                slot = common;
            else if (slot != common) {
                res.failure = adj[i][j] ? "lambda not constant" : "mu not constant";
                return res;
            }
        }
    res.is_srg = true;
    return res;
}

struct EtfTwoGraphReport {
    bool etf_verdict = false;
    bool twograph_regular = false;
    bool agree = false;
    bool n_even = false;  // reported, never asserted
    Elem beta_used;
    TwoGraph two_graph;
};

/// Cross-check the ETF verdict against two-graph regularity for an (a,1)
/// equiangular frame over an orthogonal geometry with Char F > n and n > d.
inline EtfTwoGraphReport etf_twograph_correspond(const FrameSystem& fs) {
    const Field& F = *fs.field();
    require(!F.case_u(), errc::case_u, "orthogonal geometries only");
    auto eq = equiangular_of(fs);
    require(eq.has_value(), errc::not_equiangular, "system is not equiangular");
    require(eq->b == F.one(), errc::hypothesis_violated, "needs b = 1");
    auto ts = frame_status(fs);
    require(ts.is_frame_for_ambient, errc::hypothesis_violated, "needs a frame for the space");
    require(fs.n() > fs.d(), errc::hypothesis_violated, "needs n > d");
    require(F.characteristic() > fs.n(), errc::hypothesis_violated, "needs Char F > n");

    std::optional<TwoGraph> chosen;
    Elem beta_used = F.one();
    long long total = static_cast<long long>(fs.n()) * (fs.n() - 1) * (fs.n() - 2) / 6;
    for (Elem beta : {F.one(), F.neg(F.one())}) {
        TwoGraph tg = two_graph_of(fs, beta);
        bool degenerate = tg.coherent.empty() || static_cast<long long>(tg.coherent.size()) == total;
        if (!degenerate) {
            chosen = std::move(tg);
            beta_used = beta;
            break;
        }
    }
    require(chosen.has_value(), errc::hypothesis_violated,
            "induced two-graphs are trivial or complete for both roots");

    EtfTwoGraphReport rep;
    rep.beta_used = beta_used;
    rep.two_graph = *chosen;
    rep.etf_verdict = etf_verify(fs).verdict;
    rep.twograph_regular = two_graph_regularity(*chosen).regular;
    rep.agree = rep.etf_verdict == rep.twograph_regular;
    rep.n_even = fs.n() % 2 == 0;
    return rep;
}

struct SimplexInfo {
    std::vector<int> indices;  // 1-based support, size s+1
    int s = 0;
    Elem c_prime;
    Discriminant discr;
    std::optional<bool> criteria_agree;  // triple-product route, when applicable
};

namespace detail {

inline void simplex_extend(const FrameSystem& fs, int s, std::vector<int>& cur, int next,
                           std::vector<SimplexInfo>& out, bool criteria_applicable, Elem a,
                           Elem b) {
    const Field& F = *fs.field();
    int n = fs.n();
    int want = s + 1;
    if (static_cast<int>(cur.size()) == want) {
        auto sub = sub_system(fs, cur);
        auto ts = frame_status(sub);
        if (!(ts.tight && ts.span_dim == s && ts.is_frame_for_span)) return;
        SimplexInfo info;
        for (int j : cur) info.indices.push_back(j + 1);
        info.s = s;
        info.c_prime = ts.c;
        info.discr = discriminant_of(sub.gram);
        if (criteria_applicable) {
            // a^2 = s^2 b; all triples in kappa equal -a^3/s^3 != 0; the cross
            // sums over kappa hit (s+1)ab/s for the lowest anchor.
            Elem se = F.from_int(s);
            bool ok = F.mul(a, a) == F.mul(F.mul(se, se), b);
            Elem ratio = F.div(a, se);
            Elem target3 = F.neg(F.mul(F.mul(ratio, ratio), ratio));
            ok = ok && !F.is_zero(target3);
            for (size_t x = 0; x < cur.size() && ok; ++x)
                for (size_t y = x + 1; y < cur.size() && ok; ++y)
                    for (size_t z = y + 1; z < cur.size() && ok; ++z) {
                        Elem d3 = F.mul(F.mul(fs.g(cur[x], cur[y]), fs.g(cur[y], cur[z])),
                                        fs.g(cur[z], cur[x]));
                        if (d3 != target3) ok = false;
                    }
            Elem cross_target = F.mul(F.div(F.from_int(s + 1), se), F.mul(a, b));
            int anchor = cur[0];
            for (int k = 0; k < n && ok; ++k) {
                if (std::find(cur.begin(), cur.end(), k) != cur.end()) continue;
                Elem sum = F.zero();
                for (int j : cur)
                    sum = F.add(sum, F.mul(F.mul(fs.g(anchor, k), fs.g(k, j)), fs.g(j, anchor)));
                if (sum != cross_target) ok = false;
            }
            info.criteria_agree = ok;
        }
        out.push_back(std::move(info));
        return;
    }
    for (int j = next; j < n; ++j) {
        if (n - j < want - static_cast<int>(cur.size())) break;
        cur.push_back(j);
        std::vector<int> all(cur);
        if (rank_of(submatrix(fs.gram, all, all)) <= s)
            simplex_extend(fs, s, cur, j + 1, out, criteria_applicable, a, b);
        cur.pop_back();
    }
}

}  // namespace detail

/// Enumerate the regular s-simplices inside an equiangular system: (s+1)-sized
/// supports whose subsystem is an ETF for an s-dimensional span. Verified
/// directly; the triple-product criteria are cross-evaluated when the ambient
/// system is an ETF and Char does not divide s(s+1).
inline std::vector<SimplexInfo> simplex_enumerate(const FrameSystem& fs,
                                                  std::optional<std::pair<int, int>> s_range = {}) {
    const Field& F = *fs.field();
    auto eq = equiangular_of(fs);
    require(eq.has_value(), errc::not_equiangular, "simplex enumeration needs an equiangular system");
    auto ts = frame_status(fs);
    int lo = s_range ? s_range->first : 2;
    int hi = s_range ? s_range->second : ts.span_dim;
    require(lo >= 1, errc::hypothesis_violated, "s range starts at 1");

    bool ambient_is_etf = etf_verify(fs).verdict;
    std::vector<SimplexInfo> out;
    for (int s = lo; s <= hi; ++s) {
        if (s > 1 && F.is_zero(eq->b)) continue;  // b = 0 admits no s > 1 simplex
        if (s + 1 > fs.n()) break;
        bool criteria = ambient_is_etf && fs.n() > ts.span_dim &&
                        F.characteristic() > 2 &&
                        !F.is_zero(F.from_int(s)) && !F.is_zero(F.from_int(s + 1));
        std::vector<int> cur;
        detail::simplex_extend(fs, s, cur, 0, out, criteria, eq->a, eq->b);
    }
    return out;
}

struct IncoherentSet {
    std::vector<int> indices;  // 1-based, ascending
    Elem beta;
    bool linearly_independent = false;
};

struct IncoherenceReport {
    int inc = 0;
    IncoherentSet witness;
    int inc_neg = 0;
    int inc_min = 0;
    std::optional<bool> bound_ok;  // inc_min <= d, when the corollary applies
};

namespace detail {

// Largest subset whose triples all have product beta^3, by lexicographic DFS
// with best-so-far pruning. signs[j][k] is +-1 according to G_jk = +-beta.
inline void incoherence_dfs(const std::vector<std::vector<int>>& sign, int n,
                            std::vector<int>& cur, std::vector<int>& eps, int next,
                            std::vector<int>& best) {
    if (static_cast<int>(cur.size()) > static_cast<int>(best.size())) best = cur;
    for (int v = next; v < n; ++v) {
        if (static_cast<int>(cur.size()) + (n - v) <= static_cast<int>(best.size())) break;
        int ev = 1;
        bool ok = true;
        if (!cur.empty()) {
            ev = eps[cur[0]] * sign[cur[0]][v];
            for (size_t i = 1; i < cur.size() && ok; ++i)
                if (sign[cur[i]][v] != eps[cur[i]] * ev) ok = false;
        }
        if (!ok) continue;
        cur.push_back(v);
        eps[v] = ev;
        incoherence_dfs(sign, n, cur, eps, v + 1, best);
        cur.pop_back();
    }
}

inline std::vector<int> max_incoherent(const FrameSystem& fs, Elem beta) {
    const Field& F = *fs.field();
    int n = fs.n();
    std::vector<std::vector<int>> sign(n, std::vector<int>(n, 0));
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            if (j == k) continue;
            require(fs.g(j, k) == beta || fs.g(j, k) == F.neg(beta), errc::beta_not_root,
                    "pair products are not +-beta");
            sign[j][k] = fs.g(j, k) == beta ? 1 : -1;
        }
    std::vector<int> cur, best, eps(n, 1);
    incoherence_dfs(sign, n, cur, eps, 0, best);
    return best;
}

}  // namespace detail

inline bool is_beta_incoherent(const FrameSystem& fs, Elem beta, const std::vector<int>& idx0) {
    const Field& F = *fs.field();
    if (idx0.size() <= 2) return true;
    Elem target = F.mul(F.mul(beta, beta), beta);
    for (size_t x = 0; x < idx0.size(); ++x)
        for (size_t y = x + 1; y < idx0.size(); ++y)
            for (size_t z = y + 1; z < idx0.size(); ++z) {
                Elem d3 = F.mul(F.mul(fs.g(idx0[x], idx0[y]), fs.g(idx0[y], idx0[z])),
                                fs.g(idx0[z], idx0[x]));
                if (d3 != target) return false;
            }
    return true;
}

/// Incoherence number for both roots, a lexicographically-least maximum
/// witness for beta, and the incoherence bound when its hypotheses hold.
inline IncoherenceReport incoherence_number(const FrameSystem& fs, Elem beta) {
    const Field& F = *fs.field();
    require(!F.case_u(), errc::case_u, "incoherence needs an orthogonal geometry");
    auto eq = equiangular_of(fs);
    require(eq.has_value() && !F.is_zero(eq->b), errc::not_equiangular,
            "incoherence needs an (a,b)-equiangular system with b != 0");
    require(F.mul(beta, beta) == eq->b, errc::beta_not_root, "beta^2 != b");

    IncoherenceReport rep;
    std::vector<int> best = detail::max_incoherent(fs, beta);
    std::vector<int> best_neg = detail::max_incoherent(fs, F.neg(beta));
    rep.inc = static_cast<int>(best.size());
    rep.inc_neg = static_cast<int>(best_neg.size());
    rep.inc_min = std::min(rep.inc, rep.inc_neg);
    rep.witness.beta = beta;
    for (int v : best) rep.witness.indices.push_back(v + 1);
    std::vector<int> cols(best.begin(), best.end());
    std::vector<int> rows(fs.d());
    for (int i = 0; i < fs.d(); ++i) rows[i] = i;
    rep.witness.linearly_independent =
        rank_of(submatrix(fs.synthesis, rows, cols)) == static_cast<int>(cols.size());

    bool hyp = !F.is_zero(eq->a) && F.mul(eq->a, eq->a) != eq->b &&
               !F.is_zero(F.from_int(fs.d()));
    if (hyp) rep.bound_ok = rep.inc_min <= fs.d();
    return rep;
}

/// Sign-flip the vectors of the set so every pairwise product inside equals
/// beta; returns the switched system and its certificate.
inline std::pair<FrameSystem, SwitchingCertificate> switch_normalize_incoherent(
    const FrameSystem& fs, const IncoherentSet& set) {
    const Field& F = *fs.field();
    std::vector<int> idx0;
    for (int j : set.indices) {
        require(j >= 1 && j <= fs.n(), errc::index_out_of_range, "set index outside [1, n]");
        idx0.push_back(j - 1);
    }
    require(is_beta_incoherent(fs, set.beta, idx0), errc::not_incoherent,
            "set is not beta-incoherent in this system");

    std::vector<Elem> t(fs.n(), F.one());
    if (idx0.size() >= 2) {
        int anchor = idx0[0];
        for (size_t i = 1; i < idx0.size(); ++i)
            if (fs.g(anchor, idx0[i]) != set.beta) t[idx0[i]] = F.neg(F.one());
    }
    Matrix syn = fs.synthesis;
    for (int j = 0; j < fs.n(); ++j)
        for (int i = 0; i < syn.rows; ++i) syn.at(i, j) = F.mul(syn.at(i, j), t[j]);
    FrameSystem switched = frame_make(fs.space, syn);
    for (size_t x = 0; x < idx0.size(); ++x)
        for (size_t y = x + 1; y < idx0.size(); ++y)
            require(switched.g(idx0[x], idx0[y]) == set.beta, errc::not_incoherent,
                    "normalization failed to reach all-beta products");

    SwitchingCertificate cert;
    cert.equivalent = true;
    cert.strategy = "explicit";
    cert.t_diag = std::move(t);
    return {std::move(switched), std::move(cert)};
}

struct GammaReport {
    std::vector<int> gamma1, gamma2;  // 1-based, partition of the set
    int g1 = 0, g2 = 0;
    Elem rho;  // a / beta
    bool root_check = false;
    bool intersection_check = true;
    bool smallest_root_check = true;  // refined check, Char F > d only
};

namespace detail {

// Partition of the incoherent set by the sign of <gamma, psi_delta> in the
// normalized system; first component is the smaller one.
inline std::pair<std::vector<int>, std::vector<int>> gamma_partition(const FrameSystem& switched,
                                                                     const std::vector<int>& set0,
                                                                     Elem beta, int gamma0) {
    const Field& F = *switched.field();
    std::vector<int> plus, minus;
    for (int d : set0) {
        Elem p = switched.g(gamma0, d);
        require(p == beta || p == F.neg(beta), errc::hypothesis_violated,
                "outside vector has a product other than +-beta");
        (p == beta ? plus : minus).push_back(d);
    }
    if (plus.size() <= minus.size()) return {plus, minus};
    return {minus, plus};
}

}  // namespace detail

/// Root and intersection congruences for a maximal linearly independent
/// beta-incoherent set of size d against one outside vector.
inline GammaReport gamma_analyze(const FrameSystem& fs, const IncoherentSet& set, int outside) {
    const Field& F = *fs.field();
    require(!F.case_u(), errc::case_u, "orthogonal geometries only");
    auto eq = equiangular_of(fs);
    require(eq.has_value() && !F.is_zero(eq->b), errc::not_equiangular,
            "needs an (a,b)-equiangular system with b != 0");
    require(F.mul(set.beta, set.beta) == eq->b, errc::beta_not_root, "beta^2 != b");
    require(!F.is_zero(eq->a) && F.mul(eq->a, eq->a) != eq->b, errc::hypothesis_violated,
            "needs a != 0 and a^2 != b");

    std::vector<int> set0;
    for (int j : set.indices) set0.push_back(j - 1);
    require(is_beta_incoherent(fs, set.beta, set0), errc::not_incoherent,
            "set is not beta-incoherent");
    for (int v = 0; v < fs.n(); ++v) {
        if (std::find(set0.begin(), set0.end(), v) != set0.end()) continue;
        std::vector<int> ext = set0;
        ext.push_back(v);
        require(!is_beta_incoherent(fs, set.beta, ext), errc::not_maximal,
                "set extends to a larger incoherent set");
    }
    std::vector<int> rows(fs.d());
    for (int i = 0; i < fs.d(); ++i) rows[i] = i;
    require(rank_of(submatrix(fs.synthesis, rows, set0)) == static_cast<int>(set0.size()),
            errc::not_independent, "set is not linearly independent");
    require(static_cast<int>(set0.size()) == fs.d(), errc::hypothesis_violated,
            "set must have size d");

    int gamma0 = outside - 1;
    require(outside >= 1 && outside <= fs.n(), errc::index_out_of_range, "outside index");
    require(std::find(set0.begin(), set0.end(), gamma0) == set0.end(), errc::hypothesis_violated,
            "outside vector lies in the set");

    auto [switched, cert] = switch_normalize_incoherent(fs, set);
    auto [g1set, g2set] = detail::gamma_partition(switched, set0, set.beta, gamma0);

    GammaReport rep;
    for (int v : g1set) rep.gamma1.push_back(v + 1);
    for (int v : g2set) rep.gamma2.push_back(v + 1);
    rep.g1 = static_cast<int>(g1set.size());
    rep.g2 = static_cast<int>(g2set.size());
    rep.rho = F.div(eq->a, set.beta);

    int d = fs.d();
    auto quadratic = [&](long long x) {
        Elem xe = F.from_int(x);
        Elem rho1 = F.sub(rep.rho, F.one());
        Elem t1 = F.mul(F.from_int(4), F.mul(xe, xe));
        Elem t2 = F.mul(F.mul(F.from_int(4), F.from_int(d)), xe);
        Elem t3 = F.mul(F.mul(rho1, rho1), F.add(F.from_int(d), rep.rho));
        return F.add(F.sub(t1, t2), t3);
    };
    rep.root_check = F.is_zero(quadratic(rep.g1)) && F.is_zero(quadratic(rep.g2));

    if (F.characteristic() > d) {
        std::vector<long long> roots;
        for (long long x = 0; x < F.characteristic() && roots.size() < 2; ++x)
            if (F.is_zero(quadratic(x))) roots.push_back(x);
        std::vector<long long> got{rep.g1, rep.g2};
        std::sort(got.begin(), got.end());
        if (roots.size() == 2)
            rep.smallest_root_check = got[0] == roots[0] && got[1] == roots[1];
        else if (roots.size() == 1)
            rep.smallest_root_check = got[0] == roots[0] && got[1] == roots[0];
        else
            rep.smallest_root_check = false;
    }

    // Intersection congruence against every other outside vector; on a size
    // tie for delta's partition both labelings are admitted.
    Elem rho1 = F.sub(rep.rho, F.one());
    Elem quarter = F.inv(F.from_int(4));
    Elem delta_a = F.mul(F.mul(rho1, rho1), quarter);
    Elem delta_b = F.mul(F.sub(F.mul(rep.rho, rep.rho), F.one()), quarter);
    for (int v = 0; v < fs.n() && rep.intersection_check; ++v) {
        if (v == gamma0 || std::find(set0.begin(), set0.end(), v) != set0.end()) continue;
        auto [h1, h2] = detail::gamma_partition(switched, set0, set.beta, v);
        auto inter = [&](const std::vector<int>& x, const std::vector<int>& y) {
            long long c = 0;
            for (int e : x)
                if (std::find(y.begin(), y.end(), e) != y.end()) ++c;
            return c;
        };
        auto congruent = [&](long long s) {
            Elem lhs = F.from_int(s);
            Elem base = F.from_int(static_cast<long long>(rep.g1));
            return lhs == F.sub(base, delta_a) || lhs == F.sub(base, delta_b);
        };
        bool ok = congruent(inter(g1set, h1));
        if (!ok && h1.size() == h2.size()) ok = congruent(inter(g1set, h2));
        if (!ok) rep.intersection_check = false;
    }
    return rep;
}

struct FisherReport {
    bool applicable = false;  // 2-design with k < n
    bool holds = false;       // |B| >= n
    bool r_equals_k = false;  // when |B| = n
};

struct DesignReport {
    bool is_design = false;
    int t = 0;
    int n_points = 0;
    int k = 0;
    long long lambda = -1;
    long long r = -1;  // blocks through a point, when constant
    bool r_constant = false;
    bool identity_bk_nr = false;   // |B| k = n r
    bool identity_rk_nl = false;   // r(k-1) = (n-1) lambda
    std::vector<long long> intersection_numbers;  // sorted distinct sizes
    bool quasi_symmetric = false;  // at most two intersection numbers
    FisherReport fisher;
    std::vector<std::vector<int>> blocks;  // normalized: sorted points, sorted list kept in input order
};

/// Exhaustive t-design verification with the classical counting identities,
/// the intersection-number profile, and the Fisher inequality report.
inline DesignReport design_verify(int n_points, const std::vector<std::vector<int>>& blocks_in,
                                  int t) {
    require(n_points >= 1, errc::hypothesis_violated, "need at least one point");
    require(t >= 1, errc::hypothesis_violated, "need t >= 1");
    require(!blocks_in.empty(), errc::hypothesis_violated, "need at least one block");

    DesignReport rep;
    rep.t = t;
    rep.n_points = n_points;
    rep.blocks.reserve(blocks_in.size());
    for (const auto& b : blocks_in) {
        std::vector<int> blk = b;
        std::sort(blk.begin(), blk.end());
        require(std::adjacent_find(blk.begin(), blk.end()) == blk.end(), errc::hypothesis_violated,
                "block has a repeated point");
        for (int p : blk)
            require(p >= 1 && p <= n_points, errc::index_out_of_range, "block point outside [1, n]");
        rep.blocks.push_back(std::move(blk));
    }
    rep.k = static_cast<int>(rep.blocks[0].size());
    for (const auto& b : rep.blocks)
        require(static_cast<int>(b.size()) == rep.k, errc::unequal_block_sizes,
                "blocks have unequal sizes");

    // exhaustive t-subset counting
    require(t <= n_points, errc::hypothesis_violated, "t exceeds the point count");
    std::vector<int> subset(t);
    for (int i = 0; i < t; ++i) subset[i] = i + 1;
    bool first = true;
    rep.is_design = true;
    while (true) {
        long long cnt = 0;
        for (const auto& b : rep.blocks)
            if (std::includes(b.begin(), b.end(), subset.begin(), subset.end())) ++cnt;
        if (first) {
            rep.lambda = cnt;
            first = false;
        } else if (cnt != rep.lambda) {
            rep.is_design = false;
        }
        // next t-subset of [1, n]
        int i = t - 1;
        while (i >= 0 && subset[i] == n_points - (t - 1 - i)) --i;
        if (i < 0) break;
        ++subset[i];
        for (int j = i + 1; j < t; ++j) subset[j] = subset[j - 1] + 1;
    }

    rep.r_constant = true;
    for (int p = 1; p <= n_points; ++p) {
        long long cnt = 0;
        for (const auto& b : rep.blocks)
            if (std::binary_search(b.begin(), b.end(), p)) ++cnt;
        if (p == 1)
            rep.r = cnt;
        else if (cnt != rep.r)
            rep.r_constant = false;
    }
    if (rep.r_constant) {
        rep.identity_bk_nr = static_cast<long long>(rep.blocks.size()) * rep.k ==
                             static_cast<long long>(n_points) * rep.r;
        rep.identity_rk_nl =
            !rep.is_design || t != 2 ||
            rep.r * (rep.k - 1) == static_cast<long long>(n_points - 1) * rep.lambda;
    }

    std::set<long long> inters;
    for (size_t i = 0; i < rep.blocks.size(); ++i)
        for (size_t j = i + 1; j < rep.blocks.size(); ++j) {
            std::vector<int> common;
            std::set_intersection(rep.blocks[i].begin(), rep.blocks[i].end(),
                                  rep.blocks[j].begin(), rep.blocks[j].end(),
                                  std::back_inserter(common));
            inters.insert(static_cast<long long>(common.size()));
        }
    rep.intersection_numbers.assign(inters.begin(), inters.end());
    rep.quasi_symmetric = rep.intersection_numbers.size() <= 2;

    rep.fisher.applicable = rep.is_design && t == 2 && rep.k < n_points;
    if (rep.fisher.applicable) {
        rep.fisher.holds = rep.blocks.size() >= static_cast<size_t>(n_points);
        if (rep.blocks.size() == static_cast<size_t>(n_points))
            rep.fisher.r_equals_k = rep.r_constant && rep.r == rep.k;
    }
    return rep;
}

struct DesignExtraction {
    DesignReport b1, b2;
    std::optional<DesignReport> merged;       // when g1 = g2
    std::optional<DesignReport> four_design;  // when n = d(d+1)/2, B1 as a 4-design
    long long ell = 0;
    int g1 = 0, g2 = 0;
    bool g1_constant = true;
    bool lambda_formula_ok = false;  // lambda_i = ell (g_i - 1) / (2 g_j)
    bool quasi_prediction_ok = true; // predicted s1, s2 match, when n > 2d
    bool symmetric_case_ok = true;   // one intersection number, when n = 2d
    bool sum_identity_ok = false;    // sum g1 g2 = ell d (d-1) / 2
};

/// Blocks Gamma_i(gamma) over the outside vectors, verified as 2-designs with
/// the predicted parameters.
inline DesignExtraction design_extract(const FrameSystem& fs, const IncoherentSet& set) {
    const Field& F = *fs.field();
    // gamma_analyze validates the shared preconditions; run it on the first
    // outside vector (its existence is required).
    std::vector<int> set0;
    for (int j : set.indices) set0.push_back(j - 1);
    int first_outside = -1;
    for (int v = 0; v < fs.n() && first_outside < 0; ++v)
        if (std::find(set0.begin(), set0.end(), v) == set0.end()) first_outside = v;
    require(first_outside >= 0, errc::hypotheses_not_met, "no vector outside the set");
    gamma_analyze(fs, set, first_outside + 1);

    TwoGraph tg = two_graph_of(fs, set.beta);
    auto an = two_graph_regularity(tg);
    require(an.regular, errc::hypotheses_not_met, "induced two-graph is not regular");

    auto [switched, cert] = switch_normalize_incoherent(fs, set);

    DesignExtraction ex;
    ex.ell = an.ell;
    int d = fs.d();
    std::vector<std::vector<int>> b1, b2;
    long long sum_products = 0;
    bool first = true;
    for (int v = 0; v < fs.n(); ++v) {
        if (std::find(set0.begin(), set0.end(), v) != set0.end()) continue;
        auto [g1set, g2set] = detail::gamma_partition(switched, set0, set.beta, v);
        sum_products += static_cast<long long>(g1set.size()) * g2set.size();
        if (first) {
            ex.g1 = static_cast<int>(g1set.size());
            ex.g2 = static_cast<int>(g2set.size());
            first = false;
        } else if (static_cast<int>(g1set.size()) != ex.g1) {
            ex.g1_constant = false;
        }
        auto renumber = [&](const std::vector<int>& idxs) {
            // blocks live on the point set Gamma, renumbered 1..d by position
            std::vector<int> blk;
            for (int x : idxs) {
                auto it = std::find(set0.begin(), set0.end(), x);
                blk.push_back(static_cast<int>(it - set0.begin()) + 1);
            }
            std::sort(blk.begin(), blk.end());
            return blk;
        };
        b1.push_back(renumber(g1set));
        b2.push_back(renumber(g2set));
    }
    require(ex.g1_constant, errc::hypotheses_not_met, "|Gamma_1(gamma)| is not constant");

    ex.sum_identity_ok =
        2 * sum_products == ex.ell * static_cast<long long>(d) * (d - 1);

    ex.b1 = design_verify(d, b1, 2);
    ex.b2 = design_verify(d, b2, 2);

    if (ex.g1 != ex.g2) {
        auto lambda_matches = [&](const DesignReport& rep, int gi, int gj) {
            return rep.is_design && 2LL * gj * rep.lambda == ex.ell * (gi - 1);
        };
        ex.lambda_formula_ok =
            lambda_matches(ex.b1, ex.g1, ex.g2) && lambda_matches(ex.b2, ex.g2, ex.g1);
    } else {
        std::vector<std::vector<int>> all = b1;
        all.insert(all.end(), b2.begin(), b2.end());
        ex.merged = design_verify(d, all, 2);
        ex.lambda_formula_ok = ex.merged->is_design &&
                               ex.merged->lambda == fs.n() - d - ex.ell;
    }

    int n = fs.n();
    if (n > 2 * d && ex.g1 != ex.g2) {
        Elem rho = F.div(equiangular_of(fs)->a, set.beta);
        Elem quarter = F.inv(F.from_int(4));
        Elem rho1 = F.sub(rho, F.one());
        Elem s1e = F.sub(F.from_int(ex.g1), F.mul(F.mul(rho1, rho1), quarter));
        Elem s2e = F.sub(F.from_int(ex.g1), F.mul(F.sub(F.mul(rho, rho), F.one()), quarter));
        auto smallest = [&](Elem e) {
            for (long long x = 0; x < F.characteristic(); ++x)
                if (F.from_int(x) == e) return x;
            return static_cast<long long>(-1);
        };
        std::vector<long long> pred{smallest(s1e), smallest(s2e)};
        std::sort(pred.begin(), pred.end());
        pred.erase(std::unique(pred.begin(), pred.end()), pred.end());
        ex.quasi_prediction_ok = ex.b1.intersection_numbers == pred;
    }
    if (n == 2 * d) ex.symmetric_case_ok = ex.b1.intersection_numbers.size() <= 1;
    if (2 * n == d * (d + 1) && d >= 4) ex.four_design = design_verify(d, b1, 4);
    return ex;
}

}  // namespace ff
