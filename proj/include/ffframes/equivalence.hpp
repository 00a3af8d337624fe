#pragma once

#include <algorithm>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "ffframes/frames.hpp"

namespace ff {

struct MProduct {
    std::vector<int> indices;  // 1-based
    Elem value;
};

/// Cyclic product of consecutive scalar products around the index tuple.
inline MProduct m_product(const FrameSystem& fs, const std::vector<int>& indices) {
    require(!indices.empty(), errc::index_out_of_range, "empty index tuple");
    for (int j : indices)
        require(j >= 1 && j <= fs.n(), errc::index_out_of_range,
                "index " + std::to_string(j) + " outside [1, n]");
    const Field& F = *fs.field();
    Elem v = F.one();
    for (size_t t = 0; t < indices.size(); ++t) {
        int j = indices[t] - 1;
        int k = indices[(t + 1) % indices.size()] - 1;
        v = F.mul(v, fs.g(j, k));
    }
    return {indices, v};
}

/// Exponential gauge <phi_j,phi_k> / sqrt(Delta(phi_j,phi_k)) with the
/// canonical plain root; 0 when the double product vanishes. 1-based indices.
inline Elem gauge_of(const FrameSystem& fs, int j, int k) {
    require(j >= 1 && j <= fs.n() && k >= 1 && k <= fs.n(), errc::index_out_of_range,
            "gauge index outside [1, n]");
    const Field& F = *fs.field();
    Elem num = fs.g(j - 1, k - 1);
    Elem d2 = F.mul(num, fs.g(k - 1, j - 1));
    if (F.is_zero(d2)) return F.zero();
    auto root = F.sqrt_plain(d2);
    require(root.has_value(), errc::hypothesis_violated,
            "double product is not a plain square");  // cannot happen in Case O/U
    return F.div(num, *root);
}

struct UnitaryEquivReport {
    bool equivalent = false;
    std::string reason;
};

/// Gram + kernel criterion; no witness unitary is constructed.
inline UnitaryEquivReport unitary_equiv(const FrameSystem& A, const FrameSystem& B) {
    require(A.field()->same_field(*B.field()), errc::shape_mismatch, "different fields");
    require(A.n() == B.n(), errc::shape_mismatch, "different numbers of vectors");
    if (A.gram != B.gram) return {false, "gram_mismatch"};
    Matrix ka = rank_kernel(A.synthesis).kernel_basis;
    Matrix kb = rank_kernel(B.synthesis).kernel_basis;
    if (!same_subspace(ka, kb)) return {false, "kernel_mismatch"};
    return {true, "gram_and_kernel_match"};
}

enum class SwitchStrategy { automatic, triples, general };

struct SwitchingCertificate {
    bool equivalent = false;
    std::vector<Elem> t_diag;  // unimodular entries with Psi+Psi = T+(Phi+Phi)T
    std::string strategy;      // which route decided
    std::string obstruction;   // why not, when not equivalent
    std::vector<int> obstruction_indices;  // offending m-product tuple (1-based)
};

namespace detail {

inline bool certificate_valid(const FrameSystem& A, const FrameSystem& B,
                              const std::vector<Elem>& t) {
    const Field& F = *A.field();
    int n = A.n();
    Matrix conj(A.field(), n, n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            conj.at(j, k) = F.mul(F.mul(F.involve(t[j]), A.g(j, k)), t[k]);
    return conj == B.gram;
}

inline std::optional<SwitchingCertificate> low_order_obstruction(const FrameSystem& A,
                                                                 const FrameSystem& B) {
    const Field& F = *A.field();
    int n = A.n();
    for (int j = 0; j < n; ++j)
        if (A.g(j, j) != B.g(j, j)) {
            SwitchingCertificate c;
            c.obstruction = "1-product mismatch";
            c.obstruction_indices = {j + 1};
            return c;
        }
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k) {
            Elem da = F.mul(A.g(j, k), A.g(k, j));
            Elem db = F.mul(B.g(j, k), B.g(k, j));
            if (da != db) {
                SwitchingCertificate c;
                c.obstruction = "2-product mismatch";
                c.obstruction_indices = {j + 1, k + 1};
                return c;
            }
        }
    return std::nullopt;
}

inline SwitchingCertificate triples_decide(const FrameSystem& A, const FrameSystem& B) {
    const Field& F = *A.field();
    int n = A.n();
    SwitchingCertificate cert;
    cert.strategy = "triples";
    if (auto low = low_order_obstruction(A, B)) {
        cert.obstruction = low->obstruction;
        cert.obstruction_indices = low->obstruction_indices;
        return cert;
    }
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k)
            for (int l = k + 1; l < n; ++l) {
                Elem ta = F.mul(F.mul(A.g(j, k), A.g(k, l)), A.g(l, j));
                Elem tb = F.mul(F.mul(B.g(j, k), B.g(k, l)), B.g(l, j));
                if (ta != tb) {
                    cert.obstruction = "3-product mismatch";
                    cert.obstruction_indices = {j + 1, k + 1, l + 1};
                    return cert;
                }
            }

    // Synthesize T via the gauge construction relative to the first vector.
    std::vector<Elem> t(n, F.one());
    bool all_nonzero = true;
    for (int j = 1; j < n; ++j)
        if (F.is_zero(A.g(0, j))) all_nonzero = false;
    if (all_nonzero && n > 1) {
        for (int j = 1; j < n; ++j) {
            Elem eta_a = gauge_of(A, j + 1, 1);
            Elem eta_b = gauge_of(B, 1, j + 1);
            t[j] = F.mul(eta_a, eta_b);
        }
    }
    require(certificate_valid(A, B, t), errc::hypothesis_violated,
            "internal: gauge certificate failed verification");
    cert.equivalent = true;
    cert.t_diag = std::move(t);
    return cert;
}

inline SwitchingCertificate general_decide(const FrameSystem& A, const FrameSystem& B) {
    const Field& F = *A.field();
    int n = A.n();
    SwitchingCertificate cert;
    cert.strategy = "general";
    if (auto low = low_order_obstruction(A, B)) {
        cert.obstruction = low->obstruction;
        cert.obstruction_indices = low->obstruction_indices;
        return cert;
    }

    // Shared correlation network; spanning forest by BFS from lowest indices.
    std::vector<int> parent(n, -1), comp(n, -1), order;
    int comp_count = 0;
    std::vector<Elem> c(n, F.one());
    for (int root = 0; root < n; ++root) {
        if (comp[root] >= 0) continue;
        comp[root] = comp_count;
        std::deque<int> queue{root};
        while (!queue.empty()) {
            int j = queue.front();
            queue.pop_front();
            order.push_back(j);
            for (int k = 0; k < n; ++k) {
                if (k == j || comp[k] >= 0 || F.is_zero(A.g(j, k))) continue;
                comp[k] = comp_count;
                parent[k] = j;
                // c_k with <phi_j,phi_k> = <c_j psi_j, c_k psi_k>
                c[k] = F.div(A.g(j, k), F.mul(F.involve(c[j]), B.g(j, k)));
                queue.push_back(k);
            }
        }
        ++comp_count;
    }

    // Non-tree closures, in lexicographic edge order.
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k) {
            if (F.is_zero(A.g(j, k))) continue;
            if (parent[k] == j || parent[j] == k) continue;
            Elem scaled = F.mul(F.mul(F.involve(c[j]), c[k]), B.g(j, k));
            if (scaled != A.g(j, k)) {
                // Reconstruct the cycle: tree path k -> j plus the edge (j,k).
                auto path_to_root = [&](int v) {
                    std::vector<int> p;
                    for (; v >= 0; v = parent[v]) p.push_back(v);
                    return p;
                };
                std::vector<int> pj = path_to_root(j), pk = path_to_root(k);
                // strip the common tail above the meeting point
                while (pj.size() > 1 && pk.size() > 1 && pj[pj.size() - 2] == pk[pk.size() - 2]) {
                    pj.pop_back();
                    pk.pop_back();
                }
                std::vector<int> cycle(pj.begin(), pj.end());
                for (auto it = pk.rbegin() + 1; it != pk.rend(); ++it) cycle.push_back(*it);
                cert.obstruction = std::to_string(cycle.size()) + "-product mismatch";
                for (int v : cycle) cert.obstruction_indices.push_back(v + 1);
                return cert;
            }
        }

    // Kernel bookkeeping: ker(Phi T) = ker(Psi) with t_j = c_j^sigma. The
    // certificate is unique only up to a unimodular scalar per component, so
    // when the canonical choice fails and the enumeration stays small, try
    // the others before giving up.
    Matrix kb = rank_kernel(B.synthesis).kernel_basis;
    auto kernel_matches = [&](const std::vector<Elem>& t) {
        Matrix at = A.synthesis;
        for (int col = 0; col < n; ++col)
            for (int row = 0; row < at.rows; ++row)
                at.at(row, col) = F.mul(at.at(row, col), t[col]);
        return same_subspace(rank_kernel(at).kernel_basis, kb);
    };
    std::vector<Elem> t(n);
    for (int j = 0; j < n; ++j) t[j] = F.involve(c[j]);
    bool kernels_ok = kernel_matches(t);
    if (!kernels_ok && comp_count > 1) {
        const auto& mu = F.unimodulars();
        double combos = 1;
        for (int i = 1; i < comp_count; ++i) combos *= static_cast<double>(mu.size());
        if (combos <= 4096) {
            std::vector<size_t> pick(comp_count, 0);
            while (!kernels_ok) {
                int at = 1;
                while (at < comp_count && ++pick[at] == mu.size()) pick[at++] = 0;
                if (at == comp_count) break;
                std::vector<Elem> tt(n);
                for (int j = 0; j < n; ++j) tt[j] = F.mul(F.involve(mu[pick[comp[j]]]), t[j]);
                if (kernel_matches(tt) && certificate_valid(A, B, tt)) {
                    t = tt;
                    kernels_ok = true;
                }
            }
        }
    }
    if (!kernels_ok) {
        cert.obstruction = "kernel mismatch";
        return cert;
    }
    require(certificate_valid(A, B, t), errc::hypothesis_violated,
            "internal: propagated certificate failed verification");
    cert.equivalent = true;
    cert.t_diag = std::move(t);
    return cert;
}

}  // namespace detail

/// Decide switching equivalence. The triples route (double plus triple
/// products, gauge-synthesized T) needs both systems to be equal-rank frames
/// for their spans with nowhere-zero products or matching equiangular
/// parameters; the general route propagates constants over the correlation
/// network and checks every cycle closure plus the kernel condition.
inline SwitchingCertificate switching_equiv(const FrameSystem& A, const FrameSystem& B,
                                            SwitchStrategy strategy = SwitchStrategy::automatic) {
    require(A.field()->same_field(*B.field()), errc::shape_mismatch, "different fields");
    require(A.n() == B.n(), errc::shape_mismatch, "different numbers of vectors");
    const Field& F = *A.field();
    int n = A.n();

    bool spans_ok = false;
    {
        int ra = rank_of(A.synthesis), rb = rank_of(B.synthesis);
        spans_ok = ra == rb && rank_of(A.gram) == ra && rank_of(B.gram) == rb;
    }
    bool nowhere_zero = true;
    for (int j = 0; j < n && nowhere_zero; ++j)
        for (int k = 0; k < n && nowhere_zero; ++k)
            if (j != k && (F.is_zero(A.g(j, k)) || F.is_zero(B.g(j, k)))) nowhere_zero = false;
    bool equiangular_pair = false;
    if (auto ea = equiangular_of(A)) {
        auto eb = equiangular_of(B);
        equiangular_pair = eb && ea->a == eb->a && ea->b == eb->b;
    }
    bool triples_ok = spans_ok && (nowhere_zero || equiangular_pair);

    switch (strategy) {
        case SwitchStrategy::triples:
            require(triples_ok, errc::strategy_precondition_failed,
                    "triples strategy needs equal-rank span frames with nowhere-zero "
                    "products or matching equiangular parameters");
            return detail::triples_decide(A, B);
        case SwitchStrategy::general:
            return detail::general_decide(A, B);
        case SwitchStrategy::automatic:
            return triples_ok ? detail::triples_decide(A, B) : detail::general_decide(A, B);
    }
    raise(errc::hypothesis_violated, "unreachable");
}

}  // namespace ff
