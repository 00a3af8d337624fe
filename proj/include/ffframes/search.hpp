#pragma once

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "ffframes/frames.hpp"

namespace ff {

enum class SearchMode { all, first, count };
enum class SearchDedup { none, projective, switching_class };

struct SearchSpec {
    HermitianSpace space;
    Elem a, b;
    std::optional<int> n_target;  // nullopt = maximal systems
    SearchMode mode = SearchMode::all;
    SearchDedup dedup = SearchDedup::none;
    bool etf_filter = false;
    uint64_t budget = 10000000;  // candidate-vector budget |F|^dim
    int workers = 1;
};

struct SearchStats {
    uint64_t nodes_visited = 0;
    uint64_t pruned = 0;
    double wall_time_s = 0.0;
};

struct SearchResult {
    std::vector<FrameSystem> systems;
    uint64_t count = 0;
    SearchStats stats;
};

namespace detail {

struct Candidate {
    std::vector<Elem> v;       // coordinates
    std::vector<Elem> formed;  // M v, cached for fast products
};

// <u, v> for candidates via the cached M v.
inline Elem cand_product(const Field& F, const Candidate& u, const Candidate& v) {
    Elem acc = F.zero();
    for (size_t i = 0; i < u.v.size(); ++i)
        acc = F.add(acc, F.mul(F.involve(u.v[i]), v.formed[i]));
    return acc;
}

/// Candidate list: all norm-a vectors, one representative per unimodular
/// scaling orbit when a != 0 (lines with a norm-a representative), the full
/// nonzero scan when a = 0. Enumeration follows the canonical vector order.
inline std::vector<Candidate> candidate_vectors(const SearchSpec& spec) {
    const Field& F = *spec.space.F;
    int d = spec.space.dim;
    uint64_t q = F.size();
    std::vector<Candidate> out;
    std::vector<uint64_t> digits(d, 0);
    std::vector<Elem> v(d);
    const auto& mu = F.unimodulars();
    while (true) {
        bool zero = true;
        for (int i = 0; i < d; ++i) {
            v[i] = F.element_at(digits[i]);
            if (!F.is_zero(v[i])) zero = false;
        }
        if (!zero) {
            Candidate c;
            c.v = v;
            c.formed.resize(d);
            for (int i = 0; i < d; ++i) {
                Elem acc = F.zero();
                for (int j = 0; j < d; ++j) acc = F.add(acc, F.mul(spec.space.form.at(i, j), v[j]));
                c.formed[i] = acc;
            }
            Elem norm = cand_product(F, c, c);
            if (norm == spec.a) {
                bool keep = true;
                if (!F.is_zero(spec.a)) {
                    // canonical-least in the unimodular orbit
                    for (Elem lam : mu) {
                        if (lam == F.one()) continue;
                        for (int i = 0; i < d; ++i) {
                            Elem scaled = F.mul(lam, v[i]);
                            if (scaled.code < v[i].code) {
                                keep = false;
                                break;
                            }
                            if (scaled.code > v[i].code) break;
                        }
                        if (!keep) break;
                    }
                } else if (spec.dedup == SearchDedup::projective) {
                    // one representative per line: first nonzero coordinate 1
                    for (int i = 0; i < d; ++i) {
                        if (F.is_zero(v[i])) continue;
                        keep = v[i] == F.one();
                        break;
                    }
                }
                if (keep) out.push_back(std::move(c));
            }
        }
        int i = d - 1;
        while (i >= 0 && ++digits[i] == q) digits[i--] = 0;
        if (i < 0) break;
    }
    return out;
}

inline FrameSystem system_from(const SearchSpec& spec, const std::vector<Candidate>& cand,
                               const std::vector<int>& pick) {
    Matrix syn(spec.space.F, spec.space.dim, static_cast<int>(pick.size()));
    for (size_t j = 0; j < pick.size(); ++j)
        for (int i = 0; i < spec.space.dim; ++i) syn.at(i, static_cast<int>(j)) = cand[pick[j]].v[i];
    return frame_make(spec.space, syn);
}

/// Pairwise join compatibility as bitsets: bit j of row i says the pair
/// product of candidates i and j equals b. The DFS then extends by bitset
/// intersection, the usual clique-search arrangement.
struct CompatTable {
    size_t n = 0, words = 0;
    std::vector<uint64_t> bits;

    CompatTable(const SearchSpec& spec, const std::vector<Candidate>& cand) {
        const Field& F = *spec.space.F;
        n = cand.size();
        words = (n + 63) / 64;
        bits.assign(n * words, 0);
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i + 1; j < n; ++j) {
                Elem p = cand_product(F, cand[i], cand[j]);
                if (F.norm(p) != spec.b) continue;
                bits[i * words + j / 64] |= uint64_t(1) << (j % 64);
                bits[j * words + i / 64] |= uint64_t(1) << (i % 64);
            }
    }
    const uint64_t* row(size_t i) const { return &bits[i * words]; }
};

struct Walker {
    const SearchSpec& spec;
    const Field& F;
    const std::vector<Candidate>& cand;
    const CompatTable& compat;
    std::vector<int> chosen;
    std::vector<std::vector<int>> found;  // candidate index lists
    SearchStats stats;
    bool stop = false;

    // allowed = candidates compatible with everything chosen so far
    std::vector<uint64_t> allowed, chosen_mask;

    void init_root(int root) {
        allowed.assign(compat.words, 0);
        chosen_mask.assign(compat.words, 0);
        const uint64_t* r = compat.row(root);
        for (size_t w = 0; w < compat.words; ++w) allowed[w] = r[w];
        chosen_mask[root / 64] |= uint64_t(1) << (root % 64);
        chosen.push_back(root);
    }

    bool is_maximal() const {
        for (size_t w = 0; w < compat.words; ++w)
            if (allowed[w] & ~chosen_mask[w]) return false;
        return true;
    }

    void record() {
        if (spec.etf_filter) {
            if (chosen.size() < 2) return;
            FrameSystem fs = system_from(spec, cand, chosen);
            if (!etf_verify(fs).verdict) return;
        }
        found.push_back(chosen);
        if (spec.mode == SearchMode::first) stop = true;
    }

    void dfs(int next) {
        ++stats.nodes_visited;
        if (stop) return;
        if (spec.n_target) {
            if (static_cast<int>(chosen.size()) == *spec.n_target) {
                record();
                return;
            }
        } else if (!chosen.empty() && is_maximal()) {
            record();
            if (stop) return;
        }
        for (size_t w = next / 64; w < compat.words && !stop; ++w) {
            uint64_t mask = allowed[w];
            if (w == static_cast<size_t>(next / 64)) mask &= ~((uint64_t(1) << (next % 64)) - 1);
            while (mask && !stop) {
                int i = static_cast<int>(w * 64 + std::countr_zero(mask));
                mask &= mask - 1;
                if (spec.n_target && static_cast<int>(cand.size()) - i <
                                         *spec.n_target - static_cast<int>(chosen.size())) {
                    ++stats.pruned;
                    return;
                }
                std::vector<uint64_t> saved = allowed;
                const uint64_t* r = compat.row(i);
                for (size_t x = 0; x < compat.words; ++x) allowed[x] &= r[x];
                chosen.push_back(i);
                chosen_mask[i / 64] |= uint64_t(1) << (i % 64);
                dfs(i + 1);
                chosen_mask[i / 64] &= ~(uint64_t(1) << (i % 64));
                chosen.pop_back();
                allowed = std::move(saved);
            }
        }
    }
};

/// Lexicographically-least switched Gram, the switching-class canonical key.
inline std::vector<uint32_t> switching_class_key(const FrameSystem& fs) {
    const Field& F = *fs.field();
    int n = fs.n();
    const auto& mu = F.unimodulars();
    std::vector<std::vector<Elem>> t_options(n, std::vector<Elem>{});
    for (int j = 0; j < n; ++j) t_options[j] = std::vector<Elem>(mu.begin(), mu.end());
    std::vector<Elem> t(n, F.one());
    std::vector<bool> fixed(n, false);
    fixed[0] = true;
    // scan entries row-major; each undetermined column is fixed greedily to
    // minimize the switched entry, zero entries leave it free
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j || !fixed[i] || fixed[j]) continue;
            Elem g = fs.g(i, j);
            if (F.is_zero(g)) continue;
            Elem base = F.mul(F.involve(t[i]), g);
            Elem best = F.mul(base, t_options[j][0]);
            Elem pick = t_options[j][0];
            for (Elem lam : t_options[j]) {
                Elem val = F.mul(base, lam);
                if (val.code < best.code) {
                    best = val;
                    pick = lam;
                }
            }
            t[j] = pick;
            fixed[j] = true;
        }
    std::vector<uint32_t> key;
    key.reserve(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            key.push_back(F.mul(F.mul(F.involve(t[i]), fs.g(i, j)), t[j]).code);
    return key;
}

}  // namespace detail

/// Depth-first extension over the candidate vectors: a vector joins iff its
/// norm is a and its product pair with every chosen vector equals b. Output
/// order is canonical and independent of the worker count.
inline SearchResult search_equiangular(const SearchSpec& spec) {
    const Field& F = *spec.space.F;
    auto t0 = std::chrono::steady_clock::now();
    uint64_t space_size = 1;
    for (int i = 0; i < spec.space.dim; ++i) {
        space_size *= F.size();
        require(space_size <= spec.budget, errc::budget_exceeded,
                "candidate-vector budget exceeded");
    }

    std::vector<detail::Candidate> cand = detail::candidate_vectors(spec);
    require(cand.size() <= 20000, errc::budget_exceeded,
            "candidate set too large for the pairwise table");
    detail::CompatTable compat(spec, cand);
    int workers = std::max(1, spec.workers);

    // Split by first-vector choice; merge per-subtree results in canonical
    // order so totals and listings are deterministic.
    SearchResult result;
    require(!spec.n_target || *spec.n_target >= 1, errc::hypothesis_violated,
            "n_target must be at least 1");

    std::vector<std::vector<std::vector<int>>> found_per_root(cand.size());
    std::vector<SearchStats> stats_per_root(cand.size());
    std::vector<bool> first_hit(cand.size(), false);

    auto run_root = [&](int root) {
        detail::Walker w{spec, F, cand, compat};
        w.init_root(root);
        w.dfs(root + 1);
        found_per_root[root] = std::move(w.found);
        stats_per_root[root] = w.stats;
        first_hit[root] = !found_per_root[root].empty();
    };

    if (workers <= 1 || cand.empty()) {
        bool done = false;
        for (size_t root = 0; root < cand.size() && !done; ++root) {
            run_root(static_cast<int>(root));
            if (spec.mode == SearchMode::first && first_hit[root]) done = true;
        }
    } else {
        std::vector<std::thread> pool;
        std::atomic<size_t> next_root{0};
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                while (true) {
                    size_t root = next_root.fetch_add(1);
                    if (root >= cand.size()) break;
                    run_root(static_cast<int>(root));
                }
            });
        for (auto& th : pool) th.join();
    }

    std::vector<std::vector<int>> picks;
    for (size_t root = 0; root < cand.size(); ++root) {
        result.stats.nodes_visited += stats_per_root[root].nodes_visited;
        result.stats.pruned += stats_per_root[root].pruned;
        for (auto& p : found_per_root[root]) {
            picks.push_back(std::move(p));
            if (spec.mode == SearchMode::first) break;
        }
        if (spec.mode == SearchMode::first && !picks.empty()) break;
    }

    std::vector<std::vector<uint32_t>> seen_keys;
    for (const auto& pick : picks) {
        FrameSystem fs = detail::system_from(spec, cand, pick);
        if (spec.dedup == SearchDedup::switching_class) {
            auto key = detail::switching_class_key(fs);
            if (std::find(seen_keys.begin(), seen_keys.end(), key) != seen_keys.end()) continue;
            seen_keys.push_back(std::move(key));
        }
        ++result.count;
        if (spec.mode != SearchMode::count) result.systems.push_back(std::move(fs));
        if (spec.mode == SearchMode::first) break;
    }

    result.stats.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

}  // namespace ff
