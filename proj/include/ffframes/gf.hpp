#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "ffframes/errors.hpp"

namespace ff {

enum class Involution { identity, frobenius };

/// Square classes in the Hermitian sense (x = y^σ y). They multiply as the
/// order-2 group with zero absorbing.
enum class SquareClass { zero, square, nonsquare };

inline SquareClass operator*(SquareClass a, SquareClass b) {
    if (a == SquareClass::zero || b == SquareClass::zero) return SquareClass::zero;
    return a == b ? SquareClass::square : SquareClass::nonsquare;
}

/// A field element, encoded as sum c_i p^i over the little-endian
/// coefficients. Only meaningful together with its Field.
struct Elem {
    uint32_t code = 0;
    friend bool operator==(Elem a, Elem b) { return a.code == b.code; }
    friend bool operator!=(Elem a, Elem b) { return a.code != b.code; }
};

class Field;
using FieldPtr = std::shared_ptr<const Field>;

/// F_{p^m} with a fixed involution (identity, or Frobenius x -> x^{p^{m/2}}
/// when m is even). Immutable after construction; arithmetic is table-driven
/// for small orders and polynomial-based otherwise.
class Field {
public:
    static FieldPtr make(long long p, int degree, std::vector<long long> modulus,
                         Involution inv) {
        return FieldPtr(new Field(p, degree, std::move(modulus), inv));
    }

    long long characteristic() const { return p_; }
    int degree() const { return m_; }
    uint64_t size() const { return q_; }
    Involution involution() const { return inv_; }
    bool case_u() const { return inv_ == Involution::frobenius; }
    const std::vector<long long>& modulus() const { return modulus_; }

    bool same_field(const Field& o) const {
        return p_ == o.p_ && m_ == o.m_ && inv_ == o.inv_ && modulus_ == o.modulus_;
    }

    Elem zero() const { return {0}; }
    Elem one() const { return {1}; }
    bool is_zero(Elem a) const { return a.code == 0; }

    Elem from_int(long long n) const {
        long long r = n % p_;
        if (r < 0) r += p_;
        return {static_cast<uint32_t>(r)};
    }

    Elem from_rational(long long num, long long den) const {
        Elem d = from_int(den);
        require(!is_zero(d), errc::denominator_vanishes,
                "denominator vanishes in characteristic " + std::to_string(p_));
        return mul(from_int(num), inv(d));
    }

    Elem from_coeffs(const std::vector<long long>& c) const {
        require(static_cast<int>(c.size()) <= m_, errc::invalid_json,
                "element has more coefficients than the field degree");
        uint64_t code = 0;
        uint64_t pk = 1;
        for (size_t i = 0; i < c.size(); ++i, pk *= p_) {
            long long r = c[i] % p_;
            if (r < 0) r += p_;
            code += static_cast<uint64_t>(r) * pk;
        }
        return {static_cast<uint32_t>(code)};
    }

    std::vector<long long> coeffs(Elem a) const {
        std::vector<long long> c(m_);
        uint64_t v = a.code;
        for (int i = 0; i < m_; ++i) {
            c[i] = static_cast<long long>(v % p_);
            v /= p_;
        }
        return c;
    }

    Elem add(Elem a, Elem b) const {
        if (small_) return {add_tab_[a.code * q_ + b.code]};
        return add_slow(a, b);
    }
    Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }
    Elem neg(Elem a) const { return {neg_tab_[a.code]}; }

    Elem mul(Elem a, Elem b) const {
        if (small_) return {mul_tab_[a.code * q_ + b.code]};
        return mul_slow(a, b);
    }

    Elem inv(Elem a) const {
        require(!is_zero(a), errc::denominator_vanishes, "inverse of zero");
        return {inv_tab_[a.code]};
    }
    Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }

    Elem pow(Elem a, unsigned long long e) const {
        Elem r = one();
        Elem base = a;
        while (e) {
            if (e & 1) r = mul(r, base);
            base = mul(base, base);
            e >>= 1;
        }
        return r;
    }

    Elem involve(Elem a) const { return {inv_ == Involution::identity ? a.code : frob_tab_[a.code]}; }
    bool is_fixed(Elem a) const { return involve(a) == a; }
    /// x -> x x^σ, the Hermitian norm value.
    Elem norm(Elem a) const { return mul(a, involve(a)); }

    SquareClass square_class(Elem a) const {
        if (is_zero(a)) return SquareClass::zero;
        return herm_root_[a.code] != kNoRoot ? SquareClass::square : SquareClass::nonsquare;
    }

    /// Canonical r with r r^σ = x, or nullopt when x is not of that form.
    std::optional<Elem> sqrt_or_none(Elem x) const {
        if (is_zero(x)) return zero();
        if (herm_root_[x.code] == kNoRoot) return std::nullopt;
        return Elem{herm_root_[x.code]};
    }

    /// Same root as sqrt_or_none; in Case U every nonzero fixed element is
    /// solvable, in Case O this is plain squareness.
    std::optional<Elem> norm_solve(Elem b) const { return sqrt_or_none(b); }

    /// Canonical g with g·g = x (plain square root, no involution).
    std::optional<Elem> sqrt_plain(Elem x) const {
        if (is_zero(x)) return zero();
        if (plain_root_[x.code] == kNoRoot) return std::nullopt;
        return Elem{plain_root_[x.code]};
    }

    /// Least nonsquare in canonical order. Only exists with the identity
    /// involution (in Case U every nonzero fixed element is a square).
    Elem canonical_nonsquare() const {
        require(canonical_nonsquare_.has_value(), errc::case_u,
                "no nonsquare fixed element in this field");
        return *canonical_nonsquare_;
    }

    /// All λ with λ λ^σ = 1, in canonical order.
    const std::vector<Elem>& unimodulars() const { return unimodulars_; }

    /// Canonical order: the little-endian coefficient vector read as a base-p
    /// numeral, so integer-like elements come first (0, 1, ..., p-1, x, 1+x, ...).
    bool canon_less(Elem a, Elem b) const { return a.code < b.code; }
    uint64_t canon_rank(Elem a) const { return a.code; }
    Elem element_at(uint64_t rank) const { return {static_cast<uint32_t>(rank)}; }

private:
    static constexpr uint32_t kNoRoot = 0xffffffffu;
    static constexpr uint64_t kMaxOrder = 1000000;

    Field(long long p, int degree, std::vector<long long> modulus, Involution inv)
        : p_(p), m_(degree), inv_(inv) {
        require(p >= 2, errc::not_prime, std::to_string(p) + " is not prime");
        require(is_prime(p), errc::not_prime, std::to_string(p) + " is not prime");
        require(p != 2, errc::char_two_rejected, "characteristic 2 is rejected");
        require(m_ >= 1, errc::reducible_polynomial, "extension degree must be >= 1");
        require(inv_ == Involution::identity || m_ % 2 == 0, errc::involution_unavailable,
                "Frobenius involution needs even extension degree");

        q_ = 1;
        for (int i = 0; i < m_; ++i) {
            q_ *= static_cast<uint64_t>(p_);
            require(q_ <= kMaxOrder, errc::field_too_large,
                    "field order exceeds the supported bound 10^6");
        }

        if (m_ == 1) {
            modulus_ = {0, 1};
        } else {
            require(static_cast<int>(modulus.size()) == m_ + 1, errc::reducible_polynomial,
                    "modulus must have degree-many+1 coefficients");
            modulus_.resize(m_ + 1);
            for (int i = 0; i <= m_; ++i) {
                long long r = modulus[i] % p_;
                if (r < 0) r += p_;
                modulus_[i] = r;
            }
            require(modulus_[m_] == 1, errc::reducible_polynomial, "modulus must be monic");
            require(irreducible(modulus_), errc::reducible_polynomial,
                    "modulus is reducible over the prime field");
        }

        build_tables();
    }

    static bool is_prime(long long n) {
        if (n < 2) return false;
        for (long long d = 2; d * d <= n; ++d)
            if (n % d == 0) return false;
        return true;
    }

    // Polynomial helpers over Z_p, little-endian coefficient vectors.
    std::vector<long long> poly_mod(std::vector<long long> a, const std::vector<long long>& b) const {
        while (a.size() >= b.size()) {
            long long lead = a.back() % p_;
            if (lead != 0) {
                // b is monic
                size_t shift = a.size() - b.size();
                for (size_t i = 0; i < b.size(); ++i) {
                    a[shift + i] = ((a[shift + i] - lead * b[i]) % p_ + p_) % p_;
                }
            }
            a.pop_back();
        }
        return a;
    }

    bool irreducible(const std::vector<long long>& mod) const {
        // Trial division by every monic polynomial of degree 1..m/2.
        for (int d = 1; 2 * d <= m_; ++d) {
            uint64_t count = 1;
            for (int i = 0; i < d; ++i) count *= p_;
            for (uint64_t t = 0; t < count; ++t) {
                std::vector<long long> div(d + 1);
                uint64_t v = t;
                for (int i = 0; i < d; ++i) {
                    div[i] = static_cast<long long>(v % p_);
                    v /= p_;
                }
                div[d] = 1;
                std::vector<long long> rem = poly_mod(std::vector<long long>(mod.begin(), mod.end()), div);
                bool zero = true;
                for (long long c : rem)
                    if (c % p_ != 0) zero = false;
                if (zero) return false;
            }
        }
        return true;
    }

    Elem add_slow(Elem a, Elem b) const {
        uint64_t ca = a.code, cb = b.code, code = 0, pk = 1;
        for (int i = 0; i < m_; ++i, pk *= p_) {
            uint64_t s = (ca % p_ + cb % p_) % p_;
            code += s * pk;
            ca /= p_;
            cb /= p_;
        }
        return {static_cast<uint32_t>(code)};
    }

    Elem mul_slow(Elem a, Elem b) const {
        std::vector<long long> prod(2 * m_ - 1, 0);
        std::vector<long long> da(m_), db(m_);
        uint64_t va = a.code, vb = b.code;
        for (int i = 0; i < m_; ++i) {
            da[i] = static_cast<long long>(va % p_);
            va /= p_;
            db[i] = static_cast<long long>(vb % p_);
            vb /= p_;
        }
        for (int i = 0; i < m_; ++i) {
            if (da[i] == 0) continue;
            for (int j = 0; j < m_; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p_;
        }
        std::vector<long long> rem = poly_mod(std::move(prod), modulus_long());
        uint64_t code = 0, pk = 1;
        for (size_t i = 0; i < rem.size(); ++i, pk *= p_) code += static_cast<uint64_t>(rem[i]) * pk;
        return {static_cast<uint32_t>(code)};
    }

    std::vector<long long> modulus_long() const {
        return std::vector<long long>(modulus_.begin(), modulus_.end());
    }

    void build_tables() {
        small_ = q_ <= 256;
        if (small_) {
            add_tab_.resize(q_ * q_);
            mul_tab_.resize(q_ * q_);
            for (uint64_t i = 0; i < q_; ++i)
                for (uint64_t j = 0; j < q_; ++j) {
                    add_tab_[i * q_ + j] = add_slow({(uint32_t)i}, {(uint32_t)j}).code;
                    mul_tab_[i * q_ + j] = mul_slow({(uint32_t)i}, {(uint32_t)j}).code;
                }
        }

        neg_tab_.resize(q_);
        for (uint64_t i = 0; i < q_; ++i) {
            uint64_t v = i, code = 0, pk = 1;
            for (int k = 0; k < m_; ++k, pk *= p_) {
                uint64_t d = v % p_;
                code += (d == 0 ? 0 : p_ - d) * pk;
                v /= p_;
            }
            neg_tab_[i] = static_cast<uint32_t>(code);
        }

        if (inv_ == Involution::frobenius) {
            frob_tab_.resize(q_);
            unsigned long long e = 1;
            for (int i = 0; i < m_ / 2; ++i) e *= static_cast<unsigned long long>(p_);
            for (uint64_t i = 0; i < q_; ++i) frob_tab_[i] = pow_raw({(uint32_t)i}, e).code;
        }

        inv_tab_.assign(q_, 0);
        for (uint64_t i = 1; i < q_; ++i) inv_tab_[i] = pow_raw({(uint32_t)i}, q_ - 2).code;

        plain_root_.assign(q_, kNoRoot);
        herm_root_.assign(q_, kNoRoot);
        for (uint64_t r = 0; r < q_; ++r) {
            Elem y = element_at(r);
            Elem sq = mul(y, y);
            if (plain_root_[sq.code] == kNoRoot) plain_root_[sq.code] = y.code;
            Elem nm = inv_ == Involution::identity ? sq : mul(y, involve(y));
            if (herm_root_[nm.code] == kNoRoot) herm_root_[nm.code] = y.code;
        }

        for (uint64_t r = 0; r < q_; ++r) {
            Elem x = element_at(r);
            if (!is_zero(x) && is_fixed(x) && herm_root_[x.code] == kNoRoot) {
                canonical_nonsquare_ = x;
                break;
            }
        }

        for (uint64_t r = 0; r < q_; ++r) {
            Elem x = element_at(r);
            if (norm(x) == one()) unimodulars_.push_back(x);
        }
    }

    Elem pow_raw(Elem a, unsigned long long e) const {
        Elem r{1};
        Elem base = a;
        while (e) {
            if (e & 1) r = mul_slow(r, base);
            base = mul_slow(base, base);
            e >>= 1;
        }
        return r;
    }

    long long p_;
    int m_;
    Involution inv_;
    uint64_t q_ = 0;
    std::vector<long long> modulus_;
    bool small_ = false;
    std::vector<uint32_t> add_tab_, mul_tab_, neg_tab_, inv_tab_, frob_tab_;
    std::vector<uint32_t> plain_root_, herm_root_;
    std::optional<Elem> canonical_nonsquare_;
    std::vector<Elem> unimodulars_;
};

/// Validated field construction; the spec-facing entry point.
inline FieldPtr field_make(long long p, int degree, std::vector<long long> modulus = {},
                           Involution inv = Involution::identity) {
    return Field::make(p, degree, std::move(modulus), inv);
}

}  // namespace ff
