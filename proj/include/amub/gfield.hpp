#pragma once

// Exact arithmetic for GF(p^n).
//
// Elements are dense indices 0..q-1.  Index e corresponds to the coefficient
// vector of e written in base p, least significant digit = constant term, so
// 0 is the additive identity and 1 the multiplicative identity.  Extension
// fields are built modulo the lexicographically least monic irreducible
// polynomial of degree n over GF(p), found by exhaustive trial division;
// the whole construction is deterministic, so tables are identical across
// runs and platforms.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "errors.hpp"

namespace amub {

struct PrimePower {
    std::uint32_t p{2};  ///< prime base
    std::uint32_t n{1};  ///< exponent, n >= 1
    std::uint32_t q{2};  ///< p^n
};

inline bool is_prime(std::uint64_t m) {
    if (m < 2) return false;
    if (m % 2 == 0) return m == 2;
    for (std::uint64_t f = 3; f * f <= m; f += 2)
        if (m % f == 0) return false;
    return true;
}

/// Decomposes m as p^n for a single prime p, if possible.
inline std::optional<PrimePower> as_prime_power(std::uint64_t m) {
    if (m < 2) return std::nullopt;
    std::uint64_t p = m;
    for (std::uint64_t f = 2; f * f <= m; ++f) {
        if (m % f == 0) {
            p = f;
            break;
        }
    }
    std::uint32_t n = 0;
    std::uint64_t rest = m;
    while (rest % p == 0) {
        rest /= p;
        ++n;
    }
    if (rest != 1) return std::nullopt;
    return PrimePower{static_cast<std::uint32_t>(p), n, static_cast<std::uint32_t>(m)};
}

namespace gf_detail {

using Poly = std::vector<std::uint32_t>;  // coefficients, low to high

inline void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline Poly poly_mul(const Poly& a, const Poly& b, std::uint32_t p) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = (r[i + j] + static_cast<std::uint64_t>(a[i]) * b[j]) % p;
    trim(r);
    return r;
}

/// Remainder of a modulo monic divisor g (leading coefficient of g must be 1).
inline Poly poly_mod(Poly a, const Poly& g, std::uint32_t p) {
    trim(a);
    const std::size_t dg = g.size() - 1;
    while (a.size() > dg) {
        const std::uint32_t c = a.back();
        const std::size_t shift = a.size() - 1 - dg;
        if (c != 0) {
            for (std::size_t j = 0; j < g.size(); ++j) {
                std::uint64_t sub = static_cast<std::uint64_t>(c) * g[j] % p;
                std::uint32_t& tgt = a[shift + j];
                tgt = static_cast<std::uint32_t>((tgt + p - sub) % p);
            }
        }
        a.pop_back();
        trim(a);
        if (a.size() <= dg) break;
    }
    return a;
}

inline Poly decode(std::uint64_t v, std::uint32_t p) {
    Poly d;
    while (v > 0) {
        d.push_back(static_cast<std::uint32_t>(v % p));
        v /= p;
    }
    return d;
}

inline std::uint32_t encode(const Poly& d, std::uint32_t p) {
    std::uint64_t v = 0, mult = 1;
    for (std::uint32_t c : d) {
        v += c * mult;
        mult *= p;
    }
    return static_cast<std::uint32_t>(v);
}

inline bool is_irreducible(const Poly& f, std::uint32_t p) {
    const std::size_t n = f.size() - 1;
    for (std::size_t deg = 1; deg <= n / 2; ++deg) {
        std::uint64_t count = 1;
        for (std::size_t i = 0; i < deg; ++i) count *= p;
        for (std::uint64_t v = 0; v < count; ++v) {
            Poly g = decode(v, p);
            g.resize(deg + 1, 0);
            g[deg] = 1;  // monic
            if (poly_mod(f, g, p).empty()) return false;
        }
    }
    return true;
}

}  // namespace gf_detail

class Field {
public:
    static constexpr std::uint64_t kMaxOrder = 1u << 20;
    static constexpr std::uint32_t kMulTableMax = 4096;

    static Field make(std::uint32_t p, std::uint32_t n) { return Field(p, n); }

    const PrimePower& order() const { return ord_; }
    std::uint32_t q() const { return ord_.q; }

    /// Coefficients c0..c_{n-1} of the monic modulus x^n + sum c_i x^i.
    const std::vector<std::uint32_t>& modulus() const { return modulus_; }

    std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
        check(a);
        check(b);
        if (ord_.n == 1) return (a + b) % ord_.p;
        std::uint32_t r = 0, mult = 1;
        for (std::uint32_t i = 0; i < ord_.n; ++i) {
            r += ((a % ord_.p) + (b % ord_.p)) % ord_.p * mult;
            a /= ord_.p;
            b /= ord_.p;
            mult *= ord_.p;
        }
        return r;
    }

    std::uint32_t neg(std::uint32_t a) const {
        check(a);
        if (ord_.n == 1) return (ord_.p - a) % ord_.p;
        std::uint32_t r = 0, mult = 1;
        for (std::uint32_t i = 0; i < ord_.n; ++i) {
            r += (ord_.p - a % ord_.p) % ord_.p * mult;
            a /= ord_.p;
            mult *= ord_.p;
        }
        return r;
    }

    std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return add(a, neg(b)); }

    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
        check(a);
        check(b);
        if (!mul_table_.empty()) return mul_table_[static_cast<std::size_t>(a) * ord_.q + b];
        if (a == 0 || b == 0) return 0;
        return exp_[(static_cast<std::uint64_t>(log_[a]) + log_[b]) % (ord_.q - 1)];
    }

    std::uint32_t inv(std::uint32_t a) const {
        check(a);
        if (a == 0) throw ZeroInverse();
        return inv_table_[a];
    }

    std::uint32_t pow(std::uint32_t a, std::uint64_t e) const {
        check(a);
        if (a == 0) return e == 0 ? 1u : 0u;
        std::uint32_t r = 1;
        while (e > 0) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }

private:
    Field(std::uint32_t p, std::uint32_t n) {
        if (!is_prime(p)) throw NotPrime(p);
        if (n < 1) throw OrderTooLarge("field exponent must be at least 1");
        std::uint64_t q = 1;
        for (std::uint32_t i = 0; i < n; ++i) {
            q *= p;
            if (q > kMaxOrder) throw OrderTooLarge("field order exceeds 2^20");
        }
        ord_ = {p, n, static_cast<std::uint32_t>(q)};
        find_modulus();
        build_log_tables();
        if (ord_.q <= kMulTableMax) build_mul_table();
        build_inv_table();
    }

    void check(std::uint32_t a) const {
        if (a >= ord_.q) throw IndexOutOfRange("element index " + std::to_string(a) +
                                               " out of range for GF(" + std::to_string(ord_.q) + ")");
    }

    // Lexicographically least monic irreducible: scan the encoded low
    // coefficients upward; for n = 1 this yields the polynomial x.
    void find_modulus() {
        using namespace gf_detail;
        for (std::uint64_t v = 0; v < ord_.q; ++v) {
            Poly f = decode(v, ord_.p);
            f.resize(ord_.n + 1, 0);
            f[ord_.n] = 1;
            if (is_irreducible(f, ord_.p)) {
                modulus_.assign(f.begin(), f.end() - 1);
                return;
            }
        }
        throw Error("no irreducible polynomial found");  // unreachable
    }

    std::uint32_t raw_mul(std::uint32_t a, std::uint32_t b) const {
        using namespace gf_detail;
        if (a == 0 || b == 0) return 0;
        if (ord_.n == 1) return static_cast<std::uint32_t>(static_cast<std::uint64_t>(a) * b % ord_.p);
        Poly full_mod = modulus_;
        full_mod.push_back(1);
        Poly r = poly_mod(poly_mul(decode(a, ord_.p), decode(b, ord_.p), ord_.p), full_mod, ord_.p);
        return encode(r, ord_.p);
    }

    void build_log_tables() {
        const std::uint32_t q = ord_.q;
        exp_.resize(q - 1);
        log_.assign(q, 0);
        std::uint32_t g = 0;
        for (std::uint32_t cand = 1; cand < q; ++cand) {
            std::uint32_t x = cand, ord = 1;
            while (x != 1) {
                x = raw_mul(x, cand);
                ++ord;
            }
            if (ord == q - 1) {
                g = cand;
                break;
            }
        }
        std::uint32_t x = 1;
        for (std::uint32_t i = 0; i < q - 1; ++i) {
            exp_[i] = x;
            log_[x] = i;
            x = raw_mul(x, g);
        }
    }

    void build_mul_table() {
        const std::size_t q = ord_.q;
        mul_table_.assign(q * q, 0);
        for (std::size_t a = 1; a < q; ++a)
            for (std::size_t b = 1; b < q; ++b)
                mul_table_[a * q + b] =
                    exp_[(static_cast<std::uint64_t>(log_[a]) + log_[b]) % (q - 1)];
    }

    void build_inv_table() {
        const std::uint32_t q = ord_.q;
        inv_table_.assign(q, 0);
        for (std::uint32_t a = 1; a < q; ++a)
            inv_table_[a] = exp_[(q - 1 - log_[a]) % (q - 1)];
    }

    PrimePower ord_;
    std::vector<std::uint32_t> modulus_;
    std::vector<std::uint32_t> exp_, log_;
    std::vector<std::uint32_t> mul_table_;
    std::vector<std::uint32_t> inv_table_;
};

inline Field make_field(std::uint32_t p, std::uint32_t n) { return Field::make(p, n); }

}  // namespace amub
