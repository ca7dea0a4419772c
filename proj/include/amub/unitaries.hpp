#pragma once

// Seed unitaries filling one block's worth of basis vectors: Fourier matrices
// for arbitrary order, real Hadamard matrices (Sylvester, Paley I/II and
// Kronecker products thereof) where those families reach.  Real kinds keep
// the exact +-1 integer core next to the normalized floating copy so that
// downstream inner products can be evaluated in integer arithmetic.
//
// Availability means "constructible by the implemented families", not
// "mathematically exists"; e.g. order 92 (first Williamson-only order) comes
// out absent.  Externally supplied matrices can be registered through
// HadamardSource and are Gram-validated on load.

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <vector>

#include "gfield.hpp"

namespace amub {

enum class SeedKind {
    fourier,
    real_sylvester,
    real_paley1,
    real_paley2,
    real_kronecker,
    real_stored,
};

struct SeedUnitary {
    std::size_t order{};
    SeedKind kind{SeedKind::fourier};
    std::vector<std::complex<double>> entries;  // row-major order x order
    std::vector<std::int8_t> core;              // +-1 integers, empty for fourier
    bool unimodular{false};  // every entry has modulus exactly 1/sqrt(order)

    std::complex<double> at(std::size_t r, std::size_t c) const { return entries[r * order + c]; }
    int core_at(std::size_t r, std::size_t c) const { return core[r * order + c]; }
    bool is_real() const { return !core.empty(); }
};

/// Entry (j, t) = exp(2*pi*i*j*t/k) / sqrt(k).
inline SeedUnitary fourier_unitary(std::size_t k) {
    SeedUnitary u;
    u.order = k;
    u.kind = SeedKind::fourier;
    u.unimodular = true;
    u.entries.resize(k * k);
    const double norm = 1.0 / std::sqrt(static_cast<double>(k));
    const double tau = 6.283185307179586476925286766559;
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t t = 0; t < k; ++t) {
            const double angle = tau * static_cast<double>((j * t) % k) / static_cast<double>(k);
            u.entries[j * k + t] = std::polar(norm, angle);
        }
    return u;
}

namespace had_detail {

using Core = std::vector<std::vector<int>>;

inline bool gram_is_identity(const Core& h) {
    const std::size_t k = h.size();
    for (const auto& row : h)
        if (row.size() != k) return false;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i; j < k; ++j) {
            std::int64_t dot = 0;
            for (std::size_t t = 0; t < k; ++t) {
                if (h[i][t] != 1 && h[i][t] != -1) return false;
                dot += static_cast<std::int64_t>(h[i][t]) * h[j][t];
            }
            if (dot != (i == j ? static_cast<std::int64_t>(k) : 0)) return false;
        }
    return true;
}

inline Core sylvester(std::size_t k) {
    Core h{{1}};
    while (h.size() < k) {
        const std::size_t m = h.size();
        Core g(2 * m, std::vector<int>(2 * m));
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) {
                g[i][j] = h[i][j];
                g[i][j + m] = h[i][j];
                g[i + m][j] = h[i][j];
                g[i + m][j + m] = -h[i][j];
            }
        h = std::move(g);
    }
    return h;
}

/// Quadratic character over GF(q): +1 for nonzero squares, -1 otherwise.
inline int chi(const Field& F, std::uint32_t x) {
    return F.pow(x, (F.q() - 1) / 2) == 1 ? 1 : -1;
}

/// Paley construction I, order q+1 for prime power q = 3 (mod 4).
inline Core paley1(const PrimePower& pp) {
    const Field F = make_field(pp.p, pp.n);
    const std::size_t q = pp.q, k = q + 1;
    Core h(k, std::vector<int>(k, 0));
    h[0][0] = 1;
    for (std::size_t j = 1; j < k; ++j) {
        h[0][j] = 1;
        h[j][0] = -1;
    }
    for (std::size_t i = 1; i < k; ++i)
        for (std::size_t j = 1; j < k; ++j)
            h[i][j] = (i == j) ? 1
                               : chi(F, F.sub(static_cast<std::uint32_t>(i - 1),
                                              static_cast<std::uint32_t>(j - 1)));
    return h;
}

/// Paley construction II, order 2(q+1) for prime power q = 1 (mod 4).
inline Core paley2(const PrimePower& pp) {
    const Field F = make_field(pp.p, pp.n);
    const std::size_t q = pp.q, m = q + 1, k = 2 * m;
    // symmetric conference-style seed
    std::vector<std::vector<int>> c(m, std::vector<int>(m, 0));
    for (std::size_t j = 1; j < m; ++j) {
        c[0][j] = 1;
        c[j][0] = 1;
    }
    for (std::size_t i = 1; i < m; ++i)
        for (std::size_t j = 1; j < m; ++j)
            if (i != j)
                c[i][j] = chi(F, F.sub(static_cast<std::uint32_t>(i - 1),
                                       static_cast<std::uint32_t>(j - 1)));
    // 0 -> [[1,-1],[-1,-1]], +-1 -> +-[[1,1],[1,-1]]
    Core h(k, std::vector<int>(k));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            const int v = c[i][j];
            int b00, b01, b10, b11;
            if (i == j || v == 0) {
                b00 = 1, b01 = -1, b10 = -1, b11 = -1;
            } else {
                b00 = v, b01 = v, b10 = v, b11 = -v;
            }
            h[2 * i][2 * j] = b00;
            h[2 * i][2 * j + 1] = b01;
            h[2 * i + 1][2 * j] = b10;
            h[2 * i + 1][2 * j + 1] = b11;
        }
    return h;
}

inline Core kronecker(const Core& a, const Core& b) {
    const std::size_t ka = a.size(), kb = b.size();
    Core h(ka * kb, std::vector<int>(ka * kb));
    for (std::size_t i = 0; i < ka; ++i)
        for (std::size_t j = 0; j < ka; ++j)
            for (std::size_t u = 0; u < kb; ++u)
                for (std::size_t v = 0; v < kb; ++v)
                    h[i * kb + u][j * kb + v] = a[i][j] * b[u][v];
    return h;
}

struct BuildResult {
    Core core;
    SeedKind kind;
};

inline std::optional<BuildResult> build_core(std::size_t k);

inline std::optional<BuildResult> build_core_uncached(std::size_t k) {
    if (k == 0) return std::nullopt;
    if (k == 1) return BuildResult{{{1}}, SeedKind::real_sylvester};
    if (k == 2) return BuildResult{sylvester(2), SeedKind::real_sylvester};
    if ((k & (k - 1)) == 0) return BuildResult{sylvester(k), SeedKind::real_sylvester};
    if (k % 4 != 0) return std::nullopt;
    if (const auto pp = as_prime_power(k - 1); pp && (k - 1) % 4 == 3)
        return BuildResult{paley1(*pp), SeedKind::real_paley1};
    if (k % 8 == 4) {
        if (const auto pp = as_prime_power(k / 2 - 1); pp && (k / 2 - 1) % 4 == 1)
            return BuildResult{paley2(*pp), SeedKind::real_paley2};
    }
    for (std::size_t a = 2; a * a <= k; ++a) {
        if (k % a != 0) continue;
        const auto left = build_core(a);
        if (!left) continue;
        const auto right = build_core(k / a);
        if (!right) continue;
        return BuildResult{kronecker(left->core, right->core), SeedKind::real_kronecker};
    }
    return std::nullopt;
}

inline std::optional<BuildResult> build_core(std::size_t k) {
    static std::map<std::size_t, std::optional<BuildResult>> cache;
    static std::mutex mtx;
    {
        std::lock_guard<std::mutex> lock(mtx);
        if (const auto it = cache.find(k); it != cache.end()) return it->second;
    }
    auto result = build_core_uncached(k);
    if (result && !gram_is_identity(result->core))
        throw Error("hadamard construction failed integer Gram check at order " +
                    std::to_string(k));
    std::lock_guard<std::mutex> lock(mtx);
    cache.emplace(k, result);
    return result;
}

inline SeedUnitary from_core(const Core& core, SeedKind kind) {
    SeedUnitary u;
    u.order = core.size();
    u.kind = kind;
    u.unimodular = true;
    u.core.resize(u.order * u.order);
    u.entries.resize(u.order * u.order);
    const double norm = 1.0 / std::sqrt(static_cast<double>(u.order));
    for (std::size_t i = 0; i < u.order; ++i)
        for (std::size_t j = 0; j < u.order; ++j) {
            u.core[i * u.order + j] = static_cast<std::int8_t>(core[i][j]);
            u.entries[i * u.order + j] = core[i][j] * norm;
        }
    return u;
}

}  // namespace had_detail

/// A normalized +-1/sqrt(k) Hadamard matrix of order k, when one of the
/// implemented families reaches that order; absent otherwise.
inline std::optional<SeedUnitary> real_hadamard(std::size_t k) {
    const auto built = had_detail::build_core(k);
    if (!built) return std::nullopt;
    return had_detail::from_core(built->core, built->kind);
}

inline bool real_hadamard_available(std::size_t k) {
    return had_detail::build_core(k).has_value();
}

/// Max-norm test of U*U - I.
inline bool verify_unitary(const SeedUnitary& u, double tol) {
    const std::size_t k = u.order;
    for (std::size_t c1 = 0; c1 < k; ++c1)
        for (std::size_t c2 = 0; c2 < k; ++c2) {
            std::complex<double> dot = 0.0;
            for (std::size_t r = 0; r < k; ++r) dot += std::conj(u.at(r, c1)) * u.at(r, c2);
            if (c1 == c2) dot -= 1.0;
            if (std::abs(dot) > tol) return false;
        }
    return true;
}

/// Native construction families plus externally supplied matrices.
class HadamardSource {
public:
    /// Registers a +-1 matrix after the exact integer Gram check H*H^T = k*I.
    void add(const std::vector<std::vector<int>>& rows) {
        if (!had_detail::gram_is_identity(rows))
            throw Error("stored Hadamard matrix failed integer Gram check");
        stored_[rows.size()] = had_detail::from_core(rows, SeedKind::real_stored);
    }

    bool available(std::size_t k) const {
        return stored_.count(k) > 0 || real_hadamard_available(k);
    }

    SeedUnitary get(std::size_t k) const {
        if (const auto it = stored_.find(k); it != stored_.end()) return it->second;
        if (auto h = real_hadamard(k)) return *h;
        throw MissingRealHadamard(k);
    }

    std::size_t stored_count() const { return stored_.size(); }

private:
    std::map<std::size_t, SeedUnitary> stored_;
};

}  // namespace amub
