#pragma once

// Number-theoretic planning: factor d = k*s, locate a prime power q with
// d = (q-e)(q+f) or (q-e)(q-f), select the construction route, and predict
// beta / sparsity / basis count before anything is built.
//
// The plus-route search scans [ceil((k+s)/2), s-1] and takes the LARGEST
// prime power there: any q in that interval satisfies the ordering
// 0 <= f <= delta <= e <= 2*delta with (e+f)/2 = delta, and the basis count
// q+1 grows with q.  If s itself is the only admissible prime power, the
// plan degenerates to f = 0 with constant block size k (minus sign).  All
// searches use exhaustive trial factorization; no probabilistic tests.

#include <cmath>
#include <cstdint>
#include <optional>

#include "gfield.hpp"
#include "unitaries.hpp"

namespace amub {

enum class Sign { plus, minus };
enum class Route { trim_plus, trim_minus, shrink_const, extend_const, square_mub };
enum class Target { complex_field, real_field };

inline const char* route_name(Route r) {
    switch (r) {
        case Route::trim_plus: return "TRIM_PLUS";
        case Route::trim_minus: return "TRIM_MINUS";
        case Route::shrink_const: return "SHRINK_CONST";
        case Route::extend_const: return "EXTEND_CONST";
        case Route::square_mub: return "SQUARE_MUB";
    }
    return "?";
}

/// beta stored exactly as mu*sqrt(d)/k_min via the integer triple
/// (mu^2, d, k_min^2); comparisons can avoid floating arithmetic.
struct ExactBeta {
    std::uint64_t mu_sq{1};
    std::uint64_t d{};
    std::uint64_t kmin_sq{1};
    double value() const {
        return std::sqrt(static_cast<double>(mu_sq) * static_cast<double>(d) /
                         static_cast<double>(kmin_sq));
    }
};

struct PredictedQuality {
    ExactBeta beta;
    double beta_float{};
    std::size_t classes{};        ///< predicted basis count
    double eps_lo{}, eps_hi{};    ///< sparsity bounds (equal when exact)
    std::size_t delta_set_bound{};  ///< cardinality bound on the spectrum
};

struct FactorizationPlan {
    std::size_t d{};
    std::size_t k{}, s{};  // chosen factors, k <= s
    std::int64_t delta_num{};  // delta = (s-k)/2 exactly, as delta_num/2
    std::optional<PrimePower> q;  // absent only for file-MOLS constant routes
    std::size_t e{}, f{};
    Sign sign{Sign::minus};
    Route route{Route::square_mub};
    Target target{Target::complex_field};

    double delta() const { return static_cast<double>(delta_num) / 2.0; }
};

/// Least prime power in [lo, hi], or absent.
inline std::optional<PrimePower> prime_power_in(std::uint64_t lo, std::uint64_t hi) {
    for (std::uint64_t v = lo; v <= hi; ++v)
        if (auto pp = as_prime_power(v)) return pp;
    return std::nullopt;
}

namespace planner_detail {

inline std::optional<PrimePower> largest_prime_power_in(std::uint64_t lo, std::uint64_t hi) {
    if (hi < lo) return std::nullopt;
    for (std::uint64_t v = hi;; --v) {
        if (auto pp = as_prime_power(v)) return pp;
        if (v == lo) break;
    }
    return std::nullopt;
}

/// Factor pair with minimal s-k; ties cannot occur for fixed d.
inline std::optional<std::pair<std::size_t, std::size_t>> closest_factor_pair(std::size_t d) {
    for (std::size_t a = static_cast<std::size_t>(std::sqrt(static_cast<double>(d))) + 1;
         a >= 2; --a) {
        if (a * a <= d && d % a == 0) return std::make_pair(a, d / a);
    }
    return std::nullopt;
}

}  // namespace planner_detail

/// Picks factors, the prime power q, the sign and the construction route.
/// The optional HadamardSource widens real-route availability beyond the
/// native construction families.
inline FactorizationPlan choose_plan(std::size_t d,
                                     std::optional<std::size_t> k_opt,
                                     std::optional<std::size_t> s_opt,
                                     Target target,
                                     const HadamardSource* hadamards = nullptr) {
    std::size_t k, s;
    if (k_opt || s_opt) {
        if (!k_opt || !s_opt) throw Error("factors k and s must be given together");
        k = std::min(*k_opt, *s_opt);
        s = std::max(*k_opt, *s_opt);
        if (k * s != d)
            throw Error("k*s = " + std::to_string(k * s) + " does not equal d = " +
                        std::to_string(d));
        if (k < 2) throw NotComposite(d);
    } else {
        const auto pair = planner_detail::closest_factor_pair(d);
        if (!pair) throw NotComposite(d);
        k = pair->first;
        s = pair->second;
    }
    const std::size_t gap = s - k;
    if (gap * gap >= d)
        throw GapTooLarge("|s-k| = " + std::to_string(gap) + " is not below sqrt(" +
                          std::to_string(d) + ")");

    FactorizationPlan plan;
    plan.d = d;
    plan.k = k;
    plan.s = s;
    plan.delta_num = static_cast<std::int64_t>(gap);
    plan.target = target;

    const auto available = [&](std::size_t order) {
        if (hadamards) return hadamards->available(order);
        return real_hadamard_available(order);
    };

    // d = q^2 with q a prime power: exact MUB territory, both targets.
    if (k == s) {
        if (const auto pp = as_prime_power(k)) {
            plan.q = pp;
            plan.e = plan.f = 0;
            plan.sign = Sign::minus;
            plan.route = Route::square_mub;
            return plan;
        }
    }

    if (target == Target::real_field) {
        if (k < s && available(k)) {
            // constant block size k from MOLS(s), d = (s-e)*s
            plan.route = Route::shrink_const;
            plan.q = as_prime_power(s);
            plan.e = s - k;
            plan.f = 0;
            plan.sign = Sign::minus;
            return plan;
        }
        if (k < s && s - k <= k && available(s)) {
            // constant block size s from MOLS(k), d = k*(k+f)
            plan.route = Route::extend_const;
            plan.q = as_prime_power(k);
            plan.e = 0;
            plan.f = s - k;
            plan.sign = Sign::plus;
            return plan;
        }
        throw NoRealHadamard("no real Hadamard matrix of order " + std::to_string(k) + " or " +
                             std::to_string(s) + " is constructible for d = " + std::to_string(d));
    }

    const std::size_t lo = (k + s + 1) / 2;  // ceil((k+s)/2)
    if (const auto q = planner_detail::largest_prime_power_in(lo, s - 1)) {
        plan.q = q;
        plan.e = q->q - k;
        plan.f = s - q->q;
        plan.sign = Sign::plus;
        plan.route = Route::trim_plus;
        return plan;
    }
    if (const auto q = as_prime_power(s)) {
        // exact divisor is a prime power: f = 0, constant block size k
        plan.q = q;
        plan.e = s - k;
        plan.f = 0;
        plan.sign = Sign::minus;
        plan.route = Route::trim_minus;
        return plan;
    }
    const auto q = prime_power_in(s + 1, 2 * s);
    if (!q || q->q >= k + s)
        throw GapTooLarge("no suitable prime power near s = " + std::to_string(s));
    plan.q = q;
    plan.e = q->q - k;
    plan.f = q->q - s;
    plan.sign = Sign::minus;
    plan.route = Route::trim_minus;
    return plan;
}

/// Route-dependent beta / class-count / sparsity / spectrum-size predictions.
/// For constant-block routes on a non-prime-power side, the MOLS count must
/// be supplied (N(s) is synthesized as s-1 only for prime powers).
inline PredictedQuality predicted_parameters(const FactorizationPlan& plan,
                                             std::optional<std::size_t> n_mols = std::nullopt) {
    const auto classes_from_side = [&](std::size_t side) -> std::size_t {
        if (as_prime_power(side)) return side;  // N(side) + 1 = side
        if (n_mols) return *n_mols + 1;
        throw Error("MOLS count required for non-prime-power side " + std::to_string(side));
    };

    PredictedQuality pred;
    const double d = static_cast<double>(plan.d);
    switch (plan.route) {
        case Route::trim_plus: {
            const std::size_t q = plan.q->q, kmin = q - plan.e;
            pred.beta = {1, plan.d, static_cast<std::uint64_t>(kmin) * kmin};
            pred.classes = q + 1;
            pred.eps_lo = 1.0 - static_cast<double>(q - plan.e + plan.f) / d;
            pred.eps_hi = 1.0 - 1.0 / static_cast<double>(q);
            pred.delta_set_bound = (plan.f + 3) * (plan.f + 2) / 2 + 1;
            break;
        }
        case Route::trim_minus: {
            const std::size_t q = plan.q->q, kmin = q - plan.e - plan.f;
            pred.beta = {1, plan.d, static_cast<std::uint64_t>(kmin) * kmin};
            pred.classes = q;
            pred.eps_lo = 1.0 - static_cast<double>(q - plan.e) / d;
            pred.eps_hi = 1.0 - 1.0 / static_cast<double>(q);
            pred.delta_set_bound = (plan.f + 1) * (plan.f + 2) / 2 + 1;
            break;
        }
        case Route::shrink_const: {
            pred.beta = {1, plan.d, static_cast<std::uint64_t>(plan.k) * plan.k};
            pred.classes = classes_from_side(plan.s);
            pred.eps_lo = pred.eps_hi = 1.0 - 1.0 / static_cast<double>(plan.s);
            pred.delta_set_bound = 2;  // {0, 1/k}
            break;
        }
        case Route::extend_const: {
            pred.beta = {4, plan.d, static_cast<std::uint64_t>(plan.s) * plan.s};
            pred.classes = classes_from_side(plan.k);
            pred.eps_lo = pred.eps_hi = 1.0 - 1.0 / static_cast<double>(plan.k);
            pred.delta_set_bound = 3;  // {0, 1/s, 2/s}
            break;
        }
        case Route::square_mub: {
            const std::size_t q = plan.q->q;
            pred.beta = {1, plan.d, static_cast<std::uint64_t>(q) * q};
            pred.classes = q + 1;
            pred.eps_lo = pred.eps_hi = 1.0 - 1.0 / static_cast<double>(q);
            pred.delta_set_bound = 1;  // {1/q}
            break;
        }
    }
    pred.beta_float = pred.beta.value();
    return pred;
}

}  // namespace amub
