#pragma once

// The four derived RBD constructions:
//
//   trim_minus   d = (q-e)(q-f)  variable sizes {q-e-f..q-e}, q classes, mu = 1
//   trim_plus    d = (q-e)(q+f)  donor kept, q+1 classes, mu = 1
//   shrink_const d = (s-e)*s     constant size s-e, w+1 classes, mu = 1
//   extend_union d = s*(s+f)     constant size s+f, w+1 classes, mu = 2
//
// All removals are expressed as a TrimSpec applied to a seed design, with
// donor and removed-element choices index-deterministic (lowest indices).
// A seed parameter permutes those choices for randomized stress tests;
// callers are expected to re-validate randomized builds.
//
// trim_plus removes (e-f) full donor blocks plus e fixed points from each of
// the next f donor blocks; the point-count identity
// (e-f)*q + e*f = q^2 - (q-e)(q+f) fixes that removal shape, and the block
// sizes it produces ({q-e..q-e+f} away from the donor, {q-e, q} inside it)
// are exactly the normalizer orders the plus-route spectrum is built from.
// The donor class is retained on the plus route and discarded on the minus
// route.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "designs.hpp"
#include "planner.hpp"

namespace amub {

/// Removal recipe against a seed design.
struct TrimSpec {
    std::size_t donor_class{};
    std::vector<std::size_t> removed_blocks;                 // donor block indices, fully removed
    std::map<std::size_t, std::vector<Point>> partial_removals;  // donor block -> removed points
    bool keep_donor{};
};

/// Applies a TrimSpec: deletes the selected points everywhere, relabels the
/// survivors order-preserving to 0..d-1, and drops emptied blocks.
inline Design apply_trim(const Design& base, const TrimSpec& spec, Provenance prov) {
    if (spec.donor_class >= base.classes.size()) throw OffsetsInvalid("donor class out of range");
    const auto& donor = base.classes[spec.donor_class];

    std::vector<bool> removed(base.d, false);
    std::size_t removed_count = 0;
    for (std::size_t bi : spec.removed_blocks) {
        if (bi >= donor.size()) throw OffsetsInvalid("removed block index out of range");
        for (Point x : donor[bi]) {
            if (!removed[x]) ++removed_count;
            removed[x] = true;
        }
    }
    for (const auto& [bi, pts] : spec.partial_removals) {
        if (bi >= donor.size()) throw OffsetsInvalid("partial block index out of range");
        for (Point x : pts) {
            if (!std::binary_search(donor[bi].begin(), donor[bi].end(), x))
                throw OffsetsInvalid("partial removal point not in donor block");
            if (!removed[x]) ++removed_count;
            removed[x] = true;
        }
    }

    std::vector<Point> relabel(base.d, 0);
    Point next = 0;
    for (std::size_t x = 0; x < base.d; ++x)
        if (!removed[x]) relabel[x] = next++;

    Design out;
    out.d = base.d - removed_count;
    out.provenance = std::move(prov);
    for (std::size_t ci = 0; ci < base.classes.size(); ++ci) {
        if (ci == spec.donor_class && !spec.keep_donor) continue;
        ParallelClass pc;
        for (std::size_t bi = 0; bi < base.classes[ci].size(); ++bi) {
            if (ci == spec.donor_class &&
                std::find(spec.removed_blocks.begin(), spec.removed_blocks.end(), bi) !=
                    spec.removed_blocks.end())
                continue;
            Block nb;
            for (Point x : base.classes[ci][bi])
                if (!removed[x]) nb.push_back(relabel[x]);
            if (!nb.empty()) pc.push_back(std::move(nb));
        }
        out.classes.push_back(std::move(pc));
    }
    return out;
}

namespace trim_detail {

/// Deterministic pick of `count` distinct indices below `n`, or a seeded
/// random sample when a seed is supplied.
inline std::vector<std::size_t> pick_indices(std::size_t n, std::size_t count,
                                             std::optional<std::uint64_t> seed,
                                             std::mt19937_64* rng) {
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), 0);
    if (seed) std::shuffle(all.begin(), all.end(), *rng);
    all.resize(count);
    std::sort(all.begin(), all.end());
    return all;
}

inline std::vector<Point> pick_points(const Block& b, std::size_t count,
                                      std::optional<std::uint64_t> seed, std::mt19937_64* rng) {
    Block pts = b;
    if (seed) std::shuffle(pts.begin(), pts.end(), *rng);
    pts.resize(count);
    return pts;
}

}  // namespace trim_detail

/// d = (q-e)(q-f): remove e full donor blocks and q-e points from each of the
/// next f donor blocks, then discard the donor class.  Exactly q classes,
/// block sizes within {q-e-f..q-e}, mu = 1.
inline Design trim_minus(const PrimePower& pp, std::size_t e, std::size_t f,
                         std::optional<std::uint64_t> seed = std::nullopt) {
    const std::size_t q = pp.q;
    if (f > e || e >= q) throw OffsetsInvalid("trim_minus requires 0 <= f <= e < q");
    if ((q - e) * (q - f) < 2) throw OffsetsInvalid("trimmed design would have fewer than 2 points");
    if (e == 0 && f == 0) return affine_resolvable_design(pp);  // nothing to remove, all q+1 classes

    const Design base = affine_resolvable_design(pp);
    std::mt19937_64 rng(seed.value_or(0));
    TrimSpec spec;
    spec.keep_donor = false;
    spec.donor_class = seed ? rng() % base.classes.size() : 0;
    const auto& donor = base.classes[spec.donor_class];
    const auto chosen = trim_detail::pick_indices(donor.size(), e + f, seed, &rng);
    spec.removed_blocks.assign(chosen.begin(), chosen.begin() + e);
    for (std::size_t i = e; i < e + f; ++i)
        spec.partial_removals[chosen[i]] =
            trim_detail::pick_points(donor[chosen[i]], q - e, seed, &rng);

    Provenance prov{"trim_minus",
                    {{"p", pp.p},
                     {"n", pp.n},
                     {"q", static_cast<std::int64_t>(q)},
                     {"e", static_cast<std::int64_t>(e)},
                     {"f", static_cast<std::int64_t>(f)},
                     {"donor_class", static_cast<std::int64_t>(spec.donor_class)},
                     {"label_base", 0}}};
    if (seed) prov.params["seed"] = static_cast<std::int64_t>(*seed);
    return apply_trim(base, spec, std::move(prov));
}

inline Design trim_minus(std::uint32_t q, std::size_t e, std::size_t f,
                         std::optional<std::uint64_t> seed = std::nullopt) {
    const auto pp = as_prime_power(q);
    if (!pp) throw NotPrimePower(q);
    return trim_minus(*pp, e, f, seed);
}

/// d = (q-e)(q+f): remove e-f full donor blocks plus e fixed points from each
/// of the next f donor blocks; the donor class is kept.  q+1 classes,
/// non-donor sizes within {q-e..q-e+f}, donor holds f blocks of size q-e and
/// q-e blocks of size q, mu = 1.
inline Design trim_plus(const PrimePower& pp, std::size_t e, std::size_t f,
                        std::optional<std::uint64_t> seed = std::nullopt) {
    const std::size_t q = pp.q;
    if (f == 0 || f > e || e >= q) throw OffsetsInvalid("trim_plus requires 0 < f <= e < q");
    if ((q - e) * (q + f) < 2) throw OffsetsInvalid("trimmed design would have fewer than 2 points");

    const Design base = affine_resolvable_design(pp);
    std::mt19937_64 rng(seed.value_or(0));
    TrimSpec spec;
    spec.keep_donor = true;
    spec.donor_class = seed ? rng() % base.classes.size() : 0;
    const auto& donor = base.classes[spec.donor_class];
    const auto chosen = trim_detail::pick_indices(donor.size(), e, seed, &rng);
    spec.removed_blocks.assign(chosen.begin(), chosen.begin() + (e - f));
    for (std::size_t i = e - f; i < e; ++i)
        spec.partial_removals[chosen[i]] =
            trim_detail::pick_points(donor[chosen[i]], e, seed, &rng);

    Provenance prov{"trim_plus",
                    {{"p", pp.p},
                     {"n", pp.n},
                     {"q", static_cast<std::int64_t>(q)},
                     {"e", static_cast<std::int64_t>(e)},
                     {"f", static_cast<std::int64_t>(f)},
                     {"donor_class", static_cast<std::int64_t>(spec.donor_class)},
                     {"donor_kept_index", static_cast<std::int64_t>(spec.donor_class)},
                     {"label_base", 0}}};
    if (seed) prov.params["seed"] = static_cast<std::int64_t>(*seed);
    return apply_trim(base, spec, std::move(prov));
}

inline Design trim_plus(std::uint32_t q, std::size_t e, std::size_t f,
                        std::optional<std::uint64_t> seed = std::nullopt) {
    const auto pp = as_prime_power(q);
    if (!pp) throw NotPrimePower(q);
    return trim_plus(*pp, e, f, seed);
}

/// d = (s-e)*s from a MOLS net: remove e full donor blocks, discard the donor.
/// w+1 classes, every block of size exactly s-e, mu = 1.
inline Design shrink_const(std::size_t s, std::size_t e, const LatinSquares& mols,
                           std::optional<std::uint64_t> seed = std::nullopt) {
    if (e == 0 || e >= s) throw OffsetsInvalid("shrink_const requires 0 < e < s");
    if (mols.s != s) throw TooFewSquares("MOLS side does not match s");
    if (mols.squares.empty()) throw TooFewSquares("at least one Latin square required");

    const Design base = net_design(mols, mols.squares.size());
    std::mt19937_64 rng(seed.value_or(0));
    TrimSpec spec;
    spec.keep_donor = false;
    spec.donor_class = seed ? rng() % base.classes.size() : 0;
    spec.removed_blocks = trim_detail::pick_indices(s, e, seed, &rng);

    Provenance prov{"shrink_const",
                    {{"s", static_cast<std::int64_t>(s)},
                     {"e", static_cast<std::int64_t>(e)},
                     {"w", static_cast<std::int64_t>(mols.squares.size())},
                     {"donor_class", static_cast<std::int64_t>(spec.donor_class)},
                     {"label_base", 0}}};
    if (seed) prov.params["seed"] = static_cast<std::int64_t>(*seed);
    return apply_trim(base, spec, std::move(prov));
}

/// d = s*(s+f): block-wise union of a fresh s^2 net (first class discarded)
/// with the f*s-point shrink of the same net, on disjoint labels.  w+1
/// classes of constant block size s+f; cross-class overlaps are 1 or 2.
inline Design extend_union(std::size_t s, std::size_t f, const LatinSquares& mols,
                           std::optional<std::uint64_t> seed = std::nullopt) {
    if (f == 0 || f > s) throw OffsetsInvalid("extend_union requires 0 < f <= s");
    if (mols.s != s) throw TooFewSquares("MOLS side does not match s");
    if (mols.squares.empty()) throw TooFewSquares("at least one Latin square required");

    const std::size_t w = mols.squares.size();
    const Design big = net_design(mols, w);

    Design small;
    if (f == s) {
        // no shrink: the auxiliary part is the full net minus its first class
        small.d = s * s;
        for (std::size_t ci = 1; ci < big.classes.size(); ++ci)
            small.classes.push_back(big.classes[ci]);
    } else {
        small = shrink_const(s, s - f, mols, seed);
    }

    // class i of (net minus first class) pairs with class i of the shrink;
    // both orderings descend from the same net, so block j aligns with block j
    const Point offset = static_cast<Point>(s * s);
    Design out;
    out.d = s * s + f * s;
    for (std::size_t ci = 0; ci + 1 < big.classes.size(); ++ci) {
        const auto& a = big.classes[ci + 1];
        const auto& b = small.classes[ci];
        if (a.size() != b.size()) throw Error("extend_union class misalignment");
        ParallelClass pc;
        for (std::size_t j = 0; j < a.size(); ++j) {
            Block u = a[j];
            for (Point x : b[j]) u.push_back(x + offset);
            pc.push_back(std::move(u));
        }
        out.classes.push_back(std::move(pc));
    }
    out.provenance = {"extend_union",
                      {{"s", static_cast<std::int64_t>(s)},
                       {"f", static_cast<std::int64_t>(f)},
                       {"w", static_cast<std::int64_t>(w)},
                       {"label_base", 0}}};
    if (seed) out.provenance.params["seed"] = static_cast<std::int64_t>(*seed);
    return out;
}

/// Builds the design a plan calls for.  MOLS are synthesized for prime-power
/// sides; otherwise a validated set must be supplied.
inline Design realize_design(const FactorizationPlan& plan,
                             const std::optional<LatinSquares>& mols = std::nullopt,
                             std::optional<std::uint64_t> seed = std::nullopt) {
    const auto mols_for_side = [&](std::size_t side) -> LatinSquares {
        if (mols) {
            if (mols->s != side)
                throw Error("supplied MOLS have side " + std::to_string(mols->s) +
                            ", need " + std::to_string(side));
            return *mols;
        }
        if (const auto pp = as_prime_power(side)) return mols_prime_power(*pp);
        throw Error("MOLS file required for non-prime-power side " + std::to_string(side));
    };

    switch (plan.route) {
        case Route::square_mub:
            return affine_resolvable_design(*plan.q);
        case Route::trim_plus:
            return trim_plus(*plan.q, plan.e, plan.f, seed);
        case Route::trim_minus:
            return trim_minus(*plan.q, plan.e, plan.f, seed);
        case Route::shrink_const:
            return shrink_const(plan.s, plan.s - plan.k, mols_for_side(plan.s), seed);
        case Route::extend_const:
            return extend_union(plan.k, plan.s - plan.k, mols_for_side(plan.k), seed);
    }
    throw RouteUnsupported("unknown route");
}

}  // namespace amub
