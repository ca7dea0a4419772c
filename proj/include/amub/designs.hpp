#pragma once

// Resolvable block designs: the core data model plus the two seed families
// (affine resolvable (q^2, q, 1)-BIBD from line pencils over GF(q)^2, and
// MOLS-based nets), with validation and intersection-number computation.
//
// Point (x, y) in GF(q)^2 maps to index x*q + y; block and class ordering is
// fixed by element index, so every generated design is byte-reproducible.
// Printed references for these objects usually label points from 1; we use
// 0-based labels and record the base in provenance.

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "gfield.hpp"

namespace amub {

using Point = std::uint32_t;

/// Sorted, duplicate-free, nonempty set of point indices.
using Block = std::vector<Point>;

/// Disjoint blocks whose union is the whole point set.
using ParallelClass = std::vector<Block>;

struct Provenance {
    std::string construction;
    std::map<std::string, std::int64_t> params;
};

struct Design {
    std::size_t d{};
    std::vector<ParallelClass> classes;
    Provenance provenance;
};

struct LatinSquares {
    std::size_t s{};
    std::vector<std::vector<std::vector<std::uint32_t>>> squares;  // squares[i][row][col]
};

struct ClassValidation {
    bool partitions{};
    std::vector<std::size_t> block_sizes;
};

struct ValidationReport {
    bool all_partition{};
    std::vector<ClassValidation> classes;
    std::set<std::size_t> size_set;  // global block-size set K
    bool ok() const { return all_partition; }
};

/// Number of elements shared by two sorted blocks.
inline std::size_t block_overlap(const Block& a, const Block& b) {
    std::size_t i = 0, j = 0, n = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j])
            ++i;
        else if (a[i] > b[j])
            ++j;
        else {
            ++n;
            ++i;
            ++j;
        }
    }
    return n;
}

/// Affine resolvable (q^2, q, 1)-BIBD: classes are the slope-m line pencils
/// {y = m*x + c} for each m in GF(q), then the vertical pencil {x = c}.
/// Any two blocks from different classes share exactly one point.
inline Design affine_resolvable_design(const PrimePower& pp) {
    const Field F = make_field(pp.p, pp.n);
    const std::uint32_t q = pp.q;
    Design dsg;
    dsg.d = static_cast<std::size_t>(q) * q;
    dsg.classes.reserve(q + 1);
    for (std::uint32_t m = 0; m < q; ++m) {
        ParallelClass pc;
        pc.reserve(q);
        for (std::uint32_t c = 0; c < q; ++c) {
            Block b;
            b.reserve(q);
            for (std::uint32_t x = 0; x < q; ++x) {
                const std::uint32_t y = F.add(F.mul(m, x), c);
                b.push_back(x * q + y);
            }
            // x strictly increases, so the block is already sorted
            pc.push_back(std::move(b));
        }
        dsg.classes.push_back(std::move(pc));
    }
    ParallelClass vertical;
    vertical.reserve(q);
    for (std::uint32_t c = 0; c < q; ++c) {
        Block b;
        b.reserve(q);
        for (std::uint32_t y = 0; y < q; ++y) b.push_back(c * q + y);
        vertical.push_back(std::move(b));
    }
    dsg.classes.push_back(std::move(vertical));
    dsg.provenance = {"affine_resolvable",
                      {{"p", pp.p}, {"n", pp.n}, {"q", q}, {"label_base", 0}}};
    return dsg;
}

inline Design affine_resolvable_design(std::uint32_t q) {
    const auto pp = as_prime_power(q);
    if (!pp) throw NotPrimePower(q);
    return affine_resolvable_design(*pp);
}

/// The full set of q-1 mutually orthogonal Latin squares L_a(x, y) = a*x + y
/// over GF(q), a != 0.
inline LatinSquares mols_prime_power(const PrimePower& pp) {
    const Field F = make_field(pp.p, pp.n);
    const std::uint32_t q = pp.q;
    LatinSquares ls;
    ls.s = q;
    ls.squares.reserve(q - 1);
    for (std::uint32_t a = 1; a < q; ++a) {
        std::vector<std::vector<std::uint32_t>> sq(q, std::vector<std::uint32_t>(q));
        for (std::uint32_t x = 0; x < q; ++x)
            for (std::uint32_t y = 0; y < q; ++y) sq[x][y] = F.add(F.mul(a, x), y);
        ls.squares.push_back(std::move(sq));
    }
    return ls;
}

inline LatinSquares mols_prime_power(std::uint32_t q) {
    const auto pp = as_prime_power(q);
    if (!pp) throw NotPrimePower(q);
    return mols_prime_power(*pp);
}

inline bool is_latin(const std::vector<std::vector<std::uint32_t>>& sq, std::size_t s) {
    if (sq.size() != s) return false;
    for (const auto& row : sq)
        if (row.size() != s) return false;
    std::vector<bool> seen(s);
    for (std::size_t r = 0; r < s; ++r) {
        seen.assign(s, false);
        for (std::size_t c = 0; c < s; ++c) {
            if (sq[r][c] >= s || seen[sq[r][c]]) return false;
            seen[sq[r][c]] = true;
        }
    }
    for (std::size_t c = 0; c < s; ++c) {
        seen.assign(s, false);
        for (std::size_t r = 0; r < s; ++r) {
            if (seen[sq[r][c]]) return false;
            seen[sq[r][c]] = true;
        }
    }
    return true;
}

inline bool are_orthogonal(const std::vector<std::vector<std::uint32_t>>& a,
                           const std::vector<std::vector<std::uint32_t>>& b,
                           std::size_t s) {
    std::vector<bool> seen(s * s, false);
    for (std::size_t r = 0; r < s; ++r)
        for (std::size_t c = 0; c < s; ++c) {
            const std::size_t pair = static_cast<std::size_t>(a[r][c]) * s + b[r][c];
            if (seen[pair]) return false;
            seen[pair] = true;
        }
    return true;
}

/// Full check of the LatinSquares invariants; throws on the first failure.
inline void validate_latin_squares(const LatinSquares& ls) {
    if (ls.s == 0) throw Error("latin square side must be positive");
    for (std::size_t i = 0; i < ls.squares.size(); ++i)
        if (!is_latin(ls.squares[i], ls.s))
            throw Error("square " + std::to_string(i) + " is not Latin of side " +
                        std::to_string(ls.s));
    for (std::size_t i = 0; i < ls.squares.size(); ++i)
        for (std::size_t j = i + 1; j < ls.squares.size(); ++j)
            if (!are_orthogonal(ls.squares[i], ls.squares[j], ls.s))
                throw Error("squares " + std::to_string(i) + " and " + std::to_string(j) +
                            " are not orthogonal");
}

/// Net on s^2 points from w MOLS: rows, columns, then one class per square
/// where block i collects the cells holding symbol i.  Every pair of blocks
/// from different classes meets in exactly one point.
inline Design net_design(const LatinSquares& mols, std::size_t w) {
    if (w > mols.squares.size())
        throw TooFewSquares("requested " + std::to_string(w) + " squares, have " +
                            std::to_string(mols.squares.size()));
    const std::size_t s = mols.s;
    Design dsg;
    dsg.d = s * s;
    ParallelClass rows, cols;
    for (std::size_t x = 0; x < s; ++x) {
        Block b;
        for (std::size_t y = 0; y < s; ++y) b.push_back(static_cast<Point>(x * s + y));
        rows.push_back(std::move(b));
    }
    for (std::size_t y = 0; y < s; ++y) {
        Block b;
        for (std::size_t x = 0; x < s; ++x) b.push_back(static_cast<Point>(x * s + y));
        cols.push_back(std::move(b));
    }
    dsg.classes.push_back(std::move(rows));
    dsg.classes.push_back(std::move(cols));
    for (std::size_t i = 0; i < w; ++i) {
        ParallelClass pc(s);
        for (std::size_t x = 0; x < s; ++x)
            for (std::size_t y = 0; y < s; ++y)
                pc[mols.squares[i][x][y]].push_back(static_cast<Point>(x * s + y));
        dsg.classes.push_back(std::move(pc));
    }
    dsg.provenance = {"net",
                      {{"s", static_cast<std::int64_t>(s)},
                       {"w", static_cast<std::int64_t>(w)},
                       {"label_base", 0}}};
    return dsg;
}

/// Reports, per class, whether the partition property holds and the block
/// size multiset; failures are carried in the report, never thrown.
inline ValidationReport validate_design(const Design& dsg) {
    ValidationReport rep;
    rep.all_partition = dsg.d >= 2 && !dsg.classes.empty();
    std::vector<bool> seen(dsg.d);
    for (const auto& pc : dsg.classes) {
        ClassValidation cv;
        cv.partitions = true;
        seen.assign(dsg.d, false);
        std::size_t covered = 0;
        for (const auto& b : pc) {
            cv.block_sizes.push_back(b.size());
            rep.size_set.insert(b.size());
            if (b.empty()) cv.partitions = false;
            for (std::size_t i = 0; i < b.size(); ++i) {
                if (i > 0 && b[i] <= b[i - 1]) cv.partitions = false;  // unsorted or duplicate
                if (b[i] >= dsg.d || seen[b[i]]) {
                    cv.partitions = false;
                    continue;
                }
                seen[b[i]] = true;
                ++covered;
            }
        }
        if (covered != dsg.d) cv.partitions = false;
        rep.all_partition = rep.all_partition && cv.partitions;
        rep.classes.push_back(std::move(cv));
    }
    return rep;
}

/// mu: the maximum number of points shared by two blocks from distinct
/// parallel classes.  Brute force over all cross-class block pairs.
inline std::size_t intersection_number(const Design& dsg) {
    if (dsg.classes.size() < 2) throw SingleClass();
    std::size_t mu = 0;
    for (std::size_t l = 0; l < dsg.classes.size(); ++l)
        for (std::size_t m = l + 1; m < dsg.classes.size(); ++m)
            for (const auto& a : dsg.classes[l])
                for (const auto& b : dsg.classes[m]) mu = std::max(mu, block_overlap(a, b));
    return mu;
}

}  // namespace amub
