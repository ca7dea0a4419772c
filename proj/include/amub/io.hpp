#pragma once

// JSON (de)serialization for every artifact the pipeline persists, plus the
// validated loaders for externally supplied MOLS and Hadamard matrices.
// Doubles go through nlohmann's shortest-round-trip printer, so re-loading
// an artifact reproduces the stored values bit for bit.

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include "json.hpp"

#include "designs.hpp"
#include "mubgen.hpp"
#include "planner.hpp"

namespace amub {

using nlohmann::json;

// --- enums ---

inline std::string to_string(Sign s) { return s == Sign::plus ? "plus" : "minus"; }
inline std::string to_string(Target t) {
    return t == Target::real_field ? "real" : "complex";
}
inline std::string to_string(Flavor f) {
    return f == Flavor::real_flavor ? "real" : "complex";
}

inline Sign sign_from_string(const std::string& s) {
    if (s == "plus") return Sign::plus;
    if (s == "minus") return Sign::minus;
    throw Error("unknown sign: " + s);
}

inline Target target_from_string(const std::string& s) {
    if (s == "real") return Target::real_field;
    if (s == "complex") return Target::complex_field;
    throw Error("unknown target: " + s);
}

inline Route route_from_string(const std::string& s) {
    for (Route r : {Route::trim_plus, Route::trim_minus, Route::shrink_const,
                    Route::extend_const, Route::square_mub})
        if (s == route_name(r)) return r;
    throw Error("unknown route: " + s);
}

// --- core types ---

inline void to_json(json& j, const PrimePower& pp) {
    j = json{{"p", pp.p}, {"n", pp.n}, {"q", pp.q}};
}
inline void from_json(const json& j, PrimePower& pp) {
    pp.p = j.at("p").get<std::uint32_t>();
    pp.n = j.at("n").get<std::uint32_t>();
    pp.q = j.at("q").get<std::uint32_t>();
}

inline void to_json(json& j, const Provenance& p) {
    j = json{{"construction", p.construction}, {"params", p.params}};
}
inline void from_json(const json& j, Provenance& p) {
    p.construction = j.at("construction").get<std::string>();
    p.params = j.at("params").get<std::map<std::string, std::int64_t>>();
}

inline void to_json(json& j, const Design& d) {
    j = json{{"d", d.d}, {"provenance", d.provenance}, {"classes", d.classes}};
}
inline void from_json(const json& j, Design& d) {
    d.d = j.at("d").get<std::size_t>();
    d.provenance = j.at("provenance").get<Provenance>();
    d.classes = j.at("classes").get<std::vector<ParallelClass>>();
}

inline void to_json(json& j, const LatinSquares& ls) {
    j = json{{"s", ls.s}, {"squares", ls.squares}};
}
inline void from_json(const json& j, LatinSquares& ls) {
    ls.s = j.at("s").get<std::size_t>();
    ls.squares = j.at("squares").get<std::vector<std::vector<std::vector<std::uint32_t>>>>();
}

inline void to_json(json& j, const ExactBeta& b) {
    j = json{{"mu_sq", b.mu_sq}, {"d", b.d}, {"kmin_sq", b.kmin_sq}};
}
inline void from_json(const json& j, ExactBeta& b) {
    b.mu_sq = j.at("mu_sq").get<std::uint64_t>();
    b.d = j.at("d").get<std::uint64_t>();
    b.kmin_sq = j.at("kmin_sq").get<std::uint64_t>();
}

inline void to_json(json& j, const PredictedQuality& p) {
    j = json{{"beta", p.beta},       {"beta_float", p.beta_float},
             {"classes", p.classes}, {"eps_lo", p.eps_lo},
             {"eps_hi", p.eps_hi},   {"delta_set_bound", p.delta_set_bound}};
}
inline void from_json(const json& j, PredictedQuality& p) {
    p.beta = j.at("beta").get<ExactBeta>();
    p.beta_float = j.at("beta_float").get<double>();
    p.classes = j.at("classes").get<std::size_t>();
    p.eps_lo = j.at("eps_lo").get<double>();
    p.eps_hi = j.at("eps_hi").get<double>();
    p.delta_set_bound = j.at("delta_set_bound").get<std::size_t>();
}

inline void to_json(json& j, const FactorizationPlan& p) {
    j = json{{"d", p.d},
             {"k", p.k},
             {"s", p.s},
             {"delta", {{"num", p.delta_num}, {"den", 2}}},
             {"e", p.e},
             {"f", p.f},
             {"sign", to_string(p.sign)},
             {"route", route_name(p.route)},
             {"target", to_string(p.target)}};
    if (p.q)
        j["q"] = *p.q;
    else
        j["q"] = nullptr;
}
inline void from_json(const json& j, FactorizationPlan& p) {
    p.d = j.at("d").get<std::size_t>();
    p.k = j.at("k").get<std::size_t>();
    p.s = j.at("s").get<std::size_t>();
    p.delta_num = j.at("delta").at("num").get<std::int64_t>();
    p.e = j.at("e").get<std::size_t>();
    p.f = j.at("f").get<std::size_t>();
    p.sign = sign_from_string(j.at("sign").get<std::string>());
    p.route = route_from_string(j.at("route").get<std::string>());
    p.target = target_from_string(j.at("target").get<std::string>());
    if (j.contains("q") && !j.at("q").is_null())
        p.q = j.at("q").get<PrimePower>();
    else
        p.q.reset();
}

inline void to_json(json& j, const Fraction& f) { j = json::array({f.num, f.den}); }
inline void from_json(const json& j, Fraction& f) {
    f.num = j.at(0).get<std::uint64_t>();
    f.den = j.at(1).get<std::uint64_t>();
}

inline void to_json(json& j, const SpectrumReport& r) {
    j = json{{"delta", r.delta},
             {"beta_realized", r.beta_realized},
             {"eps_per_basis", r.eps_per_basis},
             {"mu", r.mu},
             {"notes", r.notes}};
    if (r.delta_exact) j["delta_exact_squared"] = *r.delta_exact;
    if (r.claims_evaluated) {
        j["delta_expected"] = r.delta_expected;
        j["claims"] = json{{"beta_ok", r.beta_ok}, {"delta_ok", r.delta_ok},
                           {"eps_ok", r.eps_ok},   {"mu_ok", r.mu_ok},
                           {"is_mub", r.is_mub},   {"pass", r.all_claims_ok()}};
    }
}
inline void from_json(const json& j, SpectrumReport& r) {
    r = SpectrumReport{};
    r.delta = j.at("delta").get<std::vector<double>>();
    r.beta_realized = j.at("beta_realized").get<double>();
    r.eps_per_basis = j.at("eps_per_basis").get<std::vector<double>>();
    r.mu = j.at("mu").get<std::size_t>();
    r.notes = j.at("notes").get<std::vector<std::string>>();
    if (j.contains("delta_exact_squared"))
        r.delta_exact = j.at("delta_exact_squared").get<std::vector<Fraction>>();
    if (j.contains("claims")) {
        r.claims_evaluated = true;
        r.delta_expected = j.at("delta_expected").get<std::vector<double>>();
        const auto& c = j.at("claims");
        r.beta_ok = c.at("beta_ok").get<bool>();
        r.delta_ok = c.at("delta_ok").get<bool>();
        r.eps_ok = c.at("eps_ok").get<bool>();
        r.mu_ok = c.at("mu_ok").get<bool>();
        r.is_mub = c.at("is_mub").get<bool>();
    }
}

// --- basis sets ---

inline void to_json(json& j, const BasisSet& bs) {
    j = json{{"d", bs.d}, {"flavor", to_string(bs.flavor)}, {"provenance", bs.provenance}};
    json mats = json::array();
    for (const auto& cb : bs.bases) {
        const CMatrix m = cb.dense(bs.d);
        json cols = json::array();
        for (std::size_t c = 0; c < bs.d; ++c) {
            json col = json::array();
            for (std::size_t r = 0; r < bs.d; ++r)
                col.push_back(json::array({m.at(r, c).real(), m.at(r, c).imag()}));
            cols.push_back(std::move(col));
        }
        mats.push_back(std::move(cols));
    }
    j["bases"] = std::move(mats);
    if (bs.flavor == Flavor::real_flavor) {
        json exact = json::array();
        for (const auto& cb : bs.bases) {
            json orders = json::array(), numerators = json::array();
            for (std::size_t bi = 0; bi < cb.blocks.size(); ++bi) {
                orders.push_back(cb.blocks[bi].size());
                const SeedUnitary& u = *cb.seeds[bi];
                json core = json::array();
                for (std::size_t r = 0; r < u.order; ++r) {
                    json row = json::array();
                    for (std::size_t c = 0; c < u.order; ++c) row.push_back(u.core_at(r, c));
                    core.push_back(std::move(row));
                }
                numerators.push_back(std::move(core));
            }
            exact.push_back(json{{"blocks", cb.blocks},
                                 {"block_orders", std::move(orders)},
                                 {"numerators", std::move(numerators)}});
        }
        j["exact"] = std::move(exact);
    }
}

/// Rebuilds a BasisSet from its JSON against the design that produced it.
/// Real-flavor sets are reconstructed from the exact integer form, checked
/// against the stored dense columns; complex ones come from the dense
/// columns directly.  Off-support entries must be exactly zero, and the
/// constant-modulus property is re-derived rather than trusted, so the
/// spectrum paths stay honest on hand-edited files.
inline BasisSet basis_set_from_json(const json& j, const Design& dsg) {
    BasisSet bs;
    bs.d = j.at("d").get<std::size_t>();
    if (bs.d != dsg.d) throw MismatchedProvenance("bases and design disagree on d");
    const std::string flavor = j.at("flavor").get<std::string>();
    bs.flavor = flavor == "real" ? Flavor::real_flavor : Flavor::complex_flavor;
    bs.provenance = j.at("provenance").get<Provenance>();

    const auto& mats = j.at("bases");
    if (mats.size() != dsg.classes.size())
        throw MismatchedProvenance("basis count does not match class count");

    for (std::size_t l = 0; l < dsg.classes.size(); ++l) {
        ClassBasis cb;
        std::size_t off = 0;
        std::vector<bool> support(dsg.d * dsg.d, false);
        for (const auto& b : dsg.classes[l]) {
            const std::size_t k = b.size();
            const double norm = 1.0 / std::sqrt(static_cast<double>(k));
            auto seed = std::make_shared<SeedUnitary>();
            seed->order = k;
            seed->entries.resize(k * k);
            for (std::size_t jrow = 0; jrow < k; ++jrow) {
                const auto& col = mats.at(l).at(off + jrow);
                if (col.size() != dsg.d)
                    throw MismatchedProvenance("basis column has wrong dimension");
                for (std::size_t t = 0; t < k; ++t) {
                    const auto& entry = col.at(b[t]);
                    seed->entries[jrow * k + t] = {entry.at(0).get<double>(),
                                                   entry.at(1).get<double>()};
                    support[(off + jrow) * dsg.d + b[t]] = true;
                }
            }
            if (bs.flavor == Flavor::real_flavor) {
                seed->kind = SeedKind::real_stored;
                const auto& core = j.at("exact").at(l).at("numerators").at(cb.blocks.size());
                seed->core.resize(k * k);
                for (std::size_t r = 0; r < k; ++r)
                    for (std::size_t c = 0; c < k; ++c) {
                        const int v = core.at(r).at(c).get<int>();
                        if (v != 1 && v != -1)
                            throw Error("exact numerator is not +1 or -1");
                        seed->core[r * k + c] = static_cast<std::int8_t>(v);
                        const std::complex<double> expect(v * norm, 0.0);
                        if (std::abs(seed->entries[r * k + c] - expect) > 1e-12)
                            throw Error("dense entries disagree with the exact integer form");
                        seed->entries[r * k + c] = expect;
                    }
                seed->unimodular = true;
            } else {
                seed->kind = SeedKind::fourier;
                seed->unimodular = true;
                for (const auto& z : seed->entries)
                    if (std::abs(std::abs(z) - norm) > 1e-12 * norm) seed->unimodular = false;
            }
            cb.blocks.push_back(b);
            cb.seeds.push_back(std::move(seed));
            cb.col_offset.push_back(off);
            off += k;
        }
        // everything outside the block supports must be exactly zero
        for (std::size_t c = 0; c < dsg.d; ++c)
            for (std::size_t r = 0; r < dsg.d; ++r) {
                if (support[c * dsg.d + r]) continue;
                const auto& entry = mats.at(l).at(c).at(r);
                if (entry.at(0).get<double>() != 0.0 || entry.at(1).get<double>() != 0.0)
                    throw Error("nonzero entry outside the block support");
            }
        bs.bases.push_back(std::move(cb));
    }
    return bs;
}

// --- files ---

inline json load_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw Error("cannot parse " + path.string() + ": " + e.what());
    }
    return j;
}

inline void save_json(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << j.dump(2) << "\n";
}

/// Loads a Latin-square set and re-validates every invariant.
inline LatinSquares load_mols(const std::filesystem::path& path) {
    LatinSquares ls = load_json(path).get<LatinSquares>();
    validate_latin_squares(ls);
    return ls;
}

/// Loads a design and re-checks the partition property.
inline Design load_design(const std::filesystem::path& path) {
    Design dsg = load_json(path).get<Design>();
    if (!validate_design(dsg).ok())
        throw Error("design in " + path.string() + " fails validation");
    return dsg;
}

/// Hadamard library: one {"order": k, "rows": [[+-1,...],...]} object or an
/// array of them; every matrix is Gram-validated before registration.
inline void load_hadamard_library(const std::filesystem::path& path, HadamardSource& source) {
    const json j = load_json(path);
    const auto add_one = [&](const json& obj) {
        const auto rows = obj.at("rows").get<std::vector<std::vector<int>>>();
        if (rows.size() != obj.at("order").get<std::size_t>())
            throw Error("Hadamard entry order field does not match row count");
        source.add(rows);
    };
    if (j.is_array())
        for (const auto& obj : j) add_one(obj);
    else
        add_one(j);
}

}  // namespace amub
