#pragma once

// Pipeline layer behind the command-line tool: plan / build / analyze /
// table / export.  Data goes to files or standard out; progress and error
// lines go to standard error.
//
// Exit codes: 0 all claim flags pass, 1 claim failure, 2 planning
// infeasible, 3 missing real Hadamard matrix, 4 input/output error.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "io.hpp"
#include "mubgen.hpp"
#include "planner.hpp"
#include "trims.hpp"

namespace amub {

struct RunConfig {
    std::string command;
    std::size_t d{};
    std::optional<std::size_t> k, s;
    Target target{Target::complex_field};

    std::filesystem::path out_dir{"."};
    std::optional<std::filesystem::path> mols_path;
    std::optional<std::filesystem::path> hadamard_lib_path;
    std::optional<std::filesystem::path> plan_json_path;
    std::optional<std::filesystem::path> csv_path;
    std::optional<std::filesystem::path> export_path;
    std::filesystem::path analyze_dir{"."};

    bool append_identity{};
    std::optional<std::uint64_t> seed;
    double tol{1e-9};

    std::size_t d_from{}, d_to{};
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitClaimFailure = 1;
inline constexpr int kExitPlanInfeasible = 2;
inline constexpr int kExitMissingHadamard = 3;
inline constexpr int kExitIoError = 4;

/// Lower bound on the exact-MUB count for dimension d: the smallest prime
/// power in its factorization, plus one.
inline std::size_t mub_lower_bound(std::size_t d) {
    std::size_t best = d, m = d;
    for (std::size_t p = 2; p * p <= m; ++p) {
        if (m % p != 0) continue;
        std::size_t pk = 1;
        while (m % p == 0) {
            pk *= p;
            m /= p;
        }
        best = std::min(best, pk);
    }
    if (m > 1) best = std::min(best, m);
    return best + 1;
}

namespace cli_detail {

inline HadamardSource make_hadamard_source(const RunConfig& cfg) {
    HadamardSource src;
    std::optional<std::filesystem::path> path = cfg.hadamard_lib_path;
    if (!path) {
        if (const char* env = std::getenv("AMUB_HADAMARD_LIB")) path = env;
    }
    if (path) load_hadamard_library(*path, src);
    return src;
}

inline std::optional<LatinSquares> load_optional_mols(const RunConfig& cfg) {
    if (!cfg.mols_path) return std::nullopt;
    return load_mols(*cfg.mols_path);
}

inline std::optional<std::size_t> mols_count(const std::optional<LatinSquares>& mols) {
    if (!mols) return std::nullopt;
    return mols->squares.size();
}

template <typename Fn>
int guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const MissingRealHadamard& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitMissingHadamard;
    } catch (const NotComposite& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPlanInfeasible;
    } catch (const GapTooLarge& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPlanInfeasible;
    } catch (const NoRealHadamard& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPlanInfeasible;
    } catch (const NotPrimePower& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPlanInfeasible;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIoError;
    }
}

inline void print_plan(std::ostream& os, const FactorizationPlan& plan,
                       const PredictedQuality& pred) {
    os << "plan for d = " << plan.d << " = " << plan.k << " x " << plan.s << "\n";
    os << "  route: " << route_name(plan.route) << " (sign " << to_string(plan.sign) << ")\n";
    if (plan.q)
        os << "  q = " << plan.q->q << " (" << plan.q->p << "^" << plan.q->n << "), e = " << plan.e
           << ", f = " << plan.f << ", delta = " << plan.delta() << "\n";
    else
        os << "  q = (file-based MOLS side), e = " << plan.e << ", f = " << plan.f << "\n";
    os << "  predicted beta  = sqrt(" << pred.beta.mu_sq * pred.beta.d << "/" << pred.beta.kmin_sq
       << ") = " << pred.beta_float << "\n";
    os << "  predicted bases = " << pred.classes << "\n";
    os << "  predicted sparsity in [" << pred.eps_lo << ", " << pred.eps_hi << "]\n";
    os << "  spectrum size bound: " << pred.delta_set_bound << "\n";
}

struct BuildResult {
    FactorizationPlan plan;
    PredictedQuality predicted;
    Design design;
    BasisSet bases;
    SpectrumReport report;
    std::optional<std::size_t> n_mols;
};

inline BuildResult run_pipeline(const RunConfig& cfg, const HadamardSource& src) {
    BuildResult r;
    const auto mols = load_optional_mols(cfg);
    r.n_mols = mols_count(mols);
    r.plan = choose_plan(cfg.d, cfg.k, cfg.s, cfg.target, &src);
    r.predicted = predicted_parameters(r.plan, r.n_mols);
    r.design = realize_design(r.plan, mols, cfg.seed);
    if (!validate_design(r.design).ok())
        throw Error("constructed design failed validation");
    r.bases = assemble_bases(r.design, r.plan.target, &src);
    r.report = check_claims(r.design, r.bases, r.plan, r.n_mols, cfg.tol);
    return r;
}

inline json report_to_json(const BuildResult& r) {
    json j{{"plan", r.plan}, {"predicted", r.predicted}, {"report", r.report}};
    if (r.n_mols)
        j["n_mols"] = *r.n_mols;
    else
        j["n_mols"] = nullptr;
    return j;
}

}  // namespace cli_detail

inline int run_plan(const RunConfig& cfg) {
    return cli_detail::guarded([&] {
        const auto src = cli_detail::make_hadamard_source(cfg);
        const auto mols = cli_detail::load_optional_mols(cfg);
        const auto plan = choose_plan(cfg.d, cfg.k, cfg.s, cfg.target, &src);
        const auto pred = predicted_parameters(plan, cli_detail::mols_count(mols));
        cli_detail::print_plan(std::cout, plan, pred);
        if (cfg.plan_json_path) {
            json j = plan;
            j["predicted"] = pred;
            save_json(*cfg.plan_json_path, j);
        }
        return kExitOk;
    });
}

inline int run_build(const RunConfig& cfg) {
    return cli_detail::guarded([&] {
        const auto src = cli_detail::make_hadamard_source(cfg);
        auto result = cli_detail::run_pipeline(cfg, src);
        if (cfg.append_identity)
            result.report.notes.push_back(
                "identity basis appended to bases.json; excluded from claim checks");

        std::filesystem::create_directories(cfg.out_dir);
        save_json(cfg.out_dir / "design.json", json(result.design));

        json jb = result.bases;
        if (cfg.append_identity) {
            BasisSet id_set;
            id_set.d = result.bases.d;
            id_set.flavor = result.bases.flavor;
            id_set.bases.push_back(identity_basis(result.bases.d, result.bases.flavor));
            const json jid = id_set;
            jb["bases"].push_back(jid["bases"][0]);
            if (jb.contains("exact")) jb["exact"].push_back(jid["exact"][0]);
            jb["appended_identity"] = true;
        }
        save_json(cfg.out_dir / "bases.json", jb);
        save_json(cfg.out_dir / "report.json", cli_detail::report_to_json(result));

        std::cerr << "built d = " << result.plan.d << " via " << route_name(result.plan.route)
                  << ": " << result.bases.bases.size() << " bases, beta = "
                  << result.report.beta_realized << ", claims "
                  << (result.report.all_claims_ok() ? "pass" : "FAIL") << "\n";
        return result.report.all_claims_ok() ? kExitOk : kExitClaimFailure;
    });
}

inline int run_analyze(const RunConfig& cfg) {
    return cli_detail::guarded([&] {
        const Design design = load_design(cfg.analyze_dir / "design.json");
        const json jb = load_json(cfg.analyze_dir / "bases.json");
        const json jr = load_json(cfg.analyze_dir / "report.json");
        const auto plan = jr.at("plan").get<FactorizationPlan>();
        std::optional<std::size_t> n_mols;
        if (jr.contains("n_mols") && !jr.at("n_mols").is_null())
            n_mols = jr.at("n_mols").get<std::size_t>();

        json mats = jb;
        if (jb.value("appended_identity", false)) {
            mats["bases"].erase(mats["bases"].size() - 1);
            if (mats.contains("exact")) mats["exact"].erase(mats["exact"].size() - 1);
        }
        const BasisSet bs = basis_set_from_json(mats, design);
        const SpectrumReport rep = check_claims(design, bs, plan, n_mols, cfg.tol);

        cli_detail::BuildResult result;
        result.plan = plan;
        result.predicted = predicted_parameters(plan, n_mols);
        result.report = rep;
        result.n_mols = n_mols;
        std::filesystem::create_directories(cfg.out_dir);
        save_json(cfg.out_dir / "report.json", cli_detail::report_to_json(result));
        std::cerr << "analyzed d = " << plan.d << ": claims "
                  << (rep.all_claims_ok() ? "pass" : "FAIL") << "\n";
        return rep.all_claims_ok() ? kExitOk : kExitClaimFailure;
    });
}

inline int run_table(const RunConfig& cfg) {
    return cli_detail::guarded([&] {
        if (cfg.d_to < cfg.d_from) throw Error("table range is empty");
        if (cfg.d_to - cfg.d_from + 1 > 5000) throw Error("table range exceeds 5000 dimensions");
        const auto src = cli_detail::make_hadamard_source(cfg);

        std::ostringstream csv;
        csv << "d,k,s,route,q,e,f,classes,mub_lower_bound,beta_predicted,beta_realized,"
               "eps_min,eps_max,mu,is_mub,millis\n";
        for (std::size_t d = cfg.d_from; d <= cfg.d_to; ++d) {
            FactorizationPlan plan;
            try {
                plan = choose_plan(d, std::nullopt, std::nullopt, cfg.target, &src);
            } catch (const Error&) {
                continue;  // infeasible dimension
            }
            const auto t0 = std::chrono::steady_clock::now();
            Design design;
            BasisSet bases;
            SpectrumReport rep;
            PredictedQuality pred;
            try {
                pred = predicted_parameters(plan, std::nullopt);
                design = realize_design(plan);
                bases = assemble_bases(design, plan.target, &src);
                rep = spectrum(bases, cfg.tol);
            } catch (const Error& e) {
                std::cerr << "d = " << d << " skipped: " << e.what() << "\n";
                continue;
            }
            const auto t1 = std::chrono::steady_clock::now();
            const double ms =
                std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(t1 - t0)
                    .count();
            const double eps_min =
                *std::min_element(rep.eps_per_basis.begin(), rep.eps_per_basis.end());
            const double eps_max =
                *std::max_element(rep.eps_per_basis.begin(), rep.eps_per_basis.end());
            const bool is_mub =
                rep.delta.size() == 1 &&
                std::abs(rep.delta[0] - 1.0 / std::sqrt(static_cast<double>(d))) <= cfg.tol;
            csv << d << ',' << plan.k << ',' << plan.s << ',' << route_name(plan.route) << ','
                << (plan.q ? plan.q->q : 0) << ',' << plan.e << ',' << plan.f << ','
                << bases.bases.size() << ',' << mub_lower_bound(d) << ',' << pred.beta_float << ','
                << rep.beta_realized << ',' << eps_min << ',' << eps_max << ',' << rep.mu << ','
                << (is_mub ? 1 : 0) << ',' << ms << "\n";
        }
        if (cfg.csv_path) {
            std::ofstream out(*cfg.csv_path);
            if (!out) throw Error("cannot write " + cfg.csv_path->string());
            out << csv.str();
        } else {
            std::cout << csv.str();
        }
        return kExitOk;
    });
}

inline int run_export(const RunConfig& cfg) {
    return cli_detail::guarded([&] {
        const auto src = cli_detail::make_hadamard_source(cfg);
        const auto mols = cli_detail::load_optional_mols(cfg);
        const auto plan = choose_plan(cfg.d, cfg.k, cfg.s, cfg.target, &src);
        const Design design = realize_design(plan, mols, cfg.seed);
        if (!validate_design(design).ok())
            throw Error("constructed design failed validation");
        const auto path = cfg.export_path.value_or(cfg.out_dir / "design.json");
        if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
        save_json(path, json(design));
        std::cerr << "exported design for d = " << design.d << " to " << path.string() << "\n";
        return kExitOk;
    });
}

}  // namespace amub
