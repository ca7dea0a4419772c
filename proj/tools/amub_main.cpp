// Command-line front end: plan, build, analyze, table, export.

#include <optional>
#include <string>

#include "CLI11.hpp"

#include "amub/cli.hpp"

namespace {

void add_target_option(CLI::App* sub, std::string& target) {
    sub->add_option("--target", target, "basis flavor: complex or real")
        ->check(CLI::IsMember({"complex", "real"}))
        ->capture_default_str();
}

void add_factor_options(CLI::App* sub, amub::RunConfig& cfg, std::size_t& k, std::size_t& s) {
    sub->add_option("--d", cfg.d, "dimension d")->required();
    sub->add_option("--k", k, "smaller factor of d");
    sub->add_option("--s", s, "larger factor of d");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"approximate mutually unbiased bases from resolvable block designs"};
    app.require_subcommand(1);

    amub::RunConfig cfg;
    std::string target = "complex";
    std::size_t k = 0, s = 0;
    std::string out_dir = ".", analyze_dir = ".";
    std::string mols_path, hadamard_path, plan_json, csv_path, export_path;
    std::uint64_t seed = 0;

    auto* plan = app.add_subcommand("plan", "factor d, pick q and the route, predict quality");
    add_factor_options(plan, cfg, k, s);
    add_target_option(plan, target);
    plan->add_option("--json", plan_json, "write the plan as JSON to this path");
    plan->add_option("--mols", mols_path, "Latin-squares JSON for non-prime-power sides");
    plan->add_option("--hadamard-lib", hadamard_path, "Hadamard library JSON");

    auto* build = app.add_subcommand(
        "build", "construct the design, assemble bases, verify every claim");
    add_factor_options(build, cfg, k, s);
    add_target_option(build, target);
    build->add_option("--out", out_dir, "output directory")->capture_default_str();
    build->add_option("--mols", mols_path, "Latin-squares JSON for non-prime-power sides");
    build->add_option("--hadamard-lib", hadamard_path, "Hadamard library JSON");
    build->add_flag("--append-identity", cfg.append_identity,
                    "append the computational basis to bases.json (not claim-checked)");
    auto* seed_opt = build->add_option("--seed", seed, "randomize donor choices with this seed");
    build->add_option("--tol", cfg.tol, "clustering / claim tolerance")
        ->check(CLI::PositiveNumber);

    auto* analyze = app.add_subcommand(
        "analyze", "re-verify claims from design.json + bases.json + report.json");
    analyze->add_option("--dir", analyze_dir, "directory holding the build artifacts")
        ->capture_default_str();
    analyze->add_option("--out", out_dir, "directory for the recomputed report.json")
        ->capture_default_str();
    analyze->add_option("--tol", cfg.tol, "clustering / claim tolerance")
        ->check(CLI::PositiveNumber);

    auto* table = app.add_subcommand("table", "sweep a dimension range into a CSV table");
    table->add_option("--from", cfg.d_from, "first dimension")->required();
    table->add_option("--to", cfg.d_to, "last dimension")->required();
    add_target_option(table, target);
    table->add_option("--out", csv_path, "CSV output path (default: standard out)");
    table->add_option("--hadamard-lib", hadamard_path, "Hadamard library JSON");
    table->add_option("--tol", cfg.tol, "clustering tolerance")->check(CLI::PositiveNumber);

    auto* exp = app.add_subcommand("export", "construct and validate a design, write its JSON");
    add_factor_options(exp, cfg, k, s);
    add_target_option(exp, target);
    exp->add_option("--out", export_path, "design JSON path (default: ./design.json)");
    exp->add_option("--mols", mols_path, "Latin-squares JSON for non-prime-power sides");
    auto* exp_seed = exp->add_option("--seed", seed, "randomize donor choices with this seed");

    CLI11_PARSE(app, argc, argv);

    if (k > 0) cfg.k = k;
    if (s > 0) cfg.s = s;
    cfg.target = target == "real" ? amub::Target::real_field : amub::Target::complex_field;
    cfg.out_dir = out_dir;
    cfg.analyze_dir = analyze_dir;
    if (!mols_path.empty()) cfg.mols_path = mols_path;
    if (!hadamard_path.empty()) cfg.hadamard_lib_path = hadamard_path;
    if (!plan_json.empty()) cfg.plan_json_path = plan_json;
    if (!csv_path.empty()) cfg.csv_path = csv_path;
    if (!export_path.empty()) cfg.export_path = export_path;
    if (seed_opt->count() > 0 || exp_seed->count() > 0) cfg.seed = seed;

    if (plan->parsed()) {
        cfg.command = "plan";
        return amub::run_plan(cfg);
    }
    if (build->parsed()) {
        cfg.command = "build";
        return amub::run_build(cfg);
    }
    if (analyze->parsed()) {
        cfg.command = "analyze";
        return amub::run_analyze(cfg);
    }
    if (table->parsed()) {
        cfg.command = "table";
        return amub::run_table(cfg);
    }
    cfg.command = "export";
    return amub::run_export(cfg);
}
