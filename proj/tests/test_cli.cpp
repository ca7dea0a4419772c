#include <filesystem>

#include "doctest.h"

#include "amub/cli.hpp"

using namespace amub;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / "amub_cli_tests" / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

RunConfig base_cfg(std::size_t d, std::size_t k, std::size_t s) {
    RunConfig cfg;
    cfg.d = d;
    cfg.k = k;
    cfg.s = s;
    return cfg;
}

}  // namespace

TEST_CASE("run_plan exit codes") {
    RunConfig ok = base_cfg(60, 6, 10);
    ok.command = "plan";
    CHECK(run_plan(ok) == kExitOk);

    RunConfig prime;
    prime.d = 37;
    CHECK(run_plan(prime) == kExitPlanInfeasible);

    RunConfig gap = base_cfg(12, 2, 6);
    CHECK(run_plan(gap) == kExitPlanInfeasible);

    RunConfig real30 = base_cfg(30, 5, 6);
    real30.target = Target::real_field;
    CHECK(run_plan(real30) == kExitPlanInfeasible);
}

TEST_CASE("build writes the three artifacts and returns success") {
    const fs::path out = fresh_dir("build_d30");
    RunConfig cfg = base_cfg(30, 5, 6);
    cfg.out_dir = out;
    REQUIRE(run_build(cfg) == kExitOk);
    CHECK(fs::exists(out / "design.json"));
    CHECK(fs::exists(out / "bases.json"));
    CHECK(fs::exists(out / "report.json"));

    const json report = load_json(out / "report.json");
    CHECK(report["report"]["claims"]["pass"] == true);
    CHECK(report["plan"]["route"] == "TRIM_MINUS");
    CHECK(report["report"]["delta"].size() <= 4);
}

TEST_CASE("real build carries the exact integer form") {
    const fs::path out = fresh_dir("build_d40");
    RunConfig cfg = base_cfg(40, 5, 8);
    cfg.target = Target::real_field;
    cfg.out_dir = out;
    REQUIRE(run_build(cfg) == kExitOk);
    const json bases = load_json(out / "bases.json");
    CHECK(bases["flavor"] == "real");
    REQUIRE(bases.contains("exact"));
    CHECK(bases["exact"].size() == 5);
}

TEST_CASE("missing real Hadamard is exit code three") {
    // d = 49 routes to the square construction; real seeds need H(7)
    RunConfig cfg = base_cfg(49, 7, 7);
    cfg.target = Target::real_field;
    cfg.out_dir = fresh_dir("build_d49_real");
    CHECK(run_build(cfg) == kExitMissingHadamard);
}

TEST_CASE("analyze reproduces the build report") {
    const fs::path out = fresh_dir("roundtrip_d30");
    RunConfig cfg = base_cfg(30, 5, 6);
    cfg.out_dir = out;
    REQUIRE(run_build(cfg) == kExitOk);

    const fs::path out2 = fresh_dir("roundtrip_d30_again");
    RunConfig acfg;
    acfg.analyze_dir = out;
    acfg.out_dir = out2;
    REQUIRE(run_analyze(acfg) == kExitOk);

    const json a = load_json(out / "report.json");
    const json b = load_json(out2 / "report.json");
    CHECK(a["plan"] == b["plan"]);
    CHECK(a["report"]["claims"] == b["report"]["claims"]);
    const auto da = a["report"]["delta"].get<std::vector<double>>();
    const auto db = b["report"]["delta"].get<std::vector<double>>();
    REQUIRE(da.size() == db.size());
    for (std::size_t i = 0; i < da.size(); ++i) CHECK(std::abs(da[i] - db[i]) <= 1e-12);
    CHECK(std::abs(a["report"]["beta_realized"].get<double>() -
                   b["report"]["beta_realized"].get<double>()) <= 1e-12);
}

TEST_CASE("analyze flags tampered bases with exit code one") {
    const fs::path out = fresh_dir("tampered_d30");
    RunConfig cfg = base_cfg(30, 5, 6);
    cfg.out_dir = out;
    REQUIRE(run_build(cfg) == kExitOk);

    // perturb an entry inside the first block's support
    const Design dsg = load_design(out / "design.json");
    const std::size_t row = dsg.classes[0][0][0];
    json bases = load_json(out / "bases.json");
    const double re = bases["bases"][0][0][row][0].get<double>();
    bases["bases"][0][0][row][0] = re + 0.05;
    save_json(out / "bases.json", bases);

    RunConfig acfg;
    acfg.analyze_dir = out;
    acfg.out_dir = fresh_dir("tampered_d30_report");
    CHECK(run_analyze(acfg) == kExitClaimFailure);
}

TEST_CASE("append-identity adds one basis to the export only") {
    const fs::path out = fresh_dir("identity_d9");
    RunConfig cfg = base_cfg(9, 3, 3);
    cfg.out_dir = out;
    cfg.append_identity = true;
    REQUIRE(run_build(cfg) == kExitOk);

    const json bases = load_json(out / "bases.json");
    CHECK(bases["bases"].size() == 5);  // 4 construction bases + identity
    CHECK(bases["appended_identity"] == true);
    const json report = load_json(out / "report.json");
    CHECK(report["report"]["eps_per_basis"].size() == 4);

    RunConfig acfg;
    acfg.analyze_dir = out;
    acfg.out_dir = fresh_dir("identity_d9_report");
    CHECK(run_analyze(acfg) == kExitOk);
}

TEST_CASE("table sweep emits sorted feasible rows") {
    const fs::path out = fresh_dir("table_4_40");
    RunConfig cfg;
    cfg.d_from = 4;
    cfg.d_to = 40;
    cfg.csv_path = out / "table.csv";
    REQUIRE(run_table(cfg) == kExitOk);

    std::ifstream in(*cfg.csv_path);
    REQUIRE(in.good());
    std::string header;
    std::getline(in, header);
    CHECK(header.find("beta_realized") != std::string::npos);
    std::vector<std::string> rows;
    for (std::string line; std::getline(in, line);)
        if (!line.empty()) rows.push_back(line);
    CHECK(rows.size() >= 10);
    const auto split = [](const std::string& line) {
        std::vector<std::string> cells;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            cells.push_back(line.substr(start, comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        return cells;
    };
    std::size_t last_d = 0;
    bool saw_30 = false, saw_square = false;
    for (const auto& row : rows) {
        const auto cells = split(row);
        REQUIRE(cells.size() == 16);
        const std::size_t d = std::stoul(cells[0]);
        CHECK(d > last_d);
        last_d = d;
        if (d == 30) {
            saw_30 = true;
            CHECK(cells[3] == "TRIM_MINUS");
            CHECK(cells[7] == "7");  // seven bases
        }
        if (d == 9) {
            saw_square = true;
            CHECK(cells[3] == "SQUARE_MUB");
            CHECK(cells[14] == "1");  // flagged as a true MUB family
        }
    }
    CHECK(saw_30);
    CHECK(saw_square);
}

TEST_CASE("table range guard") {
    RunConfig cfg;
    cfg.d_from = 2;
    cfg.d_to = 6000;
    CHECK(run_table(cfg) == kExitIoError);
}

TEST_CASE("export writes a validated design") {
    const fs::path out = fresh_dir("export_d28");
    RunConfig cfg = base_cfg(28, 4, 7);
    cfg.target = Target::real_field;
    cfg.export_path = out / "design.json";
    REQUIRE(run_export(cfg) == kExitOk);
    const Design dsg = load_design(out / "design.json");
    CHECK(dsg.d == 28);
    CHECK(dsg.classes.size() == 7);
}
