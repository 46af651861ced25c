#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "frontier/ccr.hpp"
#include "frontier/io.hpp"
#include "frontier/ranking.hpp"
#include "helpers.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using testsupport::CmdResult;
using testsupport::run_cmd;

namespace {

const std::string kData =
    "id,staff,budget,grads,articles,projects\n"
    "U1,2,4,60,30,10\n"
    "U2,3,3,50,40,8\n"
    "U3,4,6,40,20,12\n"
    "U4,5,8,30,10,5\n";

// No "bounds" key: the scenario presets keep their own boxes.
const std::string kConfig = R"({
  "inputs": ["staff", "budget"],
  "outputs": ["grads", "articles", "projects"],
  "activities": {
    "teaching": {"outputs": ["grads"]},
    "research": {"outputs": ["articles"]}
  },
  "shared_inputs": ["staff", "budget"],
  "split_outputs": [{"name": "projects", "teaching_share_var": "beta"}]
})";

struct Workspace {
    fs::path dir;
    fs::path data;
    fs::path config;
    fs::path out;

    Workspace() {
        dir = testsupport::make_temp_dir("cli");
        data = dir / "universities.csv";
        config = dir / "config.json";
        out = dir / "out";
        testsupport::write_file(data, kData);
        testsupport::write_file(config, kConfig);
    }
    ~Workspace() { fs::remove_all(dir); }

    std::string base_cmd(const std::string& sub) const {
        return testsupport::cli_path() + " " + sub + " --data " + data.string() +
               " --config " + config.string() + " --out " + out.string();
    }
};

// Minimal CSV split for output produced by this tool (no quoting, no commas
// inside fields).
std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(std::move(cells));
    }
    return rows;
}

double cell_value(std::string cell) {
    if (!cell.empty() && cell.back() == '*') cell.pop_back();
    return std::stod(cell);
}

}  // namespace

TEST_CASE("cli binary is wired into the test environment") {
    REQUIRE_MESSAGE(!testsupport::cli_path().empty(),
                    "FRONTIER_CLI must point at the frontier binary (ctest sets it)");
    const CmdResult help = run_cmd(testsupport::cli_path() + " --help");
    CHECK(help.exit_code == 0);
    CHECK(help.out.find("ccr") != std::string::npos);
}

TEST_CASE("ccr command writes scores that match the library") {
    Workspace ws;
    const CmdResult r = run_cmd(ws.base_cmd("ccr"));
    REQUIRE_MESSAGE(r.exit_code == 0, r.err);

    const auto rows = parse_csv(testsupport::slurp(ws.out / "ccr_scores.csv"));
    REQUIRE(rows.size() == 5);  // header + 4 units
    CHECK(rows[0][0] == "id");
    CHECK(rows[0][1] == "score");

    const frontier::RawTable raw = frontier::read_csv(ws.data.string());
    const frontier::RolesConfig cfg = frontier::read_config(ws.config.string());
    const frontier::Dataset data = frontier::dataset_from(raw, cfg);
    const auto expected = frontier::ccr_all(data);
    for (std::size_t k = 0; k < expected.size(); ++k) {
        CHECK(rows[k + 1][0] == expected[k].id);
        CHECK(cell_value(rows[k + 1][1]) ==
              doctest::Approx(expected[k].score).epsilon(5e-7));
    }
}

TEST_CASE("manifest records inputs, hashes and echoed arguments") {
    Workspace ws;
    REQUIRE(run_cmd(ws.base_cmd("ccr") + " --epsilon 0.0001 --seed 7").exit_code == 0);

    const ordered_json doc =
        ordered_json::parse(testsupport::slurp(ws.out / "manifest_ccr.json"));
    CHECK(doc.at("command") == "ccr");
    CHECK(doc.at("arguments").at("epsilon") == doctest::Approx(0.0001));
    CHECK(doc.at("arguments").at("seed") == 7);
    REQUIRE(doc.at("inputs").size() == 2);
    for (const auto& item : doc.at("inputs")) {
        CHECK(item.at("fnv1a64").get<std::string>().size() == 16);
        CHECK(fs::exists(item.at("path").get<std::string>()));
    }
    REQUIRE(doc.at("outputs").size() >= 1);
    // Output hashes certify the written artifacts byte for byte.
    for (const auto& item : doc.at("outputs")) {
        const std::string written =
            frontier::file_hash_hex((ws.out / item.at("path").get<std::string>()).string());
        CHECK(written == item.at("fnv1a64").get<std::string>());
    }
}

TEST_CASE("missing and malformed configuration exits with code 2") {
    Workspace ws;
    SUBCASE("config file absent") {
        const std::string cmd = testsupport::cli_path() + " ccr --data " + ws.data.string() +
                                " --config " + (ws.dir / "nope.json").string() + " --out " +
                                ws.out.string();
        const CmdResult r = run_cmd(cmd);
        CHECK(r.exit_code == 2);
        CHECK(r.err.find("nope.json") != std::string::npos);
    }
    SUBCASE("data file absent") {
        const std::string cmd = testsupport::cli_path() + " ccr --data " +
                                (ws.dir / "ghost.csv").string() + " --config " +
                                ws.config.string() + " --out " + ws.out.string();
        CHECK(run_cmd(cmd).exit_code == 2);
    }
    SUBCASE("config is not valid JSON") {
        testsupport::write_file(ws.config, "{ not json");
        CHECK(run_cmd(ws.base_cmd("ccr")).exit_code == 2);
    }
    SUBCASE("config wires an unknown column") {
        testsupport::write_file(ws.config,
                                R"({"inputs": ["staff", "oops"], "outputs": ["grads"]})");
        CHECK(run_cmd(ws.base_cmd("ccr")).exit_code == 2);
    }
    SUBCASE("unknown flag is a usage error") {
        CHECK(run_cmd(ws.base_cmd("ccr") + " --frobnicate").exit_code == 2);
    }
    SUBCASE("madea without a scenario is a usage error") {
        CHECK(run_cmd(ws.base_cmd("madea")).exit_code == 2);
    }
}

TEST_CASE("invalid data values exit with code 1") {
    Workspace ws;
    testsupport::write_file(ws.data,
                            "id,staff,budget,grads,articles,projects\n"
                            "U1,0,4,60,30,10\n");
    const CmdResult r = run_cmd(ws.base_cmd("ccr"));
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("staff") != std::string::npos);
}

TEST_CASE("madea scenario one fixes priorities at one half") {
    Workspace ws;
    const CmdResult r = run_cmd(ws.base_cmd("madea") + " --scenario s1 --starts 8");
    REQUIRE_MESSAGE(r.exit_code == 0, r.err);

    const auto rows = parse_csv(testsupport::slurp(ws.out / "madea_scores_s1.csv"));
    REQUIRE(rows.size() == 5);
    CHECK(rows[0] == std::vector<std::string>{"id", "total", "teaching", "research",
                                              "alpha_teaching", "lambda_staff",
                                              "lambda_budget", "beta_projects"});
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i][4] == "0.500000");
        const double total = cell_value(rows[i][1]);
        const double teaching = cell_value(rows[i][2]);
        const double research = cell_value(rows[i][3]);
        CHECK(total == doctest::Approx(0.5 * teaching + 0.5 * research).epsilon(5e-6));
    }

    const auto summary = parse_csv(testsupport::slurp(ws.out / "madea_summary_s1.csv"));
    REQUIRE(summary.size() == 6);  // header + mean/std_dev/max/min/efficient_count
    CHECK(summary[1][0] == "mean");
    CHECK(summary[5][0] == "efficient_count");

    const ordered_json doc =
        ordered_json::parse(testsupport::slurp(ws.out / "manifest_madea_s1.json"));
    CHECK(doc.at("arguments").at("scenario") == "s1");
    CHECK(doc.at("arguments").at("starts") == 8);
}

TEST_CASE("madea scenario two keeps allocations inside the narrow box") {
    Workspace ws;
    const CmdResult r = run_cmd(ws.base_cmd("madea") + " --scenario s2 --starts 8");
    REQUIRE_MESSAGE(r.exit_code == 0, r.err);

    const auto rows = parse_csv(testsupport::slurp(ws.out / "madea_scores_s2.csv"));
    REQUIRE(rows.size() == 5);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        for (std::size_t c = 5; c <= 7; ++c) {  // lambda_staff, lambda_budget, beta_projects
            const double v = cell_value(rows[i][c]);
            CHECK(v >= 0.30 - 1e-9);
            CHECK(v <= 0.90 + 1e-9);
        }
        const double alpha = cell_value(rows[i][4]);
        CHECK(alpha >= 0.30 - 1e-9);
        CHECK(alpha <= 0.90 + 1e-9);
    }
}

TEST_CASE("seqex runs one table and trace per mu, plus computed provenance") {
    Workspace ws;
    const CmdResult r = run_cmd(ws.base_cmd("seqex") + " --mu 0.2,0.5,0.8");
    REQUIRE_MESSAGE(r.exit_code == 0, r.err);
    for (const std::string tok : {"0.2", "0.5", "0.8"}) {
        CHECK(fs::exists(ws.out / ("seqex_scores_mu" + tok + ".csv")));
        const ordered_json trace = ordered_json::parse(
            testsupport::slurp(ws.out / ("seqex_trace_mu" + tok + ".json")));
        CHECK(trace.at("mu") == doctest::Approx(std::stod(tok)));
        CHECK(trace.at("rounds").size() <= 4);
        CHECK(trace.at("final_scores").size() == 4);
    }
    const ordered_json manifest =
        ordered_json::parse(testsupport::slurp(ws.out / "manifest_seqex.json"));
    CHECK(manifest.at("arguments").at("mu") == "0.2,0.5,0.8");
    CHECK(manifest.at("runs").size() == 3);

    const CmdResult rc = run_cmd(ws.base_cmd("seqex") + " --mu computed");
    REQUIRE_MESSAGE(rc.exit_code == 0, rc.err);
    const ordered_json m2 =
        ordered_json::parse(testsupport::slurp(ws.out / "manifest_seqex.json"));
    REQUIRE(m2.at("runs").size() == 1);
    const auto& run0 = m2.at("runs")[0];
    CHECK(run0.at("mu") == "computed");
    REQUIRE(run0.contains("rounds"));
    for (const auto& rd : run0.at("rounds")) {
        CHECK(rd.contains("mu"));
        CHECK(rd.contains("mean_distance"));
        CHECK(rd.contains("max_distance"));
    }

    SUBCASE("mixing numbers with the computed keyword is rejected") {
        CHECK(run_cmd(ws.base_cmd("seqex") + " --mu 0.5,computed").exit_code == 2);
    }
    SUBCASE("out-of-range mu is rejected") {
        CHECK(run_cmd(ws.base_cmd("seqex") + " --mu 1.75").exit_code == 2);
    }
}

TEST_CASE("compare builds the full distance matrix") {
    Workspace ws;
    fs::create_directories(ws.out);
    const fs::path t1 = ws.dir / "straight.csv";
    const fs::path t2 = ws.dir / "reversed.csv";
    testsupport::write_file(t1, "id,score\nA,4\nB,3\nC,2\nD,1\n");
    testsupport::write_file(t2, "id,score\nA,1\nB,2\nC,3\nD,4\n");

    const std::string cmd = testsupport::cli_path() + " compare " + t1.string() + " " +
                            t2.string() + " --out " + ws.out.string();
    const CmdResult r = run_cmd(cmd);
    REQUIRE_MESSAGE(r.exit_code == 0, r.err);

    const auto rows = parse_csv(testsupport::slurp(ws.out / "compare_matrix.csv"));
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == std::vector<std::string>{"id", "straight", "reversed"});
    CHECK(rows[1][0] == "straight");
    CHECK(cell_value(rows[1][1]) == 0.0);   // self distance
    CHECK(cell_value(rows[1][2]) == 1.0);   // full reversal
    CHECK(cell_value(rows[2][1]) == 1.0);   // symmetric
    CHECK(cell_value(rows[2][2]) == 0.0);

    SUBCASE("fewer than two tables is a usage error") {
        CHECK(run_cmd(testsupport::cli_path() + " compare " + t1.string() + " --out " +
                      ws.out.string())
                  .exit_code == 2);
    }
}

TEST_CASE("report reproduces the descriptive statistics") {
    Workspace ws;
    const CmdResult r = run_cmd(ws.base_cmd("report"));
    REQUIRE_MESSAGE(r.exit_code == 0, r.err);

    const auto stats = parse_csv(testsupport::slurp(ws.out / "report_stats.csv"));
    REQUIRE(stats.size() == 6);  // header + 5 variables
    CHECK(stats[0] == std::vector<std::string>{"id", "mean", "std_dev", "max", "min"});
    CHECK(stats[1][0] == "staff");
    CHECK(stats[1][1] == "3.500000");  // (2+3+4+5)/4
    CHECK(stats[1][3] == "5.000000");
    CHECK(stats[1][4] == "2.000000");

    const auto corr = parse_csv(testsupport::slurp(ws.out / "report_correlations.csv"));
    REQUIRE(corr.size() == 6);
    for (std::size_t i = 1; i < corr.size(); ++i)
        CHECK(cell_value(corr[i][i]) == doctest::Approx(1.0));
}

TEST_CASE("paper style prints two decimals and marks efficient units") {
    Workspace ws;
    const CmdResult r = run_cmd(ws.base_cmd("ccr") + " --paper-style");
    REQUIRE_MESSAGE(r.exit_code == 0, r.err);
    const std::string text = testsupport::slurp(ws.out / "ccr_scores.csv");
    CHECK(text.find("1.00*") != std::string::npos);  // at least one efficient unit
    // Two-decimal cells: no six-decimal run of zeros anywhere.
    CHECK(text.find("1.000000") == std::string::npos);
}

TEST_CASE("json format round-trips through the reader") {
    Workspace ws;
    REQUIRE(run_cmd(ws.base_cmd("ccr") + " --format json").exit_code == 0);
    REQUIRE(run_cmd(ws.base_cmd("ccr")).exit_code == 0);

    const auto from_json =
        frontier::read_score_table((ws.out / "ccr_scores.json").string());
    const auto from_csv = frontier::read_score_table((ws.out / "ccr_scores.csv").string());
    REQUIRE(from_json.size() == 4);
    REQUIRE(from_csv.size() == 4);
    for (std::size_t k = 0; k < from_json.size(); ++k) {
        CHECK(from_json[k].id == from_csv[k].id);
        CHECK(from_json[k].score == doctest::Approx(from_csv[k].score).epsilon(1e-12));
    }
    // Both carry the same ordering information.
    CHECK(frontier::kendall_distance(from_json, from_csv) == 0.0);
}

TEST_CASE("reruns with identical inputs produce identical bytes") {
    Workspace ws;
    const fs::path out2 = ws.dir / "out2";
    REQUIRE(run_cmd(ws.base_cmd("madea") + " --scenario s2 --starts 8").exit_code == 0);
    REQUIRE(run_cmd(testsupport::cli_path() + " madea --scenario s2 --starts 8 --data " +
                    ws.data.string() + " --config " + ws.config.string() + " --out " +
                    out2.string())
                .exit_code == 0);
    for (const std::string name :
         {"madea_scores_s2.csv", "madea_summary_s2.csv", "manifest_madea_s2.json"}) {
        CHECK(testsupport::slurp(ws.out / name) == testsupport::slurp(out2 / name));
    }
}
