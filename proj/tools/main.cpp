#include <algorithm>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "frontier/ccr.hpp"
#include "frontier/errors.hpp"
#include "frontier/io.hpp"
#include "frontier/madea.hpp"
#include "frontier/ranking.hpp"
#include "frontier/seqex.hpp"
#include "frontier/stats.hpp"
#include "frontier/version.hpp"

namespace {

using frontier::Table;
using frontier::TableStyle;
using ordered_json = nlohmann::ordered_json;

struct GlobalOpts {
    std::string data_path;
    std::string config_path;
    std::string out_dir = ".";
    std::string format = "csv";
    double epsilon = 1e-5;
    std::uint64_t seed = 0;
    bool paper_style = false;
};

std::string table_ext(const GlobalOpts& g) { return g.format == "json" ? ".json" : ".csv"; }

std::string out_path(const GlobalOpts& g, const std::string& name) {
    return (std::filesystem::path(g.out_dir) / name).string();
}

TableStyle score_style(const GlobalOpts& g) {
    TableStyle style;
    if (g.paper_style) {
        style.precision = 2;
        style.mark_efficient = true;
    }
    return style;
}

void write_table(const GlobalOpts& g, const std::string& path, const Table& table,
                 const TableStyle& style) {
    if (g.format == "json")
        frontier::write_table_json(path, table, style);
    else
        frontier::write_table_csv(path, table, style);
}

// Every run records its inputs, options, and output hashes; identical
// invocations must produce byte-identical files, so nothing time- or
// machine-dependent belongs here.
struct ManifestBuilder {
    ordered_json doc;

    ManifestBuilder(const std::string& command, const GlobalOpts& g) {
        doc["tool"] = "frontier";
        doc["version"] = frontier::kVersion;
        doc["command"] = command;
        doc["arguments"] = ordered_json::object();
        doc["arguments"]["epsilon"] = g.epsilon;
        doc["arguments"]["seed"] = g.seed;
        doc["arguments"]["format"] = g.format;
        doc["arguments"]["paper_style"] = g.paper_style;
        doc["inputs"] = ordered_json::array();
        doc["outputs"] = ordered_json::array();
    }

    void add_input(const std::string& path) {
        ordered_json j;
        j["path"] = path;
        j["fnv1a64"] = frontier::file_hash_hex(path);
        doc["inputs"].push_back(std::move(j));
    }
    void add_output(const std::string& path) {
        ordered_json j;
        j["path"] = std::filesystem::path(path).filename().string();
        j["fnv1a64"] = frontier::file_hash_hex(path);
        doc["outputs"].push_back(std::move(j));
    }
    void write(const std::string& path) { frontier::write_text(path, doc.dump(2) + "\n"); }
};

frontier::Dataset load_dataset(const GlobalOpts& g, frontier::RolesConfig& cfg_out) {
    cfg_out = frontier::read_config(g.config_path);
    const frontier::RawTable table = frontier::read_csv(g.data_path);
    return frontier::dataset_from(table, cfg_out);
}

int run_ccr(const GlobalOpts& g) {
    frontier::RolesConfig cfg;
    const frontier::Dataset data = load_dataset(g, cfg);
    frontier::SolverConfig solver;
    solver.epsilon = g.epsilon;
    const std::vector<frontier::CcrResult> results = frontier::ccr_all(data, solver);

    Table table;
    table.columns.push_back("score");
    for (const auto& name : data.input_names()) table.columns.push_back("v_" + name);
    for (const auto& name : data.output_names()) table.columns.push_back("u_" + name);
    for (const auto& r : results) {
        table.ids.push_back(r.id);
        std::vector<double> row;
        row.push_back(r.score);
        row.insert(row.end(), r.input_weights.begin(), r.input_weights.end());
        row.insert(row.end(), r.output_weights.begin(), r.output_weights.end());
        table.rows.push_back(std::move(row));
    }
    const std::string scores_path = out_path(g, "ccr_scores" + table_ext(g));
    write_table(g, scores_path, table, score_style(g));

    ManifestBuilder manifest("ccr", g);
    manifest.doc["arguments"]["dataset"] = g.data_path;
    manifest.doc["arguments"]["config"] = g.config_path;
    manifest.add_input(g.data_path);
    manifest.add_input(g.config_path);
    manifest.add_output(scores_path);
    manifest.write(out_path(g, "manifest_ccr.json"));
    return 0;
}

int run_madea(const GlobalOpts& g, const std::string& scenario_flag, int starts) {
    frontier::RolesConfig cfg;
    const frontier::Dataset data = load_dataset(g, cfg);
    const frontier::ActivityStructure structure = frontier::structure_from(cfg, data);

    frontier::ScenarioSpec scenario = scenario_flag == "s2"
                                          ? frontier::ScenarioSpec::scenario2()
                                          : frontier::ScenarioSpec::scenario1();
    scenario.epsilon = g.epsilon;
    frontier::MadeaSearchConfig search;
    search.num_starts = starts;
    search.seed = g.seed;

    const frontier::MadeaRun run = frontier::madea_all(data, structure, scenario, search);

    Table table;
    table.columns = {"total", "teaching", "research", "alpha_teaching"};
    for (std::size_t pos = 0; pos < structure.shared_inputs.size(); ++pos)
        table.columns.push_back("lambda_" + data.input_names()[structure.shared_inputs[pos]]);
    for (std::size_t pos = 0; pos < structure.split_outputs.size(); ++pos) {
        const std::string& var = pos < cfg.split_outputs.size()
                                     ? cfg.split_outputs[pos].share_var
                                     : std::string("beta");
        table.columns.push_back(var + "_" +
                                data.output_names()[structure.split_outputs[pos]]);
    }
    for (const auto& r : run.results) {
        table.ids.push_back(r.id);
        std::vector<double> row{r.total, r.teaching, r.research, r.alpha_teaching};
        row.insert(row.end(), r.lambdas.begin(), r.lambdas.end());
        row.insert(row.end(), r.betas.begin(), r.betas.end());
        table.rows.push_back(std::move(row));
    }
    const std::string scores_path =
        out_path(g, "madea_scores_" + scenario_flag + table_ext(g));
    write_table(g, scores_path, table, score_style(g));

    Table summary;
    summary.columns = {"total", "teaching", "research", "alpha_teaching"};
    summary.ids = {"mean", "std_dev", "max", "min", "efficient_count"};
    const frontier::MadeaSummary& s = run.summary;
    summary.rows = {
        {s.total.mean, s.teaching.mean, s.research.mean, s.alpha_teaching.mean},
        {s.total.std_dev, s.teaching.std_dev, s.research.std_dev, s.alpha_teaching.std_dev},
        {s.total.max, s.teaching.max, s.research.max, s.alpha_teaching.max},
        {s.total.min, s.teaching.min, s.research.min, s.alpha_teaching.min},
        {static_cast<double>(s.efficient_total), static_cast<double>(s.efficient_teaching),
         static_cast<double>(s.efficient_research), 0.0},
    };
    const std::string summary_path =
        out_path(g, "madea_summary_" + scenario_flag + table_ext(g));
    TableStyle summary_style;
    if (g.paper_style) summary_style.precision = 2;
    write_table(g, summary_path, summary, summary_style);

    ManifestBuilder manifest("madea", g);
    manifest.doc["arguments"]["dataset"] = g.data_path;
    manifest.doc["arguments"]["config"] = g.config_path;
    manifest.doc["arguments"]["scenario"] = scenario_flag;
    manifest.doc["arguments"]["starts"] = starts;
    manifest.add_input(g.data_path);
    manifest.add_input(g.config_path);
    manifest.add_output(scores_path);
    manifest.add_output(summary_path);
    manifest.write(out_path(g, "manifest_madea_" + scenario_flag + ".json"));
    return 0;
}

std::string sanitize_token(const std::string& token) {
    std::string out;
    for (char c : token)
        out.push_back((std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-')
                          ? c
                          : '_');
    return out;
}

int run_seqex(const GlobalOpts& g, const std::string& mu_spec, bool no_scale) {
    frontier::RolesConfig cfg;
    const frontier::Dataset data = load_dataset(g, cfg);

    std::vector<std::pair<std::string, std::optional<double>>> runs;  // token, mu
    if (mu_spec == "computed") {
        runs.emplace_back("computed", std::nullopt);
    } else {
        std::size_t start = 0;
        while (start <= mu_spec.size()) {
            const std::size_t comma = mu_spec.find(',', start);
            const std::string piece = mu_spec.substr(
                start, comma == std::string::npos ? std::string::npos : comma - start);
            if (piece.empty()) throw frontier::ConfigError("empty value in --mu list");
            std::size_t consumed = 0;
            double value = 0.0;
            try {
                value = std::stod(piece, &consumed);
            } catch (const std::exception&) {
                throw frontier::ConfigError("cannot parse --mu value '" + piece + "'");
            }
            if (consumed != piece.size())
                throw frontier::ConfigError("cannot parse --mu value '" + piece + "'");
            runs.emplace_back(piece, value);
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
    }

    ManifestBuilder manifest("seqex", g);
    manifest.doc["arguments"]["dataset"] = g.data_path;
    manifest.doc["arguments"]["config"] = g.config_path;
    manifest.doc["arguments"]["mu"] = mu_spec;
    manifest.doc["arguments"]["scale_distances"] = !no_scale;
    manifest.add_input(g.data_path);
    manifest.add_input(g.config_path);
    manifest.doc["runs"] = ordered_json::array();

    for (const auto& [token, mu] : runs) {
        frontier::SeqExConfig config;
        config.mu = mu;
        config.scale_distances = !no_scale;
        config.solver.epsilon = g.epsilon;
        const frontier::SeqExResult result = frontier::seqex_run(data, config);

        Table table;
        table.columns = {"score"};
        for (const auto& e : result.final_scores) {
            table.ids.push_back(e.id);
            table.rows.push_back({e.score});
        }
        const std::string tok = sanitize_token(token);
        const std::string scores_path = out_path(g, "seqex_scores_mu" + tok + table_ext(g));
        const std::string trace_path = out_path(g, "seqex_trace_mu" + tok + ".json");
        write_table(g, scores_path, table, score_style(g));
        frontier::write_text(trace_path, frontier::seqex_trace_json(result, config));

        ordered_json run_info;
        run_info["mu"] = mu ? ordered_json(*mu) : ordered_json("computed");
        if (!mu) {
            // Provenance for the computed index: the dispersion behind each
            // round's value.
            run_info["rounds"] = ordered_json::array();
            for (std::size_t r = 0; r < result.trace.size(); ++r) {
                ordered_json rj;
                rj["round"] = r + 1;
                rj["mu"] = result.trace[r].mu.value;
                rj["mean_distance"] = result.trace[r].mean_distance;
                rj["max_distance"] = result.trace[r].max_distance;
                run_info["rounds"].push_back(std::move(rj));
            }
        }
        run_info["scores"] = std::filesystem::path(scores_path).filename().string();
        run_info["trace"] = std::filesystem::path(trace_path).filename().string();
        manifest.doc["runs"].push_back(std::move(run_info));
        manifest.add_output(scores_path);
        manifest.add_output(trace_path);
    }
    manifest.write(out_path(g, "manifest_seqex.json"));
    return 0;
}

int run_compare(const GlobalOpts& g, const std::vector<std::string>& files) {
    if (files.size() < 2)
        throw frontier::ConfigError("compare needs at least two score tables");
    std::vector<std::vector<frontier::ScoreEntry>> tables;
    std::vector<std::string> labels;
    for (const auto& f : files) {
        tables.push_back(frontier::read_score_table(f));
        std::string label = std::filesystem::path(f).stem().string();
        while (std::find(labels.begin(), labels.end(), label) != labels.end()) label += "_dup";
        labels.push_back(label);
    }

    Table matrix;
    matrix.columns = labels;
    matrix.ids = labels;
    for (std::size_t i = 0; i < tables.size(); ++i) {
        std::vector<double> row(tables.size(), 0.0);
        for (std::size_t j = 0; j < tables.size(); ++j)
            row[j] = frontier::kendall_distance(tables[i], tables[j]);
        matrix.rows.push_back(std::move(row));
    }
    const std::string matrix_path = out_path(g, "compare_matrix" + table_ext(g));
    TableStyle style;  // distances are plain numbers, never marked
    write_table(g, matrix_path, matrix, style);

    ManifestBuilder manifest("compare", g);
    manifest.doc["arguments"]["tables"] = files;
    for (const auto& f : files) manifest.add_input(f);
    manifest.add_output(matrix_path);
    manifest.write(out_path(g, "manifest_compare.json"));
    return 0;
}

int run_report(const GlobalOpts& g) {
    frontier::RolesConfig cfg;
    const frontier::Dataset data = load_dataset(g, cfg);

    std::vector<std::string> vars = data.input_names();
    vars.insert(vars.end(), data.output_names().begin(), data.output_names().end());

    Table stats;
    stats.columns = {"mean", "std_dev", "max", "min"};
    const std::vector<frontier::VariableStats> per_var = frontier::dataset_stats(data);
    for (std::size_t i = 0; i < vars.size(); ++i) {
        stats.ids.push_back(vars[i]);
        stats.rows.push_back(
            {per_var[i].mean, per_var[i].std_dev, per_var[i].max, per_var[i].min});
    }
    const std::string stats_path = out_path(g, "report_stats" + table_ext(g));
    write_table(g, stats_path, stats, TableStyle{});

    Table corr;
    corr.columns = vars;
    corr.ids = vars;
    corr.rows = frontier::correlation_matrix(data);
    const std::string corr_path = out_path(g, "report_correlations" + table_ext(g));
    write_table(g, corr_path, corr, TableStyle{});

    ManifestBuilder manifest("report", g);
    manifest.doc["arguments"]["dataset"] = g.data_path;
    manifest.doc["arguments"]["config"] = g.config_path;
    manifest.add_input(g.data_path);
    manifest.add_input(g.config_path);
    manifest.add_output(stats_path);
    manifest.add_output(corr_path);
    manifest.write(out_path(g, "manifest_report.json"));
    return 0;
}

void add_common(CLI::App* sub, GlobalOpts& g, bool needs_data) {
    if (needs_data) {
        sub->add_option("--data", g.data_path, "dataset CSV path")->required();
        sub->add_option("--config", g.config_path, "run configuration JSON path")->required();
    }
    sub->add_option("--out", g.out_dir, "output directory (created if absent)");
    sub->add_option("--format", g.format, "table format")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--epsilon", g.epsilon, "weight floor epsilon");
    sub->add_option("--seed", g.seed, "random seed for seeded searches");
    sub->add_flag("--paper-style", g.paper_style,
                  "2-decimal score tables with efficient units marked");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"frontier: efficiency analysis toolkit"};
    app.require_subcommand(1);
    GlobalOpts g;

    std::function<int()> action;

    CLI::App* ccr = app.add_subcommand("ccr", "constant-returns radial efficiency scores");
    add_common(ccr, g, true);
    ccr->callback([&] { action = [&] { return run_ccr(g); }; });

    CLI::App* madea = app.add_subcommand("madea", "multi-activity efficiency scores");
    add_common(madea, g, true);
    std::string scenario = "s1";
    int starts = 64;
    madea->add_option("--scenario", scenario, "scenario preset")
        ->required()
        ->check(CLI::IsMember({"s1", "s2"}));
    madea->add_option("--starts", starts, "multistart count")->check(CLI::PositiveNumber);
    madea->callback([&] { action = [&] { return run_madea(g, scenario, starts); }; });

    CLI::App* seqex = app.add_subcommand("seqex", "sequential exclusion scores");
    add_common(seqex, g, true);
    std::string mu_spec;
    bool no_scale = false;
    seqex->add_option("--mu", mu_spec, "comma-separated mu values or 'computed'")->required();
    seqex->add_flag("--no-scale", no_scale, "skip per-dimension scaling of distances");
    seqex->callback([&] { action = [&] { return run_seqex(g, mu_spec, no_scale); }; });

    CLI::App* compare = app.add_subcommand("compare", "Kendall distance matrix of rankings");
    add_common(compare, g, false);
    std::vector<std::string> tables;
    compare->add_option("tables", tables, "score table files")->required();
    compare->callback([&] { action = [&] { return run_compare(g, tables); }; });

    CLI::App* report = app.add_subcommand("report", "descriptive statistics and correlations");
    add_common(report, g, true);
    report->callback([&] { action = [&] { return run_report(g); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        std::filesystem::create_directories(g.out_dir);
        return action();
    } catch (const frontier::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const frontier::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
