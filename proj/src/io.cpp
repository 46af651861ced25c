#include "frontier/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "frontier/errors.hpp"

namespace frontier {

namespace {

using ordered_json = nlohmann::ordered_json;

double parse_number(const std::string& field, std::size_t line_no) {
    if (field.empty())
        throw ParseError("empty numeric field on line " + std::to_string(line_no));
    std::size_t consumed = 0;
    double value = 0.0;
    try {
        value = std::stod(field, &consumed);
    } catch (const std::exception&) {
        throw ParseError("cannot parse '" + field + "' on line " + std::to_string(line_no));
    }
    if (consumed != field.size())
        throw ParseError("trailing characters in '" + field + "' on line " +
                         std::to_string(line_no));
    return value;
}

std::vector<std::string> split_csv_line(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

bool score_like_column(const std::string& name) {
    return name == "score" || name == "total" || name == "teaching" || name == "research";
}

std::string render_cell(double value, const std::string& column, const TableStyle& style) {
    std::string text = format_fixed(value, style.precision);
    if (style.mark_efficient && score_like_column(column) && value >= 1.0 - 1e-6)
        text += "*";
    return text;
}

}  // namespace

std::string format_fixed(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
    return buf;
}

RawTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open dataset file " + path);
    RawTable table;
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw ParseError("empty file " + path);
    ++line_no;
    std::vector<std::string> header = split_csv_line(line);
    if (header.empty() || header[0] != "id")
        throw ParseError("header must start with 'id' in " + path);
    if (header.size() < 2) throw ParseError("no variable columns in " + path);
    table.columns.assign(header.begin() + 1, header.end());
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != header.size())
            throw ParseError("line " + std::to_string(line_no) + " has " +
                             std::to_string(fields.size()) + " fields, expected " +
                             std::to_string(header.size()));
        if (fields[0].empty())
            throw ParseError("missing id on line " + std::to_string(line_no));
        table.ids.push_back(fields[0]);
        std::vector<double> row;
        row.reserve(fields.size() - 1);
        for (std::size_t i = 1; i < fields.size(); ++i)
            row.push_back(parse_number(fields[i], line_no));
        table.rows.push_back(std::move(row));
    }
    return table;
}

void write_raw_csv(const std::string& path, const RawTable& table) {
    std::ostringstream out;
    out << "id";
    for (const auto& c : table.columns) out << "," << c;
    out << "\n";
    char buf[64];
    for (std::size_t r = 0; r < table.ids.size(); ++r) {
        out << table.ids[r];
        for (double v : table.rows[r]) {
            std::snprintf(buf, sizeof(buf), "%.17g", v);
            out << "," << buf;
        }
        out << "\n";
    }
    write_text(path, out.str());
}

RolesConfig read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    ordered_json doc;
    try {
        doc = ordered_json::parse(in);
    } catch (const std::exception& e) {
        throw ConfigError("invalid JSON in " + path + ": " + e.what());
    }

    RolesConfig cfg;
    try {
        if (!doc.contains("inputs") || !doc.contains("outputs"))
            throw ConfigError("config must declare 'inputs' and 'outputs'");
        cfg.inputs = doc.at("inputs").get<std::vector<std::string>>();
        cfg.outputs = doc.at("outputs").get<std::vector<std::string>>();

        if (doc.contains("activities")) {
            cfg.has_activities = true;
            const auto& acts = doc.at("activities");
            if (!acts.contains("teaching") || !acts.contains("research"))
                throw ConfigError("activities must declare 'teaching' and 'research'");
            cfg.teaching_outputs =
                acts.at("teaching").at("outputs").get<std::vector<std::string>>();
            cfg.research_outputs =
                acts.at("research").at("outputs").get<std::vector<std::string>>();
            if (doc.contains("shared_inputs"))
                cfg.shared_inputs = doc.at("shared_inputs").get<std::vector<std::string>>();
            else
                cfg.shared_inputs = cfg.inputs;
            if (doc.contains("split_outputs")) {
                for (const auto& item : doc.at("split_outputs")) {
                    RolesConfig::SplitSpec spec;
                    spec.name = item.at("name").get<std::string>();
                    spec.share_var = item.value("teaching_share_var", "beta");
                    cfg.split_outputs.push_back(std::move(spec));
                }
            }
            if (doc.contains("bounds")) {
                const auto& b = doc.at("bounds");
                if (b.contains("lambda")) {
                    auto v = b.at("lambda").get<std::vector<double>>();
                    if (v.size() != 2) throw ConfigError("bounds.lambda must be [lo, hi]");
                    cfg.lambda_bounds = {{v[0], v[1]}};
                }
                if (b.contains("beta")) {
                    auto v = b.at("beta").get<std::vector<double>>();
                    if (v.size() != 2) throw ConfigError("bounds.beta must be [lo, hi]");
                    cfg.beta_bounds = {{v[0], v[1]}};
                }
            }
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError("malformed config " + path + ": " + e.what());
    }
    return cfg;
}

Dataset dataset_from(const RawTable& table, const RolesConfig& config) {
    ColumnRoles roles;
    roles.inputs = config.inputs;
    roles.outputs = config.outputs;
    return validate_dataset(table, roles);
}

ActivityStructure structure_from(const RolesConfig& config, const Dataset& data) {
    if (!config.has_activities)
        throw ConfigError("config declares no activities block");
    auto index_in = [](const std::vector<std::string>& names, const std::string& name,
                       const char* what) {
        const auto it = std::find(names.begin(), names.end(), name);
        if (it == names.end())
            throw ConfigError("unknown " + std::string(what) + " variable '" + name + "'");
        return static_cast<std::size_t>(it - names.begin());
    };

    ActivityStructure st;
    for (const auto& name : config.shared_inputs)
        st.shared_inputs.push_back(index_in(data.input_names(), name, "input"));
    for (const auto& name : config.teaching_outputs)
        st.teaching_outputs.push_back(index_in(data.output_names(), name, "output"));
    for (const auto& name : config.research_outputs)
        st.research_outputs.push_back(index_in(data.output_names(), name, "output"));
    for (const auto& spec : config.split_outputs)
        st.split_outputs.push_back(index_in(data.output_names(), spec.name, "output"));
    st.lambda_bounds = config.lambda_bounds;
    st.beta_bounds = config.beta_bounds;
    st.check(data.num_inputs(), data.num_outputs());
    return st;
}

void write_table_csv(const std::string& path, const Table& table, const TableStyle& style) {
    if (table.ids.size() != table.rows.size())
        throw DimensionMismatch("table ids and rows disagree");
    std::ostringstream out;
    out << "id";
    for (const auto& c : table.columns) out << "," << c;
    out << "\n";
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        if (table.rows[r].size() != table.columns.size())
            throw DimensionMismatch("table row length does not match columns");
        out << table.ids[r];
        for (std::size_t c = 0; c < table.columns.size(); ++c)
            out << "," << render_cell(table.rows[r][c], table.columns[c], style);
        out << "\n";
    }
    write_text(path, out.str());
}

void write_table_json(const std::string& path, const Table& table, const TableStyle& style) {
    if (table.ids.size() != table.rows.size())
        throw DimensionMismatch("table ids and rows disagree");
    ordered_json doc;
    doc["columns"] = ordered_json::array();
    doc["columns"].push_back("id");
    for (const auto& c : table.columns) doc["columns"].push_back(c);
    doc["rows"] = ordered_json::array();
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        if (table.rows[r].size() != table.columns.size())
            throw DimensionMismatch("table row length does not match columns");
        ordered_json row;
        row["id"] = table.ids[r];
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            const std::string cell = render_cell(table.rows[r][c], table.columns[c], style);
            if (cell.back() == '*')
                row[table.columns[c]] = cell;  // marked cells stay textual
            else
                row[table.columns[c]] = ordered_json::parse(cell);
        }
        doc["rows"].push_back(std::move(row));
    }
    write_text(path, doc.dump(2) + "\n");
}

std::vector<ScoreEntry> read_score_table(const std::string& path) {
    std::vector<ScoreEntry> out;
    const bool json_file =
        path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
    if (json_file) {
        ordered_json doc;
        try {
            doc = ordered_json::parse(read_text(path));
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            throw ParseError("invalid JSON in " + path + ": " + e.what());
        }
        if (!doc.contains("columns") || !doc.contains("rows") || doc["columns"].size() < 2)
            throw ParseError("score table " + path + " lacks a value column");
        const std::string value_col = doc["columns"][1].get<std::string>();
        for (const auto& row : doc.at("rows")) {
            if (!row.contains("id") || !row.contains(value_col) ||
                !row.at(value_col).is_number())
                throw ParseError("malformed score row in " + path);
            out.push_back({row.at("id").get<std::string>(), row.at(value_col).get<double>()});
        }
        return out;
    }
    const RawTable table = read_csv(path);
    if (table.columns.empty()) throw ParseError("score table " + path + " lacks a value column");
    for (std::size_t r = 0; r < table.ids.size(); ++r)
        out.push_back({table.ids[r], table.rows[r][0]});
    return out;
}

std::string seqex_trace_json(const SeqExResult& result, const SeqExConfig& config) {
    ordered_json doc;
    doc["mu"] = config.mu ? ordered_json(*config.mu) : ordered_json("computed");
    doc["scale_distances"] = config.scale_distances;
    doc["rounds"] = ordered_json::array();
    for (std::size_t r = 0; r < result.trace.size(); ++r) {
        const SeqExRound& round = result.trace[r];
        ordered_json j;
        j["round"] = r + 1;
        j["active"] = round.active_ids;
        j["barycenter"] = round.barycenter;
        j["mu"] = round.mu.value;
        j["mu_source"] =
            round.mu.source == HeterogeneityIndex::Source::Supplied ? "supplied" : "computed";
        if (round.mu.source == HeterogeneityIndex::Source::Computed) {
            j["mean_distance"] = round.mean_distance;
            j["max_distance"] = round.max_distance;
        }
        j["escalated"] = round.escalated;
        j["efficient"] = round.efficient_ids;
        j["generators"] = ordered_json::array();
        for (const auto& g : round.generators) {
            ordered_json gj;
            gj["id"] = g.id;
            gj["inputs"] = g.inputs;
            gj["outputs"] = g.outputs;
            j["generators"].push_back(std::move(gj));
        }
        j["rescored"] = ordered_json::array();
        for (const auto& e : round.rescored) {
            ordered_json ej;
            ej["id"] = e.id;
            ej["score"] = e.score;
            j["rescored"].push_back(std::move(ej));
        }
        j["excluded"] = round.excluded_ids;
        doc["rounds"].push_back(std::move(j));
    }
    doc["final_scores"] = ordered_json::array();
    for (const auto& e : result.final_scores) {
        ordered_json ej;
        ej["id"] = e.id;
        ej["score"] = e.score;
        doc["final_scores"].push_back(std::move(ej));
    }
    return doc.dump(2) + "\n";
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string file_hash_hex(const std::string& path) {
    const std::uint64_t h = fnv1a64(read_text(path));
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path);
    out << content;
    if (!out) throw ConfigError("write failed for " + path);
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace frontier
