#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "frontier/dataset.hpp"
#include "frontier/madea.hpp"
#include "frontier/ranking.hpp"
#include "frontier/seqex.hpp"

namespace frontier {

// Parsed run configuration JSON: column roles plus, when present, the
// two-activity wiring by variable name.
struct RolesConfig {
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    bool has_activities = false;
    std::vector<std::string> shared_inputs;
    std::vector<std::string> teaching_outputs;
    std::vector<std::string> research_outputs;
    struct SplitSpec {
        std::string name;
        std::string share_var;  // label for the split share in reports
    };
    std::vector<SplitSpec> split_outputs;
    std::optional<std::array<double, 2>> lambda_bounds;
    std::optional<std::array<double, 2>> beta_bounds;
};

// Strict dataset CSV: header `id,<var1>,...`, decimal point, no quoting.
// Throws ConfigError when the file cannot be opened, ParseError on content.
RawTable read_csv(const std::string& path);

// Writes a raw table with full-precision values (round-trips through read_csv).
void write_raw_csv(const std::string& path, const RawTable& table);

RolesConfig read_config(const std::string& path);

Dataset dataset_from(const RawTable& table, const RolesConfig& config);

// Resolves the config's activity wiring against the dataset's column order.
ActivityStructure structure_from(const RolesConfig& config, const Dataset& data);

// Value table keyed by an id column; the backbone of every tabular artifact.
struct Table {
    std::vector<std::string> columns;  // value column names, id excluded
    std::vector<std::string> ids;
    std::vector<std::vector<double>> rows;
};

struct TableStyle {
    int precision = 6;
    // Mark cells >= 1 - 1e-6 in score-like columns with a trailing '*'
    // (paper-style reports emphasize efficient units).
    bool mark_efficient = false;
};

void write_table_csv(const std::string& path, const Table& table, const TableStyle& style = {});
void write_table_json(const std::string& path, const Table& table, const TableStyle& style = {});

// Reads a score list back from a table written by this tool: id column plus
// the first value column. Format chosen by extension (.json, otherwise CSV).
std::vector<ScoreEntry> read_score_table(const std::string& path);

std::string seqex_trace_json(const SeqExResult& result, const SeqExConfig& config);

// FNV-1a 64-bit content hash, for run manifests.
std::uint64_t fnv1a64(const std::string& bytes);
std::string file_hash_hex(const std::string& path);  // ConfigError when unreadable

void write_text(const std::string& path, const std::string& content);
std::string read_text(const std::string& path);  // ConfigError when unreadable

std::string format_fixed(double value, int decimals);

}  // namespace frontier
