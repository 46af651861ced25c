#include "frontier/dataset.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "frontier/errors.hpp"

namespace frontier {

namespace {

std::string describe_cell(const std::string& id, const std::string& column, double value) {
    std::ostringstream os;
    os << "row '" << id << "', column '" << column << "' (value " << value << ")";
    return os.str();
}

}  // namespace

Dataset::Dataset(std::vector<std::string> input_names, std::vector<std::string> output_names,
                 std::vector<DmuRecord> records)
    : input_names_(std::move(input_names)),
      output_names_(std::move(output_names)),
      records_(std::move(records)) {
    if (records_.empty()) {
        throw EmptyDataset("dataset has no records");
    }
    if (input_names_.empty() || output_names_.empty()) {
        throw RaggedRow("dataset needs at least one input and one output variable");
    }
    std::unordered_set<std::string> seen;
    for (const DmuRecord& rec : records_) {
        if (!seen.insert(rec.id).second) {
            throw DuplicateId("duplicate DMU id '" + rec.id + "'");
        }
        if (rec.inputs.size() != input_names_.size() || rec.outputs.size() != output_names_.size()) {
            throw RaggedRow("row '" + rec.id + "' does not match the declared variable counts");
        }
        for (std::size_t j = 0; j < rec.inputs.size(); ++j) {
            if (!(rec.inputs[j] > 0.0)) {
                throw NonPositiveInput("input must be strictly positive at " +
                                       describe_cell(rec.id, input_names_[j], rec.inputs[j]));
            }
        }
        bool any_positive = false;
        for (std::size_t i = 0; i < rec.outputs.size(); ++i) {
            if (rec.outputs[i] < 0.0) {
                throw NegativeOutput("output must be nonnegative at " +
                                     describe_cell(rec.id, output_names_[i], rec.outputs[i]));
            }
            any_positive = any_positive || rec.outputs[i] > 0.0;
        }
        if (!any_positive) {
            throw AllZeroOutputs("row '" + rec.id + "' has no positive output");
        }
    }
}

std::size_t Dataset::index_of(const std::string& id) const {
    for (std::size_t k = 0; k < records_.size(); ++k) {
        if (records_[k].id == id) return k;
    }
    throw IdSetMismatch("unknown DMU id '" + id + "'");
}

std::vector<double> Dataset::point(std::size_t k) const {
    const DmuRecord& rec = records_.at(k);
    std::vector<double> p;
    p.reserve(rec.inputs.size() + rec.outputs.size());
    p.insert(p.end(), rec.inputs.begin(), rec.inputs.end());
    p.insert(p.end(), rec.outputs.begin(), rec.outputs.end());
    return p;
}

Dataset validate_dataset(const RawTable& raw, const ColumnRoles& roles) {
    if (raw.ids.empty()) {
        throw EmptyDataset("table has no rows");
    }
    if (raw.ids.size() != raw.rows.size()) {
        throw RaggedRow("id column and value rows disagree in length");
    }
    std::unordered_map<std::string, std::size_t> col_index;
    for (std::size_t c = 0; c < raw.columns.size(); ++c) {
        if (!col_index.emplace(raw.columns[c], c).second) {
            throw ParseError("duplicate column name '" + raw.columns[c] + "'");
        }
    }
    auto locate = [&](const std::string& name) {
        auto it = col_index.find(name);
        if (it == col_index.end()) {
            throw ConfigError("declared variable '" + name + "' is not a table column");
        }
        return it->second;
    };
    std::vector<std::size_t> input_cols, output_cols;
    std::unordered_set<std::size_t> used;
    for (const std::string& name : roles.inputs) {
        std::size_t c = locate(name);
        if (!used.insert(c).second) throw ConfigError("variable '" + name + "' assigned twice");
        input_cols.push_back(c);
    }
    for (const std::string& name : roles.outputs) {
        std::size_t c = locate(name);
        if (!used.insert(c).second) throw ConfigError("variable '" + name + "' assigned twice");
        output_cols.push_back(c);
    }
    if (used.size() != raw.columns.size()) {
        for (std::size_t c = 0; c < raw.columns.size(); ++c) {
            if (!used.count(c)) {
                throw ConfigError("column '" + raw.columns[c] + "' has no role");
            }
        }
    }

    std::vector<DmuRecord> records;
    records.reserve(raw.ids.size());
    for (std::size_t r = 0; r < raw.ids.size(); ++r) {
        if (raw.rows[r].size() != raw.columns.size()) {
            throw RaggedRow("row '" + raw.ids[r] + "' has " + std::to_string(raw.rows[r].size()) +
                            " values, expected " + std::to_string(raw.columns.size()));
        }
        DmuRecord rec;
        rec.id = raw.ids[r];
        rec.inputs.reserve(input_cols.size());
        rec.outputs.reserve(output_cols.size());
        for (std::size_t c : input_cols) rec.inputs.push_back(raw.rows[r][c]);
        for (std::size_t c : output_cols) rec.outputs.push_back(raw.rows[r][c]);
        records.push_back(std::move(rec));
    }
    return Dataset(roles.inputs, roles.outputs, std::move(records));
}

}  // namespace frontier
