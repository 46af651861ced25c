#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace frontier {

// One decision-making unit: an identifier plus its input and output vectors.
// Inputs must be strictly positive so that every weighted ratio stays finite;
// outputs are nonnegative with at least one positive entry.
struct DmuRecord {
    std::string id;
    std::vector<double> inputs;
    std::vector<double> outputs;

    bool operator==(const DmuRecord&) const = default;
};

// Raw named numeric table, typically parsed from CSV. `columns` excludes the
// leading id column; `rows` is row-major and parallel to `ids`.
struct RawTable {
    std::vector<std::string> columns;
    std::vector<std::string> ids;
    std::vector<std::vector<double>> rows;
};

// Assignment of every table column to the input or output role.
struct ColumnRoles {
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
};

// Validated, immutable collection of DMU records with consistent dimensions.
class Dataset {
  public:
    // Checks all invariants and throws a validation error on the first breach.
    Dataset(std::vector<std::string> input_names, std::vector<std::string> output_names,
            std::vector<DmuRecord> records);

    std::size_t num_inputs() const { return input_names_.size(); }
    std::size_t num_outputs() const { return output_names_.size(); }
    std::size_t size() const { return records_.size(); }

    const std::vector<std::string>& input_names() const { return input_names_; }
    const std::vector<std::string>& output_names() const { return output_names_; }
    const std::vector<DmuRecord>& records() const { return records_; }
    const DmuRecord& record(std::size_t k) const { return records_.at(k); }

    // Index of the record with the given id; throws IdSetMismatch if absent.
    std::size_t index_of(const std::string& id) const;

    // Concatenated (inputs, outputs) coordinates of record k, length m+n.
    std::vector<double> point(std::size_t k) const;

    bool operator==(const Dataset& other) const = default;

  private:
    std::vector<std::string> input_names_;
    std::vector<std::string> output_names_;
    std::vector<DmuRecord> records_;
};

// Builds a Dataset from a raw table and a role assignment. Every declared
// variable must appear as a table column and the roles must cover each column
// exactly once. Record vectors follow the order in which the roles list the
// variables, not the table column order.
Dataset validate_dataset(const RawTable& raw, const ColumnRoles& roles);

}  // namespace frontier
