#pragma once

#include <span>
#include <vector>

#include "frontier/dataset.hpp"

namespace frontier {

// Per-variable summary in the same units as the variable. Dispersion is the
// sample standard deviation (divisor S-1), reported as "std dev".
struct VariableStats {
    double mean = 0.0;
    double std_dev = 0.0;
    double max = 0.0;
    double min = 0.0;
};

// Mean, sample standard deviation and extremes of a nonempty vector.
VariableStats descriptive_stats(std::span<const double> values);

// Stats for every variable of the dataset, inputs first then outputs.
std::vector<VariableStats> dataset_stats(const Dataset& dataset);

// Pearson correlations over all m+n variables, inputs first then outputs.
// Requires at least two records and nonzero variance in every column.
std::vector<std::vector<double>> correlation_matrix(const Dataset& dataset);

}  // namespace frontier
