#include "frontier/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "frontier/errors.hpp"

namespace frontier {

VariableStats descriptive_stats(std::span<const double> values) {
    if (values.empty()) {
        throw EmptyVector("descriptive_stats needs a nonempty vector");
    }
    VariableStats st;
    st.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    st.min = *lo;
    st.max = *hi;
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) {
            const double d = v - st.mean;
            ss += d * d;
        }
        st.std_dev = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    return st;
}

namespace {

std::vector<std::vector<double>> collect_columns(const Dataset& dataset) {
    const std::size_t m = dataset.num_inputs();
    const std::size_t n = dataset.num_outputs();
    std::vector<std::vector<double>> cols(m + n, std::vector<double>(dataset.size()));
    for (std::size_t k = 0; k < dataset.size(); ++k) {
        const DmuRecord& rec = dataset.record(k);
        for (std::size_t j = 0; j < m; ++j) cols[j][k] = rec.inputs[j];
        for (std::size_t i = 0; i < n; ++i) cols[m + i][k] = rec.outputs[i];
    }
    return cols;
}

std::string column_name(const Dataset& dataset, std::size_t c) {
    const std::size_t m = dataset.num_inputs();
    return c < m ? dataset.input_names()[c] : dataset.output_names()[c - m];
}

}  // namespace

std::vector<VariableStats> dataset_stats(const Dataset& dataset) {
    std::vector<VariableStats> out;
    for (const auto& col : collect_columns(dataset)) {
        out.push_back(descriptive_stats(col));
    }
    return out;
}

std::vector<std::vector<double>> correlation_matrix(const Dataset& dataset) {
    if (dataset.size() < 2) {
        throw EmptyVector("correlation_matrix needs at least two records");
    }
    const auto cols = collect_columns(dataset);
    const std::size_t p = cols.size();
    const double s = static_cast<double>(dataset.size());

    std::vector<double> mean(p), norm(p);
    std::vector<std::vector<double>> centered(p, std::vector<double>(dataset.size()));
    for (std::size_t c = 0; c < p; ++c) {
        mean[c] = std::accumulate(cols[c].begin(), cols[c].end(), 0.0) / s;
        double ss = 0.0;
        for (std::size_t k = 0; k < cols[c].size(); ++k) {
            centered[c][k] = cols[c][k] - mean[c];
            ss += centered[c][k] * centered[c][k];
        }
        if (ss <= 0.0) {
            throw ZeroVariance("column '" + column_name(dataset, c) + "' is constant");
        }
        norm[c] = std::sqrt(ss);
    }

    std::vector<std::vector<double>> corr(p, std::vector<double>(p, 1.0));
    for (std::size_t a = 0; a < p; ++a) {
        for (std::size_t b = a + 1; b < p; ++b) {
            const double dot =
                std::inner_product(centered[a].begin(), centered[a].end(), centered[b].begin(), 0.0);
            const double r = std::clamp(dot / (norm[a] * norm[b]), -1.0, 1.0);
            corr[a][b] = r;
            corr[b][a] = r;
        }
    }
    return corr;
}

}  // namespace frontier
