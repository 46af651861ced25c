#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "frontier/ccr.hpp"
#include "frontier/dataset.hpp"
#include "frontier/errors.hpp"
#include "frontier/madea.hpp"
#include "frontier/ranking.hpp"
#include "frontier/seqex.hpp"
#include "frontier/stats.hpp"
#include "frontier/version.hpp"

namespace py = pybind11;
using namespace frontier;

namespace {

Dataset make_dataset(const std::vector<std::string>& input_names,
                     const std::vector<std::string>& output_names,
                     const std::vector<std::string>& ids,
                     const std::vector<std::vector<double>>& inputs,
                     const std::vector<std::vector<double>>& outputs) {
    if (ids.size() != inputs.size() || ids.size() != outputs.size())
        throw DimensionMismatch("ids, inputs, and outputs must have one entry per DMU");
    std::vector<DmuRecord> records;
    records.reserve(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i)
        records.push_back({ids[i], inputs[i], outputs[i]});
    return Dataset(input_names, output_names, records);
}

}  // namespace

PYBIND11_MODULE(_frontier, m) {
    m.doc() = "frontier efficiency analysis toolkit";
    m.attr("__version__") = kVersion;

    py::register_exception<Error>(m, "FrontierError");

    py::class_<Dataset>(m, "Dataset")
        .def(py::init(&make_dataset), py::arg("input_names"), py::arg("output_names"),
             py::arg("ids"), py::arg("inputs"), py::arg("outputs"))
        .def_property_readonly("num_inputs", &Dataset::num_inputs)
        .def_property_readonly("num_outputs", &Dataset::num_outputs)
        .def("__len__", &Dataset::size);

    py::class_<CcrResult>(m, "CcrResult")
        .def_readonly("id", &CcrResult::id)
        .def_readonly("score", &CcrResult::score)
        .def_readonly("input_weights", &CcrResult::input_weights)
        .def_readonly("output_weights", &CcrResult::output_weights);

    m.def(
        "ccr_scores",
        [](const Dataset& data, double epsilon) {
            SolverConfig config;
            config.epsilon = epsilon;
            return ccr_all(data, config);
        },
        py::arg("dataset"), py::arg("epsilon") = 1e-5);

    py::class_<MadeaResult>(m, "MadeaResult")
        .def_readonly("id", &MadeaResult::id)
        .def_readonly("total", &MadeaResult::total)
        .def_readonly("teaching", &MadeaResult::teaching)
        .def_readonly("research", &MadeaResult::research)
        .def_readonly("alpha_teaching", &MadeaResult::alpha_teaching)
        .def_readonly("alpha_research", &MadeaResult::alpha_research)
        .def_readonly("lambdas", &MadeaResult::lambdas)
        .def_readonly("betas", &MadeaResult::betas);

    m.def(
        "madea_scores",
        [](const Dataset& data, const std::vector<std::size_t>& shared_inputs,
           const std::vector<std::size_t>& teaching_outputs,
           const std::vector<std::size_t>& research_outputs,
           const std::vector<std::size_t>& split_outputs, const std::string& scenario,
           double epsilon, int num_starts, std::uint64_t seed) {
            ActivityStructure structure;
            structure.shared_inputs = shared_inputs;
            structure.teaching_outputs = teaching_outputs;
            structure.research_outputs = research_outputs;
            structure.split_outputs = split_outputs;
            ScenarioSpec spec = scenario == "s2" ? ScenarioSpec::scenario2()
                                                 : ScenarioSpec::scenario1();
            spec.epsilon = epsilon;
            MadeaSearchConfig search;
            search.num_starts = num_starts;
            search.seed = seed;
            return madea_all(data, structure, spec, search).results;
        },
        py::arg("dataset"), py::arg("shared_inputs"), py::arg("teaching_outputs"),
        py::arg("research_outputs"), py::arg("split_outputs") = std::vector<std::size_t>{},
        py::arg("scenario") = "s1", py::arg("epsilon") = 1e-5, py::arg("num_starts") = 64,
        py::arg("seed") = 0);

    m.def(
        "seqex_scores",
        [](const Dataset& data, py::object mu, bool scale_distances, double epsilon) {
            SeqExConfig config;
            if (!mu.is_none()) config.mu = mu.cast<double>();
            config.scale_distances = scale_distances;
            config.solver.epsilon = epsilon;
            const SeqExResult result = seqex_run(data, config);
            std::vector<std::pair<std::string, double>> out;
            out.reserve(result.final_scores.size());
            for (const auto& e : result.final_scores) out.emplace_back(e.id, e.score);
            return out;
        },
        py::arg("dataset"), py::arg("mu") = py::none(), py::arg("scale_distances") = true,
        py::arg("epsilon") = 1e-5);

    m.def(
        "kendall_distance",
        [](const std::vector<std::pair<std::string, double>>& a,
           const std::vector<std::pair<std::string, double>>& b) {
            std::vector<ScoreEntry> ea, eb;
            for (const auto& [id, s] : a) ea.push_back({id, s});
            for (const auto& [id, s] : b) eb.push_back({id, s});
            return kendall_distance(ea, eb);
        },
        py::arg("a"), py::arg("b"));
}
