#pragma once

// Shared helpers for the test suites: seeded dataset generators, a subprocess
// runner for the CLI tests, and scratch-directory plumbing. Header-only so the
// unit and acceptance binaries can both include it.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "frontier/dataset.hpp"

namespace testsupport {

inline double uniform01(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& eng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(eng);
}

inline std::vector<std::string> numbered_names(const std::string& stem, std::size_t count) {
    std::vector<std::string> names;
    names.reserve(count);
    for (std::size_t i = 0; i < count; ++i) names.push_back(stem + std::to_string(i + 1));
    return names;
}

// Random dataset with values bounded well away from zero so the default
// epsilon floor of 1e-5 never makes the weight programs infeasible.
inline frontier::Dataset random_dataset(std::uint64_t seed, std::size_t S, std::size_t m,
                                        std::size_t n, double lo = 1.0, double hi = 10.0) {
    std::mt19937_64 eng(seed);
    std::vector<frontier::DmuRecord> records;
    records.reserve(S);
    for (std::size_t k = 0; k < S; ++k) {
        frontier::DmuRecord r;
        r.id = "D" + std::to_string(k + 1);
        for (std::size_t j = 0; j < m; ++j) r.inputs.push_back(uniform(eng, lo, hi));
        for (std::size_t i = 0; i < n; ++i) r.outputs.push_back(uniform(eng, lo, hi));
        records.push_back(std::move(r));
    }
    return frontier::Dataset(numbered_names("in", m), numbered_names("out", n),
                             std::move(records));
}

// Heterogeneous sample shaped like the exclusion method's target case: one
// far-out efficient unit and a near cluster, 2 inputs and 2 outputs.
inline frontier::Dataset heterogeneous_dataset(std::uint64_t seed, std::size_t S = 45) {
    std::mt19937_64 eng(seed);
    std::vector<frontier::DmuRecord> records;
    records.reserve(S);
    frontier::DmuRecord star;
    star.id = "D1";
    star.inputs = {1.0 + 0.2 * uniform01(eng), 1.0 + 0.2 * uniform01(eng)};
    star.outputs = {40.0 + 10.0 * uniform01(eng), 40.0 + 10.0 * uniform01(eng)};
    records.push_back(std::move(star));
    for (std::size_t k = 1; k < S; ++k) {
        frontier::DmuRecord r;
        r.id = "D" + std::to_string(k + 1);
        r.inputs = {uniform(eng, 8.0, 12.0), uniform(eng, 8.0, 12.0)};
        r.outputs = {uniform(eng, 3.0, 9.0), uniform(eng, 3.0, 9.0)};
        records.push_back(std::move(r));
    }
    return frontier::Dataset({"staff", "budget"}, {"grads", "articles"}, std::move(records));
}

// Fresh scratch directory under the system temp root, unique per call.
inline std::filesystem::path make_temp_dir(const std::string& tag) {
    static int counter = 0;
    const std::filesystem::path dir =
        std::filesystem::temp_directory_path() /
        ("frontier_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(++counter));
    std::filesystem::create_directories(dir);
    return dir;
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

inline std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct CmdResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

// Runs a shell command, capturing stdout/stderr and the exit code.
inline CmdResult run_cmd(const std::string& cmd) {
    const std::filesystem::path dir = make_temp_dir("cmd");
    const std::filesystem::path out = dir / "stdout.txt";
    const std::filesystem::path err = dir / "stderr.txt";
    const std::string full = cmd + " >" + out.string() + " 2>" + err.string();
    const int rc = std::system(full.c_str());
    CmdResult r;
    if (rc != -1 && WIFEXITED(rc)) r.exit_code = WEXITSTATUS(rc);
    r.out = slurp(out);
    r.err = slurp(err);
    std::filesystem::remove_all(dir);
    return r;
}

inline std::string cli_path() {
    const char* cli = std::getenv("FRONTIER_CLI");
    return cli ? std::string(cli) : std::string();
}

inline std::string fixtures_dir() {
    const char* dir = std::getenv("FRONTIER_FIXTURES");
    return dir ? std::string(dir) : std::string();
}

}  // namespace testsupport
