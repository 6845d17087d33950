#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fcrec {

struct RunConfig {
    std::string dataPath;
    std::vector<std::string> methods{"all"};
    int clusters = 3;
    int neighbors = 50;
    double fuzzifier = 2.0;
    int folds = 5;
    int repetitions = 5;
    std::vector<int> topn{5, 10, 15, 20, 30};
    int threshold = 3;
    std::uint64_t seed = 42;
    bool clamp = true;
    std::string modelCache; // empty = no cache file
    std::string output;     // empty = stdout
    std::string format = "table";
    int threads = 0; // 0 = all hardware threads
    std::string averaging = "micro";
};

/// Executes one benchmark run. Exit codes: 0 success, 1 bad configuration,
/// 2 ingestion failure, 3 output or cache write failure.
int runCli(const RunConfig& config);

/// Full command-line entry point (argument parsing + runCli).
int runMain(int argc, const char* const* argv);

} // namespace fcrec
