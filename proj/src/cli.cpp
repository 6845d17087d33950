#include "fcrec/cli.hpp"

#include "fcrec/evaluation.hpp"
#include "fcrec/model_io.hpp"
#include "fcrec/ratings.hpp"
#include "fcrec/report_io.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fcrec {

namespace {

std::string joinInts(const std::vector<int>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i)
            out += ',';
        out += std::to_string(values[i]);
    }
    return out;
}

std::string joinMethodNames(const std::vector<MethodSpec>& methods) {
    std::string out;
    for (std::size_t i = 0; i < methods.size(); ++i) {
        if (i)
            out += ',';
        out += methods[i].name;
    }
    return out;
}

ReportEcho buildEcho(const RunConfig& config, const std::vector<MethodSpec>& methods,
                     const FcmConfig& fcm) {
    ReportEcho echo;
    echo.add("data", config.dataPath);
    echo.add("methods", joinMethodNames(methods));
    echo.add("clusters", std::to_string(config.clusters));
    echo.add("neighbors", std::to_string(config.neighbors));
    echo.add("fuzzifier", formatMetric(config.fuzzifier));
    echo.add("folds", std::to_string(config.folds));
    echo.add("repetitions", std::to_string(config.repetitions));
    echo.add("topn", joinInts(config.topn));
    echo.add("threshold", std::to_string(config.threshold));
    echo.add("seed", std::to_string(config.seed));
    echo.add("clamp", config.clamp ? "on" : "off");
    echo.add("model_cache", config.modelCache.empty() ? "none" : config.modelCache);
    echo.add("output", config.output.empty() ? "stdout" : config.output);
    echo.add("format", config.format);
    echo.add("threads", config.threads == 0 ? "auto" : std::to_string(config.threads));
    echo.add("averaging", config.averaging);
    echo.add("singularity", "pair-mean");
    echo.add("fcm_tolerance", "1e-4");
    echo.add("fcm_max_iterations", std::to_string(fcm.maxIterations));
    return echo;
}

} // namespace

int runCli(const RunConfig& config) {
    RatingsMatrix data;
    try {
        data = loadMovieLens(config.dataPath);
    } catch (const IngestError& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 2;
    }

    ExperimentSetup setup;
    setup.protocol.topNValues = config.topn;
    setup.protocol.relevanceThreshold = static_cast<Rating>(config.threshold);
    setup.protocol.folds = config.folds;
    setup.protocol.repetitions = config.repetitions;
    setup.protocol.seed = config.seed;
    setup.fcm.clusterCount = config.clusters;
    setup.fcm.fuzzifier = config.fuzzifier;
    setup.neighborCount = config.neighbors;
    setup.clampPredictions = config.clamp;
    setup.averaging = parseAveraging(config.averaging);
    setup.threads = config.threads;

    const auto methods = expandMethods(config.methods);

    // Cache handling: reuse cached cluster models when the header matches,
    // otherwise refit; anything newly fitted is written back afterwards.
    const ModelCacheHeader wantHeader = makeCacheHeader(data, setup.fcm, setup.protocol);
    CachedModels cache;
    cache.header = wantHeader;
    bool cacheUsable = false;
    bool cacheDirty = false;
    if (!config.modelCache.empty() && std::filesystem::exists(config.modelCache)) {
        try {
            CachedModels loaded = readModelCache(config.modelCache);
            if (loaded.header == wantHeader) {
                cache = std::move(loaded);
                cacheUsable = true;
            } else {
                std::cerr << "warning: model cache does not match this run; refitting\n";
            }
        } catch (const IngestError& err) {
            std::cerr << "warning: unreadable model cache (" << err.what() << "); refitting\n";
        }
    }

    ModelProvider provider;
    if (!config.modelCache.empty()) {
        provider = [&](int fold, int rep, const RatingsMatrix& train, const FcmConfig& fcmConfig) {
            if (cacheUsable)
                if (const ClusterModel* hit = cache.find(fold, rep))
                    return *hit;
            ClusterModel model = fitFcm(train, fcmConfig);
            cache.entries.push_back({fold, rep, model});
            cacheDirty = true;
            return model;
        };
    }

    const auto reports = runExperiment(data, setup, methods, provider);

    const ReportEcho echo = buildEcho(config, methods, setup.fcm);
    try {
        if (!config.modelCache.empty() && cacheDirty)
            writeModelCache(config.modelCache, cache);

        std::ostringstream body;
        if (config.format == "csv")
            writeCsvReport(body, echo, reports);
        else
            writeTableReport(body, echo, reports);

        if (config.output.empty()) {
            std::cout << body.str();
        } else {
            std::ofstream out(config.output);
            if (!out)
                throw IngestError("cannot open output file: " + config.output);
            out << body.str();
            if (!out.good())
                throw IngestError("write failed: " + config.output);
        }
    } catch (const Error& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 3;
    }
    return 0;
}

int runMain(int argc, const char* const* argv) {
    CLI::App app{"Cluster-confined collaborative-filtering benchmark"};
    app.require_subcommand(1);

    RunConfig config;
    auto* run = app.add_subcommand("run", "Run the cross-validation benchmark");
    run->add_option("--data", config.dataPath,
                    "Ratings file, one user<TAB>item<TAB>rating<TAB>timestamp line per rating")
        ->required();
    run->add_option("--method", config.methods,
                    "Methods to evaluate: fcnhsmra, fnhsm, pearson, cosine, mw, hw, or all")
        ->delimiter(',');
    run->add_option("--clusters", config.clusters, "Number of fuzzy clusters")
        ->check(CLI::Range(2, 1000000));
    run->add_option("--neighbors", config.neighbors, "Neighborhood size per prediction")
        ->check(CLI::Range(1, 1000000));
    run->add_option("--fuzzifier", config.fuzzifier, "Fuzzy c-means exponent m > 1");
    run->add_option("--folds", config.folds, "Cross-validation folds")
        ->check(CLI::Range(2, 1000000));
    run->add_option("--repetitions", config.repetitions, "Repetitions per fold")
        ->check(CLI::Range(1, 1000000));
    run->add_option("--topn", config.topn, "Recommendation list sizes, ascending")
        ->delimiter(',');
    run->add_option("--threshold", config.threshold, "Relevance threshold rating");
    run->add_option("--seed", config.seed, "Base seed for folds and clustering");
    run->add_flag("--clamp,!--no-clamp", config.clamp, "Clamp predictions to the rating scale");
    run->add_option("--model-cache", config.modelCache, "Cluster-model cache file");
    run->add_option("--output", config.output, "Report destination (default stdout)");
    run->add_option("--format", config.format, "Report format")
        ->check(CLI::IsMember({"table", "csv"}));
    run->add_option("--threads", config.threads, "Worker threads (0 = all cores)")
        ->check(CLI::Range(0, 4096));
    run->add_option("--averaging", config.averaging, "Precision/recall pooling across users")
        ->check(CLI::IsMember({"micro", "macro"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        return app.exit(err);
    }

    if (!(config.fuzzifier > 1.0)) {
        std::cerr << "error: --fuzzifier must exceed 1\n";
        return 1;
    }
    try {
        return runCli(config);
    } catch (const Error& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 1;
    }
}

} // namespace fcrec
