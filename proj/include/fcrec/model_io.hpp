#pragma once

#include "fcrec/evaluation.hpp"
#include "fcrec/fcm.hpp"
#include "fcrec/ratings.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace fcrec {

/// FNV-1a 64 over the canonical "user<TAB>item<TAB>rating<LF>" listing,
/// as a 16-digit hex string. Identifies the dataset independent of file
/// formatting details like timestamps or line order.
std::string dataChecksum(const RatingsMatrix& matrix);

/// Everything the cached offline phase depends on. A cache is only reused
/// when every field matches the current run.
struct ModelCacheHeader {
    int formatVersion = 1;
    std::string checksum;
    int clusters = 3;
    double fuzzifier = 2.0;
    double tolerance = 1e-4;
    int maxIterations = 100;
    std::uint64_t baseSeed = 42;
    int folds = 5;
    int repetitions = 5;

    bool operator==(const ModelCacheHeader&) const = default;
};

ModelCacheHeader makeCacheHeader(const RatingsMatrix& matrix, const FcmConfig& fcm,
                                 const EvalProtocol& protocol);

struct CachedModelEntry {
    int fold = 0;
    int repetition = 0;
    ClusterModel model;
};

/// All (fold, repetition) cluster models of one experiment.
struct CachedModels {
    ModelCacheHeader header;
    std::vector<CachedModelEntry> entries;

    const ClusterModel* find(int fold, int repetition) const;
};

/// JSON model file; doubles survive the round trip bit for bit.
void writeModelCache(const std::filesystem::path& path, const CachedModels& cache);
CachedModels readModelCache(const std::filesystem::path& path); // IngestError on any defect

} // namespace fcrec
