#pragma once

#include "fcrec/ratings.hpp"

#include <cstdint>
#include <vector>

namespace fcrec {

/// One train/test partition of a cross-validation run.
struct FoldSplit {
    int foldIndex = 0;
    RatingsMatrix train;
    std::vector<RatingEntry> test;
};

/// Shuffles the matrix entries with a seeded permutation and deals them into
/// k near-equal test partitions; the remaining entries form each fold's
/// training matrix. Identical (matrix, k, seed) inputs give identical splits.
std::vector<FoldSplit> kFoldSplit(const RatingsMatrix& matrix, int k, std::uint64_t seed);

} // namespace fcrec
