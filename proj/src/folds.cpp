#include "fcrec/folds.hpp"

#include <numeric>
#include <random>
#include <string>

namespace fcrec {

namespace {

// Unbiased draw from [0, bound) via rejection sampling. std::shuffle and
// std::uniform_int_distribution are free to differ between standard library
// implementations, which would break cross-toolchain reproducibility.
std::uint64_t boundedDraw(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % bound;
}

void fisherYates(std::vector<std::size_t>& perm, std::mt19937_64& rng) {
    for (std::size_t i = perm.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(boundedDraw(rng, i));
        std::swap(perm[i - 1], perm[j]);
    }
}

} // namespace

std::vector<FoldSplit> kFoldSplit(const RatingsMatrix& matrix, int k, std::uint64_t seed) {
    const std::size_t n = matrix.entryCount();
    if (k < 2)
        throw ParamError("fold count must be at least 2, got " + std::to_string(k));
    if (static_cast<std::size_t>(k) > n)
        throw ParamError("fold count " + std::to_string(k) + " exceeds entry count " +
                         std::to_string(n));

    const auto entries = matrix.entries();
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    fisherYates(perm, rng);

    // Shuffled position p lands in test fold p % k, so the first n % k folds
    // pick up one extra entry each.
    std::vector<int> assignment(n);
    for (std::size_t p = 0; p < n; ++p)
        assignment[perm[p]] = static_cast<int>(p % static_cast<std::size_t>(k));

    std::vector<FoldSplit> folds;
    folds.reserve(static_cast<std::size_t>(k));
    for (int f = 0; f < k; ++f) {
        std::vector<RatingEntry> train;
        std::vector<RatingEntry> test;
        train.reserve(n - n / static_cast<std::size_t>(k));
        test.reserve(n / static_cast<std::size_t>(k) + 1);
        for (std::size_t i = 0; i < n; ++i)
            (assignment[i] == f ? test : train).push_back(entries[i]);
        folds.push_back(
            {f, RatingsMatrix::fromEntries(std::move(train), matrix.scale()), std::move(test)});
    }
    return folds;
}

} // namespace fcrec
