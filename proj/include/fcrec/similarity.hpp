#pragma once

#include "fcrec/ratings.hpp"

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace fcrec {

enum class MeasureName { Nhsm, Pearson, Cosine, HerlockerW, McLaughlinW };

std::string toString(MeasureName name);
MeasureName parseMeasureName(std::string_view text); // ParamError on unknown name

struct SimilarityMeasure {
    MeasureName name = MeasureName::Nhsm;
    int gamma = 50; // co-rated-count threshold for the two weighted variants

    bool operator==(const SimilarityMeasure&) const = default;
};

// Scalar kernels. Each is a logistic shaping of a rating-difference term;
// kept as separate functions so the factors can be tested against hand
// evaluations independently of any matrix.

/// 1 - 1/(1+exp(-|rUp - rVp|)), in (0, 0.5], maximal when the ratings agree.
inline double proximity(double rUp, double rVp) {
    return 1.0 - 1.0 / (1.0 + std::exp(-std::abs(rUp - rVp)));
}

/// 1/(1+exp(-|rUp-rMed|*|rVp-rMed|)), in [0.5, 1); 0.5 when either rating
/// sits on the median.
inline double significance(double rUp, double rVp, double rMed) {
    return 1.0 / (1.0 + std::exp(-(std::abs(rUp - rMed) * std::abs(rVp - rMed))));
}

/// 1 - 1/(1+exp(-|(rUp+rVp)/2 - muP|)) with muP the item's mean rating; the
/// pair mean (not the half-sum-minus-mean) is the adopted reading.
inline double singularity(double rUp, double rVp, double muP) {
    return 1.0 - 1.0 / (1.0 + std::exp(-std::abs((rUp + rVp) / 2.0 - muP)));
}

/// 1 - 1/(1+exp(-|meanU-meanV|*|sdU-sdV|)), in (0, 0.5].
inline double urpKernel(double meanU, double sdU, double meanV, double sdV) {
    return 1.0 - 1.0 / (1.0 + std::exp(-(std::abs(meanU - meanV) * std::abs(sdU - sdV))));
}

/// Walks two item-sorted rating rows and calls fn(item, ratingU, ratingV)
/// for every co-rated item, ascending by item id.
template <typename Fn>
void forEachCoRated(std::span<const ItemRating> rowU, std::span<const ItemRating> rowV, Fn&& fn) {
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < rowU.size() && j < rowV.size()) {
        if (rowU[i].item < rowV[j].item) {
            ++i;
        } else if (rowV[j].item < rowU[i].item) {
            ++j;
        } else {
            fn(rowU[i].item, rowU[i].value, rowV[j].value);
            ++i;
            ++j;
        }
    }
}

/// Everything a pair of users contributes in one co-rated walk. Rating sums
/// are exact integers so the Pearson family has no accumulation drift; pss
/// and ra are summed in ascending item order so bulk tables reproduce the
/// per-pair functions bit for bit.
struct PairAccumulator {
    int coRated = 0;
    std::int64_t sumU = 0;
    std::int64_t sumV = 0;
    std::int64_t sumUU = 0;
    std::int64_t sumVV = 0;
    std::int64_t sumUV = 0;
    double pss = 0.0;
    double ra = 0.0;
};

/// One merge walk collecting every per-pair statistic. itemMean(item) must
/// return the item's training mean, raterCount(item) its training rater
/// count (>= 1 for any rated item).
template <typename ItemMeanFn, typename RaterCountFn>
PairAccumulator accumulatePair(std::span<const ItemRating> rowU, std::span<const ItemRating> rowV,
                               double rMed, ItemMeanFn&& itemMean, RaterCountFn&& raterCount) {
    PairAccumulator acc;
    forEachCoRated(rowU, rowV, [&](ItemId item, Rating ru, Rating rv) {
        ++acc.coRated;
        acc.sumU += ru;
        acc.sumV += rv;
        acc.sumUU += static_cast<std::int64_t>(ru) * ru;
        acc.sumVV += static_cast<std::int64_t>(rv) * rv;
        acc.sumUV += static_cast<std::int64_t>(ru) * rv;
        acc.pss += proximity(ru, rv) * significance(ru, rv, rMed) *
                   singularity(ru, rv, itemMean(item));
        acc.ra += 1.0 / static_cast<double>(raterCount(item));
    });
    return acc;
}

/// Mean-centered correlation over the co-rated subset; 0 with fewer than two
/// co-rated items or a zero-variance side.
double pearsonFromSums(const PairAccumulator& acc);

/// Cosine of the co-rated rating vectors; 0 with no co-rated items.
double cosineFromSums(const PairAccumulator& acc);

/// Applies the Herlocker or McLaughlin co-rated-count weighting to a Pearson
/// score. ParamError for any other measure name.
double weightedPearson(double pearson, int coRated, MeasureName name, int gamma);

double jaccardPrime(const RatingsMatrix& matrix, UserId u, UserId v);
double pssSim(const RatingsMatrix& matrix, UserId u, UserId v);
double urpSim(const UserStats& statsU, const UserStats& statsV);
double nhsmSim(const RatingsMatrix& matrix, UserId u, UserId v);

/// Pearson / Cosine / weighted-Pearson scores; ParamError when handed the
/// NHSM measure (use nhsmSim for that).
double baselineSim(const SimilarityMeasure& measure, const RatingsMatrix& matrix, UserId u,
                   UserId v);

/// Dispatches to nhsmSim or baselineSim by measure name.
double pairScore(const SimilarityMeasure& measure, const RatingsMatrix& matrix, UserId u, UserId v);

} // namespace fcrec
