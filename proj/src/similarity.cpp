#include "fcrec/similarity.hpp"

namespace fcrec {

std::string toString(MeasureName name) {
    switch (name) {
    case MeasureName::Nhsm: return "NHSM";
    case MeasureName::Pearson: return "PEARSON";
    case MeasureName::Cosine: return "COSINE";
    case MeasureName::HerlockerW: return "HERLOCKER_W";
    case MeasureName::McLaughlinW: return "MCLAUGHLIN_W";
    }
    throw ParamError("unhandled measure name");
}

MeasureName parseMeasureName(std::string_view text) {
    if (text == "NHSM") return MeasureName::Nhsm;
    if (text == "PEARSON") return MeasureName::Pearson;
    if (text == "COSINE") return MeasureName::Cosine;
    if (text == "HERLOCKER_W") return MeasureName::HerlockerW;
    if (text == "MCLAUGHLIN_W") return MeasureName::McLaughlinW;
    throw ParamError("unknown similarity measure '" + std::string(text) + "'");
}

double pearsonFromSums(const PairAccumulator& acc) {
    if (acc.coRated < 2)
        return 0.0;
    const auto n = static_cast<std::int64_t>(acc.coRated);
    const std::int64_t num = n * acc.sumUV - acc.sumU * acc.sumV;
    const std::int64_t varU = n * acc.sumUU - acc.sumU * acc.sumU;
    const std::int64_t varV = n * acc.sumVV - acc.sumV * acc.sumV;
    if (varU <= 0 || varV <= 0)
        return 0.0;
    return static_cast<double>(num) /
           (std::sqrt(static_cast<double>(varU)) * std::sqrt(static_cast<double>(varV)));
}

double cosineFromSums(const PairAccumulator& acc) {
    if (acc.coRated == 0)
        return 0.0;
    // Ratings are >= 1, so both norms are positive whenever coRated > 0.
    return static_cast<double>(acc.sumUV) /
           (std::sqrt(static_cast<double>(acc.sumUU)) * std::sqrt(static_cast<double>(acc.sumVV)));
}

double weightedPearson(double pearson, int coRated, MeasureName name, int gamma) {
    switch (name) {
    case MeasureName::HerlockerW:
        return pearson * static_cast<double>(std::min(coRated, gamma)) / gamma;
    case MeasureName::McLaughlinW:
        return pearson * static_cast<double>(coRated) / std::max(coRated, gamma);
    default:
        throw ParamError("co-rated-count weighting applies to HERLOCKER_W and MCLAUGHLIN_W only");
    }
}

namespace {

PairAccumulator accumulateOnMatrix(const RatingsMatrix& matrix, UserId u, UserId v) {
    return accumulatePair(
        matrix.ratingsOf(u), matrix.ratingsOf(v), matrix.scale().median,
        [&](ItemId item) { return itemStats(matrix, item).mean; },
        [&](ItemId item) { return matrix.ratersOf(item).size(); });
}

} // namespace

double jaccardPrime(const RatingsMatrix& matrix, UserId u, UserId v) {
    const auto rowU = matrix.ratingsOf(u);
    const auto rowV = matrix.ratingsOf(v);
    if (rowU.empty() || rowV.empty())
        return 0.0;
    int overlap = 0;
    forEachCoRated(rowU, rowV, [&](ItemId, Rating, Rating) { ++overlap; });
    return static_cast<double>(overlap) /
           (static_cast<double>(rowU.size()) * static_cast<double>(rowV.size()));
}

double pssSim(const RatingsMatrix& matrix, UserId u, UserId v) {
    return accumulateOnMatrix(matrix, u, v).pss;
}

double urpSim(const UserStats& statsU, const UserStats& statsV) {
    return urpKernel(statsU.mean, statsU.stddev, statsV.mean, statsV.stddev);
}

double nhsmSim(const RatingsMatrix& matrix, UserId u, UserId v) {
    const double pss = pssSim(matrix, u, v);
    if (pss == 0.0)
        return 0.0;
    return pss * jaccardPrime(matrix, u, v) * urpSim(userStats(matrix, u), userStats(matrix, v));
}

double baselineSim(const SimilarityMeasure& measure, const RatingsMatrix& matrix, UserId u,
                   UserId v) {
    if (measure.name == MeasureName::Nhsm)
        throw ParamError("baselineSim does not handle NHSM; call nhsmSim");
    const auto acc = accumulateOnMatrix(matrix, u, v);
    switch (measure.name) {
    case MeasureName::Pearson:
        return pearsonFromSums(acc);
    case MeasureName::Cosine:
        return cosineFromSums(acc);
    default:
        return weightedPearson(pearsonFromSums(acc), acc.coRated, measure.name, measure.gamma);
    }
}

double pairScore(const SimilarityMeasure& measure, const RatingsMatrix& matrix, UserId u,
                 UserId v) {
    if (measure.name == MeasureName::Nhsm)
        return nhsmSim(matrix, u, v);
    return baselineSim(measure, matrix, u, v);
}

} // namespace fcrec
