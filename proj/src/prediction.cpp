#include "fcrec/prediction.hpp"

#include "fcrec/reliability.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fcrec {

void PredictorConfig::validate() const {
    if (neighborCount < 1)
        throw ParamError("neighbor count must be positive, got " + std::to_string(neighborCount));
}

DirectPairScores::DirectPairScores(const RatingsMatrix& matrix, SimilarityMeasure measure)
    : matrix_(matrix), measure_(measure) {}

double DirectPairScores::similarity(int uIdx, int vIdx) const {
    return pairScore(measure_, matrix_, matrix_.userIds()[static_cast<std::size_t>(uIdx)],
                     matrix_.userIds()[static_cast<std::size_t>(vIdx)]);
}

double DirectPairScores::reliability(int uIdx, int vIdx) const {
    return resourceAllocation(matrix_, matrix_.userIds()[static_cast<std::size_t>(uIdx)],
                              matrix_.userIds()[static_cast<std::size_t>(vIdx)]);
}

Predictor::Predictor(const RatingsMatrix& train, const ClusterModel& model, PredictorConfig config,
                     const PairScores& scores)
    : train_(train), config_(config), scores_(scores) {
    config_.validate();
    const int n = train.userCount();
    userMean_.resize(static_cast<std::size_t>(n));
    assignment_.resize(static_cast<std::size_t>(n), -1);
    for (int ui = 0; ui < n; ++ui) {
        const UserId id = train.userIds()[static_cast<std::size_t>(ui)];
        userMean_[static_cast<std::size_t>(ui)] = userStats(train, id).mean;
        const int mi = model.userIndexOf(id);
        if (mi >= 0)
            assignment_[static_cast<std::size_t>(ui)] =
                model.assignments[static_cast<std::size_t>(mi)];
    }
}

int Predictor::requireUser(UserId u) const {
    const int uIdx = train_.userIndex(u);
    if (uIdx < 0)
        throw LookupError("user " + std::to_string(u) + " not in training matrix");
    if (assignment_[static_cast<std::size_t>(uIdx)] < 0)
        throw LookupError("user " + std::to_string(u) + " has no cluster assignment");
    return uIdx;
}

std::vector<Predictor::Candidate> Predictor::candidatesFor(int uIdx, ItemId i) const {
    const int cluster = assignment_[static_cast<std::size_t>(uIdx)];
    std::vector<Candidate> candidates;
    for (const auto& rater : train_.ratersOf(i)) {
        const int vIdx = train_.userIndex(rater.user);
        if (vIdx == uIdx || assignment_[static_cast<std::size_t>(vIdx)] != cluster)
            continue;
        candidates.push_back({vIdx, rater.value, scores_.similarity(uIdx, vIdx)});
    }
    // Raters come in ascending user order, so a stable sort leaves similarity
    // ties in ascending-id order.
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Candidate& a, const Candidate& b) {
                         return a.similarity > b.similarity;
                     });
    if (candidates.size() > static_cast<std::size_t>(config_.neighborCount))
        candidates.resize(static_cast<std::size_t>(config_.neighborCount));
    return candidates;
}

std::vector<ScoredNeighbor> Predictor::neighbors(UserId u, ItemId i) const {
    const int uIdx = requireUser(u);
    std::vector<ScoredNeighbor> out;
    for (const auto& c : candidatesFor(uIdx, i))
        out.push_back({train_.userIds()[static_cast<std::size_t>(c.vIdx)], c.similarity});
    return out;
}

Prediction Predictor::predict(UserId u, ItemId i) const {
    const int uIdx = requireUser(u);
    const double meanU = userMean_[static_cast<std::size_t>(uIdx)];
    const auto candidates = candidatesFor(uIdx, i);

    double num = 0.0;
    double den = 0.0;
    for (const auto& c : candidates) {
        const double w = config_.useReliability
                             ? c.similarity * scores_.reliability(uIdx, c.vIdx)
                             : c.similarity;
        num += (static_cast<double>(c.rating) - userMean_[static_cast<std::size_t>(c.vIdx)]) * w;
        den += std::abs(w);
    }

    Prediction p;
    p.user = u;
    p.item = i;
    if (candidates.empty() || den == 0.0) {
        p.value = meanU;
        p.neighborsUsed = 0;
        p.fellBack = true;
    } else {
        p.value = meanU + num / den;
        p.neighborsUsed = static_cast<int>(candidates.size());
    }
    if (config_.clampPredictions) {
        const auto& s = train_.scale();
        p.value = std::clamp(p.value, static_cast<double>(s.min), static_cast<double>(s.max));
    }
    return p;
}

RecommendationList Predictor::recommend(UserId u, std::span<const ItemId> candidates, int n) const {
    if (n < 1)
        throw ParamError("recommendation size must be positive, got " + std::to_string(n));
    RecommendationList list;
    list.user = u;
    for (ItemId item : candidates)
        list.items.emplace_back(item, predict(u, item).value);
    std::sort(list.items.begin(), list.items.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    if (list.items.size() > static_cast<std::size_t>(n))
        list.items.resize(static_cast<std::size_t>(n));
    return list;
}

double Predictor::meanOf(UserId u) const {
    const int uIdx = train_.userIndex(u);
    if (uIdx < 0)
        throw LookupError("user " + std::to_string(u) + " not in training matrix");
    return userMean_[static_cast<std::size_t>(uIdx)];
}

std::vector<ScoredNeighbor> selectNeighbors(const RatingsMatrix& matrix, const ClusterModel& model,
                                            const PredictorConfig& config, UserId u, ItemId i) {
    DirectPairScores scores(matrix, config.measure);
    return Predictor(matrix, model, config, scores).neighbors(u, i);
}

Prediction predictRating(const RatingsMatrix& matrix, const ClusterModel& model,
                         const PredictorConfig& config, UserId u, ItemId i) {
    DirectPairScores scores(matrix, config.measure);
    return Predictor(matrix, model, config, scores).predict(u, i);
}

RecommendationList recommendTopN(const RatingsMatrix& matrix, const ClusterModel& model,
                                 const PredictorConfig& config, UserId u,
                                 std::span<const ItemId> candidates, int n) {
    DirectPairScores scores(matrix, config.measure);
    return Predictor(matrix, model, config, scores).recommend(u, candidates, n);
}

} // namespace fcrec
