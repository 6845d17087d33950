#pragma once

#include "fcrec/fcm.hpp"
#include "fcrec/ratings.hpp"
#include "fcrec/similarity.hpp"

#include <span>
#include <utility>
#include <vector>

namespace fcrec {

struct PredictorConfig {
    int neighborCount = 50;
    SimilarityMeasure measure;
    bool useReliability = false;
    bool clampPredictions = true;

    bool operator==(const PredictorConfig&) const = default;
    void validate() const;
};

struct Prediction {
    UserId user = 0;
    ItemId item = 0;
    double value = 0.0;
    int neighborsUsed = 0;
    bool fellBack = false;
};

struct ScoredNeighbor {
    UserId user;
    double similarity;
};

struct RecommendationList {
    UserId user = 0;
    std::vector<std::pair<ItemId, double>> items; // descending prediction, ties ascending id
};

/// Pair-score source addressed by training-matrix user indices, so the
/// predictor works identically off on-the-fly scores or a precomputed table.
class PairScores {
public:
    virtual ~PairScores() = default;
    virtual double similarity(int uIdx, int vIdx) const = 0;
    virtual double reliability(int uIdx, int vIdx) const = 0;
};

/// Computes each score on demand from the matrix; fine for small cases and
/// tests, quadratic-cost-per-call for benchmark runs (use a table there).
class DirectPairScores : public PairScores {
public:
    DirectPairScores(const RatingsMatrix& matrix, SimilarityMeasure measure);
    double similarity(int uIdx, int vIdx) const override;
    double reliability(int uIdx, int vIdx) const override;

private:
    const RatingsMatrix& matrix_;
    SimilarityMeasure measure_;
};

/// Neighborhood predictor over one training matrix and its cluster model.
///
/// Neighbor candidates for (u, i) are u's cluster co-members who rated i in
/// training, ranked by similarity alone (descending, ties by ascending user
/// id) and cut to neighborCount. The predicted value is the user's mean plus
/// the weighted mean-centered neighbor deviations; the weight is similarity,
/// times the pair's resource-allocation score when useReliability is set.
class Predictor {
public:
    Predictor(const RatingsMatrix& train, const ClusterModel& model, PredictorConfig config,
              const PairScores& scores);

    std::vector<ScoredNeighbor> neighbors(UserId u, ItemId i) const;
    Prediction predict(UserId u, ItemId i) const;
    RecommendationList recommend(UserId u, std::span<const ItemId> candidates, int n) const;

    const PredictorConfig& config() const { return config_; }
    double meanOf(UserId u) const;

private:
    struct Candidate {
        int vIdx;
        Rating rating;
        double similarity;
    };
    std::vector<Candidate> candidatesFor(int uIdx, ItemId i) const;
    int requireUser(UserId u) const;

    const RatingsMatrix& train_;
    PredictorConfig config_;
    const PairScores& scores_;
    std::vector<double> userMean_;
    std::vector<int> assignment_; // -1 when the model lacks the user
};

/// One-shot wrappers that build a DirectPairScores-backed Predictor per call.
std::vector<ScoredNeighbor> selectNeighbors(const RatingsMatrix& matrix, const ClusterModel& model,
                                            const PredictorConfig& config, UserId u, ItemId i);
Prediction predictRating(const RatingsMatrix& matrix, const ClusterModel& model,
                         const PredictorConfig& config, UserId u, ItemId i);
RecommendationList recommendTopN(const RatingsMatrix& matrix, const ClusterModel& model,
                                 const PredictorConfig& config, UserId u,
                                 std::span<const ItemId> candidates, int n);

} // namespace fcrec
