#pragma once

#include "fcrec/fcm.hpp"
#include "fcrec/folds.hpp"
#include "fcrec/prediction.hpp"
#include "fcrec/ratings.hpp"
#include "fcrec/similarity.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fcrec {

/// Recommendation classification counts: a = true negatives, b = false
/// positives, c = false negatives, d = true positives.
struct ConfusionMatrix {
    long long a = 0;
    long long b = 0;
    long long c = 0;
    long long d = 0;

    long long total() const { return a + b + c + d; }
    ConfusionMatrix& operator+=(const ConfusionMatrix& o) {
        a += o.a;
        b += o.b;
        c += o.c;
        d += o.d;
        return *this;
    }
    bool operator==(const ConfusionMatrix&) const = default;
};

/// Accuracy/precision/recall are percentages; precision and recall are
/// absent when their denominator is zero (excluded from averages upstream).
struct Metrics {
    double mae = 0.0;
    double accuracy = 0.0;
    std::optional<double> precision;
    std::optional<double> recall;
};

enum class Averaging { Micro, Macro };

std::string toString(Averaging mode);
Averaging parseAveraging(std::string_view text); // ParamError on unknown

struct EvalProtocol {
    std::vector<int> topNValues{5, 10, 15, 20, 30};
    Rating relevanceThreshold = 3;
    int folds = 5;
    int repetitions = 5;
    std::uint64_t seed = 42;

    void validate(const RatingScale& scale) const;
};

/// Classifies every one of the user's test items: predicted-positive means
/// the item sits in the top n of the user's predictions (descending value,
/// ties ascending item id) AND its predicted value reaches the threshold;
/// actual-positive means the actual rating reaches the threshold.
/// Predictions must cover exactly the test items (ProtocolError otherwise).
ConfusionMatrix classifyTopN(std::span<const ItemRating> userTestRatings,
                             std::span<const std::pair<ItemId, double>> predictions, int n,
                             Rating threshold);

struct MaeAccum {
    double sum = 0.0;
    long long count = 0;

    MaeAccum& operator+=(const MaeAccum& o) {
        sum += o.sum;
        count += o.count;
        return *this;
    }
};

/// Absolute error summed over the user's top-n test items only;
/// count = min(n, number of test items).
MaeAccum maeOverTopN(std::span<const ItemRating> userTestRatings,
                     std::span<const std::pair<ItemId, double>> predictions, int n);

/// Ratio metrics from pooled counts. ProtocolError on an empty matrix or a
/// zero MAE count.
Metrics computeMetrics(const ConfusionMatrix& cm, double maeSum, long long maeCount);

/// The six benchmark methods: one similarity measure plus the reliability
/// switch. Neighbor selection is cluster-confined for all of them.
struct MethodSpec {
    std::string name;
    SimilarityMeasure measure;
    bool useReliability = false;
};

MethodSpec methodByName(std::string_view name); // ParamError on unknown
/// Expands "all" and keeps first-occurrence order without duplicates.
std::vector<MethodSpec> expandMethods(std::span<const std::string> names);

/// All-pairs score tables for one training matrix, indexed by user index.
/// Values are bit-identical to the per-pair functions on the same matrix.
struct FoldTables {
    Eigen::MatrixXd nhsm;
    Eigen::MatrixXd pearson;
    Eigen::MatrixXd cosine;
    Eigen::MatrixXd herlocker;
    Eigen::MatrixXd mclaughlin;
    Eigen::MatrixXd ra;

    const Eigen::MatrixXd& forMeasure(MeasureName name) const;
};

FoldTables buildFoldTables(const RatingsMatrix& train, int gamma = 50, int threads = 0);

/// PairScores view over one similarity table plus the shared ra table.
class TablePairScores : public PairScores {
public:
    TablePairScores(const Eigen::MatrixXd& sim, const Eigen::MatrixXd& ra)
        : sim_(sim), ra_(ra) {}
    double similarity(int uIdx, int vIdx) const override { return sim_(uIdx, vIdx); }
    double reliability(int uIdx, int vIdx) const override { return ra_(uIdx, vIdx); }

private:
    const Eigen::MatrixXd& sim_;
    const Eigen::MatrixXd& ra_;
};

/// One (fold, repetition, topN) evaluation cell for one method. The pooled
/// counts are kept alongside the metrics so either averaging mode can be
/// audited from the record.
struct CellRecord {
    int fold = 0;
    int repetition = 0;
    int topN = 0;
    ConfusionMatrix confusion;
    double maeSum = 0.0;
    long long maeCount = 0;
    long long users = 0;
    Metrics metrics;
    long long precisionExcludedUsers = 0; // macro mode only; 0 under micro
    long long recallExcludedUsers = 0;
};

struct MeanMetrics {
    double mae = 0.0;
    double accuracy = 0.0;
    std::optional<double> precision;
    std::optional<double> recall;
};

/// Per-topN means over the fold x repetition cells.
struct TopNSummary {
    int topN = 0;
    MeanMetrics mean;
    int cells = 0;
    int precisionDefinedCells = 0;
    int recallDefinedCells = 0;
    long long precisionExcludedUsers = 0;
    long long recallExcludedUsers = 0;
};

struct MethodReport {
    MethodSpec spec;
    std::vector<CellRecord> cells; // fold-major, then repetition, then topN
    std::vector<TopNSummary> perTopN;
    MeanMetrics acrossTopN;
};

/// Mean of the per-topN means, each topN weighted equally; topN entries with
/// an undefined precision or recall are left out of that metric's mean.
MeanMetrics acrossTopNMeans(std::span<const TopNSummary> perTopN);

/// Per-topN means from raw cells (exposed so the aggregation rule can be
/// exercised on synthetic records).
std::vector<TopNSummary> summarizeCells(std::span<const CellRecord> cells,
                                        std::span<const int> topNValues);

std::uint64_t deriveFcmSeed(std::uint64_t base, int fold, int repetition);

struct ExperimentSetup {
    EvalProtocol protocol;
    FcmConfig fcm; // seed is overwritten per (fold, repetition)
    int neighborCount = 50;
    bool clampPredictions = true;
    Averaging averaging = Averaging::Micro;
    int threads = 0; // 0 = all hardware threads
};

/// Supplies the cluster model for a (fold, repetition) cell; the default
/// fits fresh. The CLI installs a cache-aware provider here.
using ModelProvider =
    std::function<ClusterModel(int fold, int repetition, const RatingsMatrix& train,
                               const FcmConfig& config)>;

/// Full cross-validation benchmark. Fold split and FCM seeds derive from
/// protocol.seed; output is identical for any thread count.
std::vector<MethodReport> runExperiment(const RatingsMatrix& matrix, const ExperimentSetup& setup,
                                        std::span<const MethodSpec> methods,
                                        const ModelProvider& provider = {});

} // namespace fcrec
