#include "fcrec/evaluation.hpp"

#include "fcrec/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

namespace fcrec {

std::string toString(Averaging mode) {
    return mode == Averaging::Micro ? "micro" : "macro";
}

Averaging parseAveraging(std::string_view text) {
    if (text == "micro")
        return Averaging::Micro;
    if (text == "macro")
        return Averaging::Macro;
    throw ParamError("unknown averaging mode '" + std::string(text) + "'");
}

void EvalProtocol::validate(const RatingScale& scale) const {
    if (topNValues.empty())
        throw ParamError("topN list must not be empty");
    for (std::size_t i = 0; i < topNValues.size(); ++i) {
        if (topNValues[i] < 1)
            throw ParamError("topN values must be positive");
        if (i > 0 && topNValues[i] <= topNValues[i - 1])
            throw ParamError("topN values must be strictly increasing");
    }
    if (!scale.contains(relevanceThreshold))
        throw ParamError("relevance threshold " + std::to_string(relevanceThreshold) +
                         " outside the rating scale");
    if (folds < 2)
        throw ParamError("fold count must be at least 2");
    if (repetitions < 1)
        throw ParamError("repetition count must be positive");
}

namespace {

std::vector<std::pair<ItemId, double>> rankPredictions(
    std::span<const std::pair<ItemId, double>> predictions) {
    std::vector<std::pair<ItemId, double>> ranked(predictions.begin(), predictions.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& x, const auto& y) {
        return x.second != y.second ? x.second > y.second : x.first < y.first;
    });
    return ranked;
}

void checkSameItems(std::span<const ItemRating> test,
                    std::span<const std::pair<ItemId, double>> predictions) {
    if (test.size() != predictions.size())
        throw ProtocolError("predictions do not cover the test items: " +
                            std::to_string(predictions.size()) + " predictions for " +
                            std::to_string(test.size()) + " test ratings");
    std::unordered_set<ItemId> items;
    items.reserve(test.size());
    for (const auto& t : test)
        items.insert(t.item);
    // Consume one slot per prediction so duplicates cannot hide a gap.
    for (const auto& p : predictions)
        if (items.erase(p.first) == 0)
            throw ProtocolError("prediction for item " + std::to_string(p.first) +
                                " has no matching test rating");
}

} // namespace

ConfusionMatrix classifyTopN(std::span<const ItemRating> userTestRatings,
                             std::span<const std::pair<ItemId, double>> predictions, int n,
                             Rating threshold) {
    if (n < 1)
        throw ParamError("topN must be positive, got " + std::to_string(n));
    if (userTestRatings.empty())
        throw ProtocolError("cannot classify a user with no test ratings");
    checkSameItems(userTestRatings, predictions);

    const auto ranked = rankPredictions(predictions);
    const auto cut = std::min<std::size_t>(static_cast<std::size_t>(n), ranked.size());
    std::unordered_set<ItemId> topSet;
    std::unordered_map<ItemId, double> predicted;
    predicted.reserve(ranked.size());
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        predicted.emplace(ranked[i].first, ranked[i].second);
        if (i < cut)
            topSet.insert(ranked[i].first);
    }

    ConfusionMatrix cm;
    for (const auto& t : userTestRatings) {
        const double pred = predicted.at(t.item);
        const bool predictedPositive =
            topSet.count(t.item) != 0 && pred >= static_cast<double>(threshold);
        const bool actualPositive = t.value >= threshold;
        if (predictedPositive)
            ++(actualPositive ? cm.d : cm.b);
        else
            ++(actualPositive ? cm.c : cm.a);
    }
    return cm;
}

MaeAccum maeOverTopN(std::span<const ItemRating> userTestRatings,
                     std::span<const std::pair<ItemId, double>> predictions, int n) {
    if (n < 1)
        throw ParamError("topN must be positive, got " + std::to_string(n));
    if (userTestRatings.empty())
        throw ProtocolError("cannot score a user with no test ratings");
    checkSameItems(userTestRatings, predictions);

    std::unordered_map<ItemId, Rating> actual;
    actual.reserve(userTestRatings.size());
    for (const auto& t : userTestRatings)
        actual.emplace(t.item, t.value);

    const auto ranked = rankPredictions(predictions);
    const auto cut = std::min<std::size_t>(static_cast<std::size_t>(n), ranked.size());
    MaeAccum out;
    for (std::size_t i = 0; i < cut; ++i) {
        out.sum += std::abs(ranked[i].second - static_cast<double>(actual.at(ranked[i].first)));
        ++out.count;
    }
    return out;
}

Metrics computeMetrics(const ConfusionMatrix& cm, double maeSum, long long maeCount) {
    if (cm.total() < 1)
        throw ProtocolError("empty confusion matrix");
    if (maeCount < 1)
        throw ProtocolError("no rated recommendations behind the MAE");
    Metrics m;
    m.mae = maeSum / static_cast<double>(maeCount);
    m.accuracy = 100.0 * static_cast<double>(cm.a + cm.d) / static_cast<double>(cm.total());
    if (cm.b + cm.d > 0)
        m.precision = 100.0 * static_cast<double>(cm.d) / static_cast<double>(cm.b + cm.d);
    if (cm.c + cm.d > 0)
        m.recall = 100.0 * static_cast<double>(cm.d) / static_cast<double>(cm.c + cm.d);
    return m;
}

MethodSpec methodByName(std::string_view name) {
    if (name == "fcnhsmra")
        return {"fcnhsmra", {MeasureName::Nhsm, 50}, true};
    if (name == "fnhsm")
        return {"fnhsm", {MeasureName::Nhsm, 50}, false};
    if (name == "pearson")
        return {"pearson", {MeasureName::Pearson, 50}, false};
    if (name == "cosine")
        return {"cosine", {MeasureName::Cosine, 50}, false};
    if (name == "mw")
        return {"mw", {MeasureName::McLaughlinW, 50}, false};
    if (name == "hw")
        return {"hw", {MeasureName::HerlockerW, 50}, false};
    throw ParamError("unknown method '" + std::string(name) + "'");
}

std::vector<MethodSpec> expandMethods(std::span<const std::string> names) {
    static const char* kAll[] = {"fcnhsmra", "fnhsm", "pearson", "cosine", "mw", "hw"};
    std::vector<MethodSpec> out;
    auto push = [&](std::string_view n) {
        auto spec = methodByName(n);
        for (const auto& have : out)
            if (have.name == spec.name)
                return;
        out.push_back(std::move(spec));
    };
    for (const auto& n : names) {
        if (n == "all")
            for (const char* a : kAll)
                push(a);
        else
            push(n);
    }
    if (out.empty())
        throw ParamError("no methods selected");
    return out;
}

const Eigen::MatrixXd& FoldTables::forMeasure(MeasureName name) const {
    switch (name) {
    case MeasureName::Nhsm: return nhsm;
    case MeasureName::Pearson: return pearson;
    case MeasureName::Cosine: return cosine;
    case MeasureName::HerlockerW: return herlocker;
    case MeasureName::McLaughlinW: return mclaughlin;
    }
    throw ParamError("unhandled measure name");
}

FoldTables buildFoldTables(const RatingsMatrix& train, int gamma, int threads) {
    const int n = train.userCount();
    const double rMed = train.scale().median;

    std::vector<double> userMean(static_cast<std::size_t>(n));
    std::vector<double> userSd(static_cast<std::size_t>(n));
    std::vector<double> rowSize(static_cast<std::size_t>(n));
    for (int ui = 0; ui < n; ++ui) {
        const auto stats = userStats(train, train.userIds()[static_cast<std::size_t>(ui)]);
        userMean[static_cast<std::size_t>(ui)] = stats.mean;
        userSd[static_cast<std::size_t>(ui)] = stats.stddev;
        rowSize[static_cast<std::size_t>(ui)] =
            static_cast<double>(train.ratingsOfIndex(ui).size());
    }
    const int itemCount = train.itemCount();
    std::vector<double> itemMean(static_cast<std::size_t>(itemCount));
    std::vector<int> itemRaters(static_cast<std::size_t>(itemCount));
    for (int ii = 0; ii < itemCount; ++ii) {
        const auto stats = itemStats(train, train.itemIds()[static_cast<std::size_t>(ii)]);
        itemMean[static_cast<std::size_t>(ii)] = stats.mean;
        itemRaters[static_cast<std::size_t>(ii)] = stats.raterCount;
    }

    FoldTables t;
    t.nhsm = Eigen::MatrixXd::Zero(n, n);
    t.pearson = Eigen::MatrixXd::Zero(n, n);
    t.cosine = Eigen::MatrixXd::Zero(n, n);
    t.herlocker = Eigen::MatrixXd::Zero(n, n);
    t.mclaughlin = Eigen::MatrixXd::Zero(n, n);
    t.ra = Eigen::MatrixXd::Zero(n, n);

    // Upper triangle only; each worker owns a row slice, so writes never
    // collide and the result is thread-count independent.
    parallelFor(0, n, threads, [&](int u) {
        const auto rowU = train.ratingsOfIndex(u);
        for (int v = u + 1; v < n; ++v) {
            const auto rowV = train.ratingsOfIndex(v);
            const auto acc = accumulatePair(
                rowU, rowV, rMed,
                [&](ItemId item) { return itemMean[static_cast<std::size_t>(train.itemIndex(item))]; },
                [&](ItemId item) {
                    return itemRaters[static_cast<std::size_t>(train.itemIndex(item))];
                });
            const double pearson = pearsonFromSums(acc);
            t.pearson(u, v) = pearson;
            t.cosine(u, v) = cosineFromSums(acc);
            t.herlocker(u, v) = weightedPearson(pearson, acc.coRated, MeasureName::HerlockerW, gamma);
            t.mclaughlin(u, v) =
                weightedPearson(pearson, acc.coRated, MeasureName::McLaughlinW, gamma);
            t.ra(u, v) = acc.ra;
            if (acc.pss != 0.0) {
                const double jaccard = static_cast<double>(acc.coRated) /
                                       (rowSize[static_cast<std::size_t>(u)] *
                                        rowSize[static_cast<std::size_t>(v)]);
                t.nhsm(u, v) = acc.pss * jaccard *
                               urpKernel(userMean[static_cast<std::size_t>(u)],
                                         userSd[static_cast<std::size_t>(u)],
                                         userMean[static_cast<std::size_t>(v)],
                                         userSd[static_cast<std::size_t>(v)]);
            }
        }
    });

    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
            t.nhsm(v, u) = t.nhsm(u, v);
            t.pearson(v, u) = t.pearson(u, v);
            t.cosine(v, u) = t.cosine(u, v);
            t.herlocker(v, u) = t.herlocker(u, v);
            t.mclaughlin(v, u) = t.mclaughlin(u, v);
            t.ra(v, u) = t.ra(u, v);
        }
    }
    return t;
}

MeanMetrics acrossTopNMeans(std::span<const TopNSummary> perTopN) {
    MeanMetrics out;
    double maeSum = 0.0;
    double accSum = 0.0;
    double precSum = 0.0;
    double recSum = 0.0;
    int count = 0;
    int precCount = 0;
    int recCount = 0;
    for (const auto& s : perTopN) {
        maeSum += s.mean.mae;
        accSum += s.mean.accuracy;
        ++count;
        if (s.mean.precision) {
            precSum += *s.mean.precision;
            ++precCount;
        }
        if (s.mean.recall) {
            recSum += *s.mean.recall;
            ++recCount;
        }
    }
    if (count == 0)
        throw ProtocolError("no per-topN summaries to average");
    out.mae = maeSum / count;
    out.accuracy = accSum / count;
    if (precCount > 0)
        out.precision = precSum / precCount;
    if (recCount > 0)
        out.recall = recSum / recCount;
    return out;
}

std::vector<TopNSummary> summarizeCells(std::span<const CellRecord> cells,
                                        std::span<const int> topNValues) {
    std::vector<TopNSummary> out;
    out.reserve(topNValues.size());
    for (int n : topNValues) {
        TopNSummary s;
        s.topN = n;
        double maeSum = 0.0;
        double accSum = 0.0;
        double precSum = 0.0;
        double recSum = 0.0;
        for (const auto& cell : cells) {
            if (cell.topN != n)
                continue;
            ++s.cells;
            maeSum += cell.metrics.mae;
            accSum += cell.metrics.accuracy;
            if (cell.metrics.precision) {
                precSum += *cell.metrics.precision;
                ++s.precisionDefinedCells;
            }
            if (cell.metrics.recall) {
                recSum += *cell.metrics.recall;
                ++s.recallDefinedCells;
            }
            s.precisionExcludedUsers += cell.precisionExcludedUsers;
            s.recallExcludedUsers += cell.recallExcludedUsers;
        }
        if (s.cells > 0) {
            s.mean.mae = maeSum / s.cells;
            s.mean.accuracy = accSum / s.cells;
            if (s.precisionDefinedCells > 0)
                s.mean.precision = precSum / s.precisionDefinedCells;
            if (s.recallDefinedCells > 0)
                s.mean.recall = recSum / s.recallDefinedCells;
        }
        out.push_back(s);
    }
    return out;
}

std::uint64_t deriveFcmSeed(std::uint64_t base, int fold, int repetition) {
    std::uint64_t z = base +
                      0x9E3779B97F4A7C15ull * (static_cast<std::uint64_t>(fold) * 1000003ull +
                                               static_cast<std::uint64_t>(repetition) + 1ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

namespace {

struct TestUser {
    UserId user;
    std::vector<ItemRating> items;
};

std::vector<TestUser> groupTestUsers(std::span<const RatingEntry> test) {
    // Fold test lists are already sorted by (user, item).
    std::vector<TestUser> out;
    for (const auto& e : test) {
        if (out.empty() || out.back().user != e.user)
            out.push_back({e.user, {}});
        out.back().items.push_back({e.item, e.value});
    }
    return out;
}

struct PerTopNOutcome {
    ConfusionMatrix cm;
    MaeAccum mae;
};

} // namespace

std::vector<MethodReport> runExperiment(const RatingsMatrix& matrix, const ExperimentSetup& setup,
                                        std::span<const MethodSpec> methods,
                                        const ModelProvider& provider) {
    setup.protocol.validate(matrix.scale());
    FcmConfig fcmCheck = setup.fcm;
    fcmCheck.validate();
    if (setup.neighborCount < 1)
        throw ParamError("neighbor count must be positive");
    if (methods.empty())
        throw ParamError("no methods selected");
    int gamma = 50;
    bool gammaSet = false;
    for (const auto& m : methods) {
        if (m.measure.name == MeasureName::HerlockerW || m.measure.name == MeasureName::McLaughlinW) {
            if (gammaSet && gamma != m.measure.gamma)
                throw ParamError("weighted methods disagree on gamma");
            gamma = m.measure.gamma;
            gammaSet = true;
        }
    }

    const auto folds = kFoldSplit(matrix, setup.protocol.folds, setup.protocol.seed);
    const Rating threshold = setup.protocol.relevanceThreshold;
    const auto& topN = setup.protocol.topNValues;
    const double medianValue = static_cast<double>(matrix.scale().median);

    std::vector<MethodReport> reports(methods.size());
    for (std::size_t mi = 0; mi < methods.size(); ++mi)
        reports[mi].spec = methods[mi];

    for (const auto& fold : folds) {
        const RatingsMatrix& train = fold.train;
        const FoldTables tables = buildFoldTables(train, gamma, setup.threads);
        const auto testUsers = groupTestUsers(fold.test);
        const int userCount = static_cast<int>(testUsers.size());

        for (int rep = 0; rep < setup.protocol.repetitions; ++rep) {
            FcmConfig fcmConfig = setup.fcm;
            fcmConfig.seed = deriveFcmSeed(setup.protocol.seed, fold.foldIndex, rep);
            const ClusterModel model = provider ? provider(fold.foldIndex, rep, train, fcmConfig)
                                                : fitFcm(train, fcmConfig);

            for (std::size_t mi = 0; mi < methods.size(); ++mi) {
                const MethodSpec& method = methods[mi];
                const TablePairScores scores(tables.forMeasure(method.measure.name), tables.ra);
                PredictorConfig pc;
                pc.neighborCount = setup.neighborCount;
                pc.measure = method.measure;
                pc.useReliability = method.useReliability;
                pc.clampPredictions = setup.clampPredictions;
                const Predictor predictor(train, model, pc, scores);

                std::vector<std::vector<PerTopNOutcome>> slots(
                    static_cast<std::size_t>(userCount));
                parallelFor(0, userCount, setup.threads, [&](int t) {
                    const TestUser& tu = testUsers[static_cast<std::size_t>(t)];
                    std::vector<std::pair<ItemId, double>> preds;
                    preds.reserve(tu.items.size());
                    if (train.userIndex(tu.user) < 0) {
                        // User entirely absent from this fold's training data:
                        // predict the scale median for everything.
                        for (const auto& it : tu.items)
                            preds.emplace_back(it.item, medianValue);
                    } else {
                        for (const auto& it : tu.items)
                            preds.emplace_back(it.item, predictor.predict(tu.user, it.item).value);
                    }
                    auto& slot = slots[static_cast<std::size_t>(t)];
                    slot.resize(topN.size());
                    for (std::size_t k = 0; k < topN.size(); ++k) {
                        slot[k].cm = classifyTopN(tu.items, preds, topN[k], threshold);
                        slot[k].mae = maeOverTopN(tu.items, preds, topN[k]);
                    }
                });

                for (std::size_t k = 0; k < topN.size(); ++k) {
                    CellRecord cell;
                    cell.fold = fold.foldIndex;
                    cell.repetition = rep;
                    cell.topN = topN[k];
                    cell.users = userCount;

                    double userMaeSum = 0.0;
                    double userAccSum = 0.0;
                    double userPrecSum = 0.0;
                    double userRecSum = 0.0;
                    long long precDefined = 0;
                    long long recDefined = 0;
                    for (const auto& slot : slots) {
                        const auto& o = slot[k];
                        cell.confusion += o.cm;
                        cell.maeSum += o.mae.sum;
                        cell.maeCount += o.mae.count;
                        if (setup.averaging == Averaging::Macro) {
                            const Metrics um = computeMetrics(o.cm, o.mae.sum, o.mae.count);
                            userMaeSum += um.mae;
                            userAccSum += um.accuracy;
                            if (um.precision) {
                                userPrecSum += *um.precision;
                                ++precDefined;
                            }
                            if (um.recall) {
                                userRecSum += *um.recall;
                                ++recDefined;
                            }
                        }
                    }
                    if (setup.averaging == Averaging::Micro) {
                        cell.metrics = computeMetrics(cell.confusion, cell.maeSum, cell.maeCount);
                    } else {
                        cell.metrics.mae = userMaeSum / userCount;
                        cell.metrics.accuracy = userAccSum / userCount;
                        if (precDefined > 0)
                            cell.metrics.precision = userPrecSum / static_cast<double>(precDefined);
                        if (recDefined > 0)
                            cell.metrics.recall = userRecSum / static_cast<double>(recDefined);
                        cell.precisionExcludedUsers = userCount - precDefined;
                        cell.recallExcludedUsers = userCount - recDefined;
                    }
                    reports[mi].cells.push_back(cell);
                }
            }
        }
    }

    for (auto& report : reports) {
        report.perTopN = summarizeCells(report.cells, topN);
        report.acrossTopN = acrossTopNMeans(report.perTopN);
    }
    return reports;
}

} // namespace fcrec
