#include "fcrec/model_io.hpp"

#include "json.hpp"

#include <cstdio>
#include <fstream>

namespace fcrec {

using nlohmann::json;

std::string dataChecksum(const RatingsMatrix& matrix) {
    std::uint64_t hash = 0xcbf29ce484222325ull;
    auto feed = [&](const std::string& text) {
        for (unsigned char ch : text) {
            hash ^= ch;
            hash *= 0x100000001b3ull;
        }
    };
    for (const auto& e : matrix.entries())
        feed(std::to_string(e.user) + '\t' + std::to_string(e.item) + '\t' +
             std::to_string(e.value) + '\n');
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

ModelCacheHeader makeCacheHeader(const RatingsMatrix& matrix, const FcmConfig& fcm,
                                 const EvalProtocol& protocol) {
    ModelCacheHeader h;
    h.checksum = dataChecksum(matrix);
    h.clusters = fcm.clusterCount;
    h.fuzzifier = fcm.fuzzifier;
    h.tolerance = fcm.tolerance;
    h.maxIterations = fcm.maxIterations;
    h.baseSeed = protocol.seed;
    h.folds = protocol.folds;
    h.repetitions = protocol.repetitions;
    return h;
}

const ClusterModel* CachedModels::find(int fold, int repetition) const {
    for (const auto& e : entries)
        if (e.fold == fold && e.repetition == repetition)
            return &e.model;
    return nullptr;
}

namespace {

json matrixToJson(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrixFromJson(const json& rows, const char* what) {
    if (!rows.is_array())
        throw IngestError(std::string("model cache: ") + what + " is not an array");
    const auto r = static_cast<Eigen::Index>(rows.size());
    Eigen::Index c = -1;
    Eigen::MatrixXd m;
    for (Eigen::Index i = 0; i < r; ++i) {
        const auto& row = rows[static_cast<std::size_t>(i)];
        if (!row.is_array())
            throw IngestError(std::string("model cache: ") + what + " row is not an array");
        if (c < 0) {
            c = static_cast<Eigen::Index>(row.size());
            m.resize(r, c);
        } else if (static_cast<Eigen::Index>(row.size()) != c) {
            throw IngestError(std::string("model cache: ragged ") + what);
        }
        for (Eigen::Index j = 0; j < c; ++j)
            m(i, j) = row[static_cast<std::size_t>(j)].get<double>();
    }
    if (r == 0)
        m.resize(0, 0);
    return m;
}

json modelToJson(const ClusterModel& model) {
    return json{{"config",
                 {{"cluster_count", model.config.clusterCount},
                  {"fuzzifier", model.config.fuzzifier},
                  {"max_iterations", model.config.maxIterations},
                  {"tolerance", model.config.tolerance},
                  {"seed", model.config.seed}}},
                {"user_order", model.userOrder},
                {"item_order", model.itemOrder},
                {"centers", matrixToJson(model.centers)},
                {"memberships", matrixToJson(model.memberships)},
                {"assignments", model.assignments},
                {"objective_history", model.objectiveHistory},
                {"iterations", model.iterations},
                {"converged", model.converged}};
}

ClusterModel modelFromJson(const json& j) {
    ClusterModel model;
    const auto& cfg = j.at("config");
    model.config.clusterCount = cfg.at("cluster_count").get<int>();
    model.config.fuzzifier = cfg.at("fuzzifier").get<double>();
    model.config.maxIterations = cfg.at("max_iterations").get<int>();
    model.config.tolerance = cfg.at("tolerance").get<double>();
    model.config.seed = cfg.at("seed").get<std::uint64_t>();
    model.userOrder = j.at("user_order").get<std::vector<UserId>>();
    model.itemOrder = j.at("item_order").get<std::vector<ItemId>>();
    model.centers = matrixFromJson(j.at("centers"), "centers");
    model.memberships = matrixFromJson(j.at("memberships"), "memberships");
    model.assignments = j.at("assignments").get<std::vector<int>>();
    model.objectiveHistory = j.at("objective_history").get<std::vector<double>>();
    model.iterations = j.at("iterations").get<int>();
    model.converged = j.at("converged").get<bool>();

    const auto users = static_cast<Eigen::Index>(model.userOrder.size());
    if (model.memberships.rows() != users ||
        model.assignments.size() != model.userOrder.size() ||
        model.centers.rows() != model.config.clusterCount ||
        model.centers.cols() != static_cast<Eigen::Index>(model.itemOrder.size()) ||
        (users > 0 && model.memberships.cols() != model.config.clusterCount))
        throw IngestError("model cache: inconsistent model shapes");
    return model;
}

json headerToJson(const ModelCacheHeader& h) {
    return json{{"format_version", h.formatVersion}, {"data_checksum", h.checksum},
                {"clusters", h.clusters},           {"fuzzifier", h.fuzzifier},
                {"tolerance", h.tolerance},         {"max_iterations", h.maxIterations},
                {"base_seed", h.baseSeed},          {"folds", h.folds},
                {"repetitions", h.repetitions}};
}

ModelCacheHeader headerFromJson(const json& j) {
    ModelCacheHeader h;
    h.formatVersion = j.at("format_version").get<int>();
    h.checksum = j.at("data_checksum").get<std::string>();
    h.clusters = j.at("clusters").get<int>();
    h.fuzzifier = j.at("fuzzifier").get<double>();
    h.tolerance = j.at("tolerance").get<double>();
    h.maxIterations = j.at("max_iterations").get<int>();
    h.baseSeed = j.at("base_seed").get<std::uint64_t>();
    h.folds = j.at("folds").get<int>();
    h.repetitions = j.at("repetitions").get<int>();
    return h;
}

} // namespace

void writeModelCache(const std::filesystem::path& path, const CachedModels& cache) {
    json entries = json::array();
    for (const auto& e : cache.entries)
        entries.push_back(
            {{"fold", e.fold}, {"repetition", e.repetition}, {"model", modelToJson(e.model)}});
    const json doc{{"header", headerToJson(cache.header)}, {"models", std::move(entries)}};

    std::ofstream out(path);
    if (!out)
        throw IngestError("cannot open model cache for writing: " + path.string());
    out << doc.dump();
    out << '\n';
    if (!out.good())
        throw IngestError("model cache write failed: " + path.string());
}

CachedModels readModelCache(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw IngestError("cannot open model cache: " + path.string());
    json doc;
    try {
        doc = json::parse(in);
        CachedModels cache;
        cache.header = headerFromJson(doc.at("header"));
        if (cache.header.formatVersion != ModelCacheHeader{}.formatVersion)
            throw IngestError("model cache: unsupported format version " +
                              std::to_string(cache.header.formatVersion));
        for (const auto& e : doc.at("models"))
            cache.entries.push_back({e.at("fold").get<int>(), e.at("repetition").get<int>(),
                                     modelFromJson(e.at("model"))});
        return cache;
    } catch (const json::exception& err) {
        throw IngestError("model cache " + path.string() + ": " + err.what());
    }
}

} // namespace fcrec
