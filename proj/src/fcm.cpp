#include "fcrec/fcm.hpp"

#include <algorithm>
#include <random>
#include <string>

namespace fcrec {

void FcmConfig::validate() const {
    if (clusterCount < 2)
        throw ParamError("cluster count must be at least 2, got " + std::to_string(clusterCount));
    if (!(fuzzifier > 1.0))
        throw ParamError("fuzzifier must exceed 1");
    if (maxIterations < 1)
        throw ParamError("max iterations must be positive");
    if (!(tolerance > 0.0))
        throw ParamError("tolerance must be positive");
}

int ClusterModel::userIndexOf(UserId user) const {
    // userOrder is ascending (it is the training matrix's sorted id list).
    auto it = std::lower_bound(userOrder.begin(), userOrder.end(), user);
    if (it == userOrder.end() || *it != user)
        return -1;
    return static_cast<int>(it - userOrder.begin());
}

Eigen::RowVectorXd ClusterModel::membershipOf(UserId user) const {
    const int idx = userIndexOf(user);
    if (idx < 0)
        throw LookupError("user " + std::to_string(user) + " not in cluster model");
    return memberships.row(idx);
}

int ClusterModel::assignmentOf(UserId user) const {
    const int idx = userIndexOf(user);
    if (idx < 0)
        throw LookupError("user " + std::to_string(user) + " not in cluster model");
    return assignments[static_cast<std::size_t>(idx)];
}

std::vector<int> ClusterModel::clusterSizes() const {
    std::vector<int> sizes(static_cast<std::size_t>(config.clusterCount), 0);
    for (int a : assignments)
        ++sizes[static_cast<std::size_t>(a)];
    return sizes;
}

bool ClusterModel::hasEmptyCluster() const {
    const auto sizes = clusterSizes();
    return std::any_of(sizes.begin(), sizes.end(), [](int s) { return s == 0; });
}

namespace {

bool sameMatrix(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() &&
           (a.rows() == 0 || (a.array() == b.array()).all());
}

} // namespace

bool ClusterModel::operator==(const ClusterModel& other) const {
    return config == other.config && userOrder == other.userOrder &&
           itemOrder == other.itemOrder && sameMatrix(centers, other.centers) &&
           sameMatrix(memberships, other.memberships) && assignments == other.assignments &&
           objectiveHistory == other.objectiveHistory && iterations == other.iterations &&
           converged == other.converged;
}

Eigen::VectorXd userVector(const RatingsMatrix& matrix, UserId user) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(matrix.itemCount());
    for (const auto& cell : matrix.ratingsOf(user))
        v(matrix.itemIndex(cell.item)) = cell.value;
    return v;
}

Eigen::MatrixXd buildUserMatrix(const RatingsMatrix& matrix) {
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(matrix.userCount(), matrix.itemCount());
    for (int ui = 0; ui < matrix.userCount(); ++ui)
        for (const auto& cell : matrix.ratingsOfIndex(ui))
            x(ui, matrix.itemIndex(cell.item)) = cell.value;
    return x;
}

int defuzzifyCog(const std::vector<double>& degrees) {
    return defuzzifyCog(Eigen::Map<const Eigen::VectorXd>(degrees.data(),
                                                          static_cast<Eigen::Index>(degrees.size())));
}

namespace {

// Fixed-layout uniform draw in [0, 1) so initialization does not depend on
// the standard library's distribution internals.
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace

ClusterModel fitFcm(const RatingsMatrix& matrix, const FcmConfig& config,
                    const FcmObserver& observer) {
    config.validate();
    const int n = matrix.userCount();
    const int c = config.clusterCount;
    const int d = matrix.itemCount();
    if (n < c)
        throw ParamError("cannot fit " + std::to_string(c) + " clusters on " + std::to_string(n) +
                         " users");

    const Eigen::MatrixXd x = buildUserMatrix(matrix);

    Eigen::MatrixXd u(n, c);
    std::mt19937_64 rng(config.seed);
    for (int i = 0; i < n; ++i) {
        double rowSum = 0.0;
        for (int k = 0; k < c; ++k) {
            u(i, k) = uniform01(rng);
            rowSum += u(i, k);
        }
        if (rowSum > 0.0)
            u.row(i) /= rowSum;
        else
            u.row(i).setConstant(1.0 / c);
    }

    const double m = config.fuzzifier;
    const double e = 1.0 / (m - 1.0);
    Eigen::MatrixXd centers = Eigen::MatrixXd::Zero(c, d);
    Eigen::MatrixXd d2(n, c);
    Eigen::MatrixXd uNext(n, c);

    ClusterModel model;
    model.config = config;
    model.userOrder = matrix.userIds();
    model.itemOrder = matrix.itemIds();

    for (int iter = 1; iter <= config.maxIterations; ++iter) {
        const Eigen::MatrixXd w = u.array().pow(m);
        for (int k = 0; k < c; ++k) {
            const double denom = w.col(k).sum();
            if (denom > 0.0)
                centers.row(k) = (w.col(k).transpose() * x) / denom;
            // A zero column cannot arise from normalized random rows; if it
            // ever did, the previous center is simply kept.
        }

        for (int k = 0; k < c; ++k)
            d2.col(k) = (x.rowwise() - centers.row(k)).rowwise().squaredNorm();

        for (int i = 0; i < n; ++i) {
            int zeroAt = -1;
            for (int k = 0; k < c; ++k) {
                if (d2(i, k) == 0.0) {
                    zeroAt = k;
                    break;
                }
            }
            if (zeroAt >= 0) {
                uNext.row(i).setZero();
                uNext(i, zeroAt) = 1.0;
                continue;
            }
            for (int k = 0; k < c; ++k) {
                double s = 0.0;
                for (int j = 0; j < c; ++j)
                    s += std::pow(d2(i, k) / d2(i, j), e);
                uNext(i, k) = 1.0 / s;
            }
        }

        const double delta = (uNext - u).cwiseAbs().maxCoeff();
        u.swap(uNext);
        const double objective = (u.array().pow(m) * d2.array()).sum();
        model.objectiveHistory.push_back(objective);
        model.iterations = iter;
        if (observer)
            observer({iter, delta, objective, u});
        if (delta < config.tolerance) {
            model.converged = true;
            break;
        }
    }

    model.centers = std::move(centers);
    model.memberships = std::move(u);
    model.assignments.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        model.assignments[static_cast<std::size_t>(i)] = defuzzifyCog(model.memberships.row(i));
    return model;
}

std::vector<UserId> clusterMembers(const ClusterModel& model, int cluster) {
    if (cluster < 0 || cluster >= model.config.clusterCount)
        throw ParamError("cluster index " + std::to_string(cluster) + " out of range");
    std::vector<UserId> members;
    for (std::size_t i = 0; i < model.assignments.size(); ++i)
        if (model.assignments[i] == cluster)
            members.push_back(model.userOrder[i]);
    return members;
}

} // namespace fcrec
