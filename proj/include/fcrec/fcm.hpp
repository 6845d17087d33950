#pragma once

#include "fcrec/ratings.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace fcrec {

struct FcmConfig {
    int clusterCount = 3;
    double fuzzifier = 2.0;
    int maxIterations = 100;
    double tolerance = 1e-4;
    std::uint64_t seed = 0;

    bool operator==(const FcmConfig&) const = default;
    void validate() const;
};

/// Fitted fuzzy c-means model over the users of one training matrix.
///
/// Row i of `memberships` belongs to userOrder[i]; row k of `centers` is the
/// k-th cluster center over `itemOrder`. Assignments are the COG-defuzzified
/// memberships, 0-based.
struct ClusterModel {
    FcmConfig config;
    std::vector<UserId> userOrder;
    std::vector<ItemId> itemOrder;
    Eigen::MatrixXd centers;     // clusterCount x |items|
    Eigen::MatrixXd memberships; // |users| x clusterCount
    std::vector<int> assignments;
    std::vector<double> objectiveHistory; // J_m after each iteration
    int iterations = 0;
    bool converged = false;

    int userIndexOf(UserId user) const; // -1 if absent
    Eigen::RowVectorXd membershipOf(UserId user) const;
    int assignmentOf(UserId user) const;
    std::vector<int> clusterSizes() const;
    bool hasEmptyCluster() const;

    bool operator==(const ClusterModel& other) const;
};

/// Zero-filled rating vector of one user over the matrix's item ordering.
Eigen::VectorXd userVector(const RatingsMatrix& matrix, UserId user);

/// Stacks userVector rows for every user, in userIds() order.
Eigen::MatrixXd buildUserMatrix(const RatingsMatrix& matrix);

/// Center of gravity over 1-based cluster labels, rounded half away from
/// zero, clamped, returned 0-based. Degrees must be non-negative with a
/// positive sum.
template <typename Derived>
int defuzzifyCog(const Eigen::MatrixBase<Derived>& degrees) {
    const auto c = degrees.size();
    double weighted = 0.0;
    double total = 0.0;
    for (Eigen::Index k = 0; k < c; ++k) {
        const double mu = degrees(k);
        if (mu < 0.0)
            throw ParamError("negative membership degree");
        weighted += static_cast<double>(k + 1) * mu;
        total += mu;
    }
    if (total <= 0.0)
        throw ParamError("membership degrees sum to zero");
    const double g = weighted / total;
    auto label = static_cast<long>(std::round(g));
    if (label < 1)
        label = 1;
    if (label > static_cast<long>(c))
        label = static_cast<long>(c);
    return static_cast<int>(label - 1);
}

int defuzzifyCog(const std::vector<double>& degrees);

/// Per-iteration snapshot handed to a fitFcm observer (used by tests to
/// check invariants mid-run).
struct FcmIterate {
    int iteration;
    double maxDelta;
    double objective;
    const Eigen::MatrixXd& memberships;
};

using FcmObserver = std::function<void(const FcmIterate&)>;

/// Fits fuzzy c-means on the matrix's users. Deterministic in (matrix,
/// config); non-convergence within maxIterations returns the last iterate
/// with converged = false.
ClusterModel fitFcm(const RatingsMatrix& matrix, const FcmConfig& config,
                    const FcmObserver& observer = {});

/// Users assigned to one cluster, ascending by id.
std::vector<UserId> clusterMembers(const ClusterModel& model, int cluster);

} // namespace fcrec
