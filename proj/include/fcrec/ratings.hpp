#ifndef FCREC_RATINGS_HPP
#define FCREC_RATINGS_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "fcrec/errors.hpp"

namespace fcrec {

using UserId = std::int32_t;
using ItemId = std::int32_t;
using Rating = std::int32_t;

/// Integer rating scale with its median value r_med.
struct RatingScale {
    Rating min = 1;
    Rating max = 5;
    Rating median = 3;

    bool operator==(const RatingScale&) const = default;

    /// Throws ParamError unless min < max, min <= median <= max and the
    /// median is the rounded midpoint of the scale.
    void validate() const;
    bool contains(Rating r) const { return r >= min && r <= max; }
};

struct RatingEntry {
    UserId user;
    ItemId item;
    Rating value;

    bool operator==(const RatingEntry&) const = default;
};

/// One cell of a user's rating row.
struct ItemRating {
    ItemId item;
    Rating value;

    bool operator==(const ItemRating&) const = default;
};

/// One cell of an item's rater column.
struct UserRating {
    UserId user;
    Rating value;

    bool operator==(const UserRating&) const = default;
};

/// Sparse user x item rating matrix, immutable after construction.
///
/// Both the per-user item row I_u and the per-item rater column are kept
/// sorted so neither lookup scans all entries. User and item id lists are
/// ascending and define the canonical index order used throughout.
class RatingsMatrix {
public:
    RatingsMatrix() = default;

    /// Builds a matrix from entries. Throws IngestError on duplicate
    /// (user, item) pairs or out-of-scale ratings.
    static RatingsMatrix fromEntries(std::vector<RatingEntry> entries,
                                     RatingScale scale = RatingScale{});

    const RatingScale& scale() const { return scale_; }
    int userCount() const { return static_cast<int>(userIds_.size()); }
    int itemCount() const { return static_cast<int>(itemIds_.size()); }
    std::size_t entryCount() const { return entryCount_; }

    const std::vector<UserId>& userIds() const { return userIds_; }
    const std::vector<ItemId>& itemIds() const { return itemIds_; }

    bool hasUser(UserId u) const { return userIndex(u) >= 0; }
    bool hasItem(ItemId i) const { return itemIndex(i) >= 0; }

    /// Dense index of a user id, -1 if absent.
    int userIndex(UserId u) const;
    /// Dense index of an item id, -1 if absent.
    int itemIndex(ItemId i) const;

    /// Rating row of a user, sorted by item id. Throws LookupError for
    /// unknown users.
    std::span<const ItemRating> ratingsOf(UserId u) const;
    std::span<const ItemRating> ratingsOfIndex(int uIdx) const { return rows_[uIdx]; }

    /// Rater column of an item, sorted by user id. Unknown items yield an
    /// empty column (item existence is not required anywhere downstream).
    std::span<const UserRating> ratersOf(ItemId i) const;
    std::span<const UserRating> ratersOfIndex(int iIdx) const { return cols_[iIdx]; }

    std::optional<Rating> rating(UserId u, ItemId i) const;

    /// All entries in canonical (user, item) order.
    std::vector<RatingEntry> entries() const;

    bool operator==(const RatingsMatrix& other) const;

private:
    RatingScale scale_;
    std::vector<UserId> userIds_;
    std::vector<ItemId> itemIds_;
    std::unordered_map<UserId, int> userIdx_;
    std::unordered_map<ItemId, int> itemIdx_;
    std::vector<std::vector<ItemRating>> rows_;
    std::vector<std::vector<UserRating>> cols_;
    std::size_t entryCount_ = 0;
};

/// Per-user statistics. stddev is the population form (divide by |I_u|).
struct UserStats {
    UserId user;
    double mean;
    double stddev;
    int count;
};

/// Per-item statistics over the matrix they were computed from.
struct ItemStats {
    ItemId item;
    double mean;
    int raterCount;
};

/// Mean and population stddev of a user's ratings. Throws LookupError for
/// unknown users; a user carrying no ratings falls back to the scale median.
UserStats userStats(const RatingsMatrix& matrix, UserId user);

/// Mean rating and rater count of an item. Items absent from the matrix
/// fall back to mean = scale median, raterCount = 0.
ItemStats itemStats(const RatingsMatrix& matrix, ItemId item);

/// Loads a tab-separated `userId itemId rating timestamp` file. Timestamps
/// are discarded. Throws IngestError naming the offending line on malformed
/// input, out-of-scale ratings and duplicate (user, item) pairs.
RatingsMatrix loadMovieLens(const std::filesystem::path& path,
                            RatingScale scale = RatingScale{});

/// Writes the matrix back in the same format (canonical entry order,
/// timestamp column fixed at 0).
void saveMovieLens(const RatingsMatrix& matrix, std::ostream& out);
void saveMovieLens(const RatingsMatrix& matrix, const std::filesystem::path& path);

} // namespace fcrec

#endif // FCREC_RATINGS_HPP
