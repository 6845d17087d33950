#include "fcrec/ratings.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <ostream>
#include <sstream>

namespace fcrec {

void RatingScale::validate() const {
    if (min >= max)
        throw ParamError("rating scale: min must be below max");
    if (median < min || median > max)
        throw ParamError("rating scale: median outside [min, max]");
    const auto midpoint = static_cast<Rating>(std::llround((min + max) / 2.0));
    if (median != midpoint)
        throw ParamError("rating scale: median is not the rounded midpoint");
}

RatingsMatrix RatingsMatrix::fromEntries(std::vector<RatingEntry> entries, RatingScale scale) {
    scale.validate();

    std::sort(entries.begin(), entries.end(), [](const RatingEntry& a, const RatingEntry& b) {
        return a.user != b.user ? a.user < b.user : a.item < b.item;
    });
    for (std::size_t i = 1; i < entries.size(); ++i) {
        if (entries[i].user == entries[i - 1].user && entries[i].item == entries[i - 1].item)
            throw IngestError("duplicate rating for user " + std::to_string(entries[i].user) +
                              ", item " + std::to_string(entries[i].item));
    }
    for (const auto& e : entries) {
        if (!scale.contains(e.value))
            throw IngestError("rating " + std::to_string(e.value) + " outside scale for user " +
                              std::to_string(e.user) + ", item " + std::to_string(e.item));
    }

    RatingsMatrix m;
    m.scale_ = scale;
    m.entryCount_ = entries.size();

    for (const auto& e : entries) {
        m.userIds_.push_back(e.user);
        m.itemIds_.push_back(e.item);
    }
    std::sort(m.userIds_.begin(), m.userIds_.end());
    m.userIds_.erase(std::unique(m.userIds_.begin(), m.userIds_.end()), m.userIds_.end());
    std::sort(m.itemIds_.begin(), m.itemIds_.end());
    m.itemIds_.erase(std::unique(m.itemIds_.begin(), m.itemIds_.end()), m.itemIds_.end());

    m.userIdx_.reserve(m.userIds_.size());
    for (std::size_t i = 0; i < m.userIds_.size(); ++i)
        m.userIdx_.emplace(m.userIds_[i], static_cast<int>(i));
    m.itemIdx_.reserve(m.itemIds_.size());
    for (std::size_t i = 0; i < m.itemIds_.size(); ++i)
        m.itemIdx_.emplace(m.itemIds_[i], static_cast<int>(i));

    m.rows_.resize(m.userIds_.size());
    m.cols_.resize(m.itemIds_.size());
    for (const auto& e : entries) {
        m.rows_[static_cast<std::size_t>(m.userIndex(e.user))].push_back({e.item, e.value});
        m.cols_[static_cast<std::size_t>(m.itemIndex(e.item))].push_back({e.user, e.value});
    }
    // Rows come out item-sorted from the entry sort; columns need their own pass.
    for (auto& col : m.cols_)
        std::sort(col.begin(), col.end(),
                  [](const UserRating& a, const UserRating& b) { return a.user < b.user; });
    return m;
}

int RatingsMatrix::userIndex(UserId u) const {
    auto it = userIdx_.find(u);
    return it == userIdx_.end() ? -1 : it->second;
}

int RatingsMatrix::itemIndex(ItemId i) const {
    auto it = itemIdx_.find(i);
    return it == itemIdx_.end() ? -1 : it->second;
}

std::span<const ItemRating> RatingsMatrix::ratingsOf(UserId u) const {
    const int idx = userIndex(u);
    if (idx < 0)
        throw LookupError("unknown user " + std::to_string(u));
    return rows_[static_cast<std::size_t>(idx)];
}

std::span<const UserRating> RatingsMatrix::ratersOf(ItemId i) const {
    const int idx = itemIndex(i);
    if (idx < 0)
        return {};
    return cols_[static_cast<std::size_t>(idx)];
}

std::optional<Rating> RatingsMatrix::rating(UserId u, ItemId i) const {
    const int idx = userIndex(u);
    if (idx < 0)
        return std::nullopt;
    const auto& row = rows_[static_cast<std::size_t>(idx)];
    auto it = std::lower_bound(row.begin(), row.end(), i,
                               [](const ItemRating& a, ItemId b) { return a.item < b; });
    if (it == row.end() || it->item != i)
        return std::nullopt;
    return it->value;
}

std::vector<RatingEntry> RatingsMatrix::entries() const {
    std::vector<RatingEntry> out;
    out.reserve(entryCount_);
    for (std::size_t ui = 0; ui < userIds_.size(); ++ui)
        for (const auto& cell : rows_[ui])
            out.push_back({userIds_[ui], cell.item, cell.value});
    return out;
}

bool RatingsMatrix::operator==(const RatingsMatrix& other) const {
    return scale_ == other.scale_ && userIds_ == other.userIds_ && itemIds_ == other.itemIds_ &&
           rows_ == other.rows_;
}

UserStats userStats(const RatingsMatrix& matrix, UserId user) {
    const auto row = matrix.ratingsOf(user);
    const int n = static_cast<int>(row.size());
    if (n == 0)
        return {user, static_cast<double>(matrix.scale().median), 0.0, 0};
    double sum = 0.0;
    for (const auto& cell : row)
        sum += cell.value;
    const double mean = sum / n;
    double sq = 0.0;
    for (const auto& cell : row) {
        const double d = cell.value - mean;
        sq += d * d;
    }
    return {user, mean, std::sqrt(sq / n), n};
}

ItemStats itemStats(const RatingsMatrix& matrix, ItemId item) {
    const auto col = matrix.ratersOf(item);
    const int n = static_cast<int>(col.size());
    if (n == 0)
        return {item, static_cast<double>(matrix.scale().median), 0};
    double sum = 0.0;
    for (const auto& cell : col)
        sum += cell.value;
    return {item, sum / n, n};
}

namespace {

bool parseInt(std::string_view field, std::int64_t& out) {
    if (field.empty())
        return false;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

} // namespace

RatingsMatrix loadMovieLens(const std::filesystem::path& path, RatingScale scale) {
    std::ifstream in(path);
    if (!in)
        throw IngestError("cannot open ratings file: " + path.string());

    std::vector<RatingEntry> entries;
    std::unordered_map<std::uint64_t, std::size_t> seen; // (user,item) -> first line
    std::string line;
    std::size_t lineNo = 0;
    auto fail = [&](const std::string& what) {
        throw IngestError(path.filename().string() + ":" + std::to_string(lineNo) + ": " + what);
    };

    while (std::getline(in, line)) {
        ++lineNo;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;

        std::string_view rest = line;
        std::int64_t fields[4];
        for (int f = 0; f < 4; ++f) {
            const auto tab = rest.find('\t');
            const bool lastField = f == 3;
            if (!lastField && tab == std::string_view::npos)
                fail("expected 4 tab-separated fields");
            if (lastField && tab != std::string_view::npos)
                fail("expected 4 tab-separated fields");
            const auto field = lastField ? rest : rest.substr(0, tab);
            if (!parseInt(field, fields[f]))
                fail("non-integer field '" + std::string(field) + "'");
            if (!lastField)
                rest = rest.substr(tab + 1);
        }
        const auto user = static_cast<UserId>(fields[0]);
        const auto item = static_cast<ItemId>(fields[1]);
        const auto value = static_cast<Rating>(fields[2]);
        if (!scale.contains(value))
            fail("rating " + std::to_string(value) + " outside scale [" +
                 std::to_string(scale.min) + ", " + std::to_string(scale.max) + "]");

        const auto key = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(user)) << 32) |
                         static_cast<std::uint32_t>(item);
        auto [it, inserted] = seen.emplace(key, lineNo);
        if (!inserted)
            fail("duplicate rating for user " + std::to_string(user) + ", item " +
                 std::to_string(item) + " (first at line " + std::to_string(it->second) + ")");
        entries.push_back({user, item, value});
    }
    return RatingsMatrix::fromEntries(std::move(entries), scale);
}

void saveMovieLens(const RatingsMatrix& matrix, std::ostream& out) {
    for (const auto& e : matrix.entries())
        out << e.user << '\t' << e.item << '\t' << e.value << '\t' << 0 << '\n';
}

void saveMovieLens(const RatingsMatrix& matrix, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out)
        throw IngestError("cannot open output file: " + path.string());
    saveMovieLens(matrix, out);
    if (!out.good())
        throw IngestError("write failed: " + path.string());
}

} // namespace fcrec
