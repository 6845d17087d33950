#include "fcrec/reliability.hpp"

#include "fcrec/similarity.hpp"

namespace fcrec {

double resourceAllocation(const RatingsMatrix& matrix, UserId u, UserId v) {
    double sum = 0.0;
    forEachCoRated(matrix.ratingsOf(u), matrix.ratingsOf(v), [&](ItemId item, Rating, Rating) {
        sum += 1.0 / static_cast<double>(matrix.ratersOf(item).size());
    });
    return sum;
}

} // namespace fcrec
