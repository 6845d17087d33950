#pragma once

#include "fcrec/ratings.hpp"

namespace fcrec {

/// Resource-allocation reliability: sum over co-rated items z of 1/k_z,
/// where k_z is the number of users in the matrix who rated z. Unnormalized;
/// 0 exactly when the users share no items.
double resourceAllocation(const RatingsMatrix& matrix, UserId u, UserId v);

} // namespace fcrec
