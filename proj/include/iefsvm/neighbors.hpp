#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "iefsvm/dataset.hpp"

namespace iefsvm {

/// Odd neighborhood sizes the profile is evaluated at.
inline constexpr std::array<int, 8> kNeighborGrid{1, 3, 5, 7, 9, 11, 13, 15};

/// pos_counts[j] = number of minority samples among the (2j+1) nearest
/// neighbors of the sample, self excluded.
struct NeighborProfile {
  std::size_t sample_index = 0;
  std::array<int, 8> pos_counts{};
};

/// Exact brute-force neighbor counts under Euclidean distance.  Distance ties
/// are broken by ascending sample index.  Requires at least 16 samples.
NeighborProfile knn_class_counts(const Dataset& ds, std::size_t i);

std::vector<NeighborProfile> knn_class_counts_all(const Dataset& ds);

/// Minority count among the k nearest neighbors of sample i (self excluded).
/// Requires n_samples >= k + 1.
int positive_neighbor_count(const Dataset& ds, std::size_t i, int k);

}  // namespace iefsvm
