#include "iefsvm/neighbors.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace iefsvm {

namespace {

double dist2(const Dataset& ds, std::size_t a, std::size_t b) {
  auto ra = ds.row(a);
  auto rb = ds.row(b);
  double acc = 0.0;
  for (std::size_t j = 0; j < ra.size(); ++j) {
    double diff = ra[j] - rb[j];
    acc += diff * diff;
  }
  return acc;
}

// Indices of the m nearest neighbors of i, self excluded, ties by index.
std::vector<std::size_t> nearest(const Dataset& ds, std::size_t i, std::size_t m) {
  if (i >= ds.n_samples) throw std::out_of_range("neighbor query: sample index out of range");
  std::vector<std::pair<double, std::size_t>> order;
  order.reserve(ds.n_samples - 1);
  for (std::size_t j = 0; j < ds.n_samples; ++j) {
    if (j == i) continue;
    order.emplace_back(dist2(ds, i, j), j);
  }
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(m),
                    order.end());
  std::vector<std::size_t> out(m);
  for (std::size_t t = 0; t < m; ++t) out[t] = order[t].second;
  return out;
}

}  // namespace

NeighborProfile knn_class_counts(const Dataset& ds, std::size_t i) {
  if (ds.n_samples < 16) {
    throw std::runtime_error("neighbor profiles need at least 16 samples");
  }
  auto nn = nearest(ds, i, 15);
  NeighborProfile profile;
  profile.sample_index = i;
  int running = 0;
  std::size_t slot = 0;
  for (int rank = 0; rank < 15; ++rank) {
    if (ds.labels[nn[static_cast<std::size_t>(rank)]] > 0) ++running;
    if (rank + 1 == kNeighborGrid[slot]) profile.pos_counts[slot++] = running;
  }
  return profile;
}

std::vector<NeighborProfile> knn_class_counts_all(const Dataset& ds) {
  std::vector<NeighborProfile> out;
  out.reserve(ds.n_samples);
  for (std::size_t i = 0; i < ds.n_samples; ++i) out.push_back(knn_class_counts(ds, i));
  return out;
}

int positive_neighbor_count(const Dataset& ds, std::size_t i, int k) {
  if (k < 1) throw std::invalid_argument("neighbor count: k must be positive");
  if (ds.n_samples < static_cast<std::size_t>(k) + 1) {
    throw std::runtime_error("neighbor count: need at least k + 1 samples");
  }
  auto nn = nearest(ds, i, static_cast<std::size_t>(k));
  int pos = 0;
  for (std::size_t j : nn) {
    if (ds.labels[j] > 0) ++pos;
  }
  return pos;
}

}  // namespace iefsvm
