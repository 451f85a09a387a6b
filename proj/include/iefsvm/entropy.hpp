#pragma once

#include <array>
#include <string>
#include <vector>

#include "iefsvm/neighbors.hpp"

namespace iefsvm {

/// Entropy of a neighborhood holding pos minority samples out of k, in nats.
/// Zero-probability terms contribute nothing, so the value lies in [0, ln 2].
double binary_entropy(int pos, int k);

/// Summary of the eight neighborhood entropies of one sample or pattern.
struct PatternStats {
  std::array<double, 8> entropies{};
  double mu = 0.0;     ///< mean entropy
  double sigma = 0.0;  ///< sample standard deviation (divisor 7)
  double d = 0.0;      ///< sqrt(mu^2 + sigma^2)
  double theta = 0.0;  ///< atan(mu / sigma), 0 when d == 0
};

PatternStats pattern_stats(const std::array<int, 8>& pos_counts);
PatternStats pattern_stats(const NeighborProfile& profile);

struct EnumeratedPattern {
  std::array<int, 8> pos_counts{};
  PatternStats stats;
  int nonzero_entropies = 0;
};

/// Every count sequence a neighbor profile can take: the first entry is 0 or
/// 1 and each later entry grows by 0, 1, or 2.  Returned in lexicographic
/// order by count sequence; there are exactly 4374 of them.
std::vector<EnumeratedPattern> enumerate_patterns();

/// Writes the pattern scatter as CSV with header
/// mu,sigma,d,theta,nonzero_count,kind followed by sampled level curves of
/// d*theta at t in {0.15, 0.3, 0.45, 0.6, 0.75}.  meta_lines are emitted
/// first, one per line, prefixed with '#'.
void emit_pattern_atlas(const std::vector<EnumeratedPattern>& patterns,
                        const std::string& out_path,
                        const std::vector<std::string>& meta_lines = {});

}  // namespace iefsvm
