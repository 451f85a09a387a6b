#include "iefsvm/entropy.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "iefsvm/util.hpp"

namespace iefsvm {

double binary_entropy(int pos, int k) {
  if (k < 1) throw std::invalid_argument("binary_entropy: k must be positive");
  if (pos < 0 || pos > k) {
    throw std::invalid_argument("binary_entropy: pos must lie in [0, k]");
  }
  const double p = static_cast<double>(pos) / static_cast<double>(k);
  const double n = static_cast<double>(k - pos) / static_cast<double>(k);
  double h = 0.0;
  if (p > 0.0) h -= p * std::log(p);
  if (n > 0.0) h -= n * std::log(n);
  return h;
}

PatternStats pattern_stats(const std::array<int, 8>& pos_counts) {
  PatternStats st;
  double sum = 0.0;
  for (std::size_t j = 0; j < 8; ++j) {
    st.entropies[j] = binary_entropy(pos_counts[j], kNeighborGrid[j]);
    sum += st.entropies[j];
  }
  st.mu = sum / 8.0;
  double ssq = 0.0;
  for (double h : st.entropies) {
    double dev = h - st.mu;
    ssq += dev * dev;
  }
  st.sigma = std::sqrt(ssq / 7.0);
  st.d = std::sqrt(st.mu * st.mu + st.sigma * st.sigma);
  st.theta = st.d > 0.0 ? std::atan2(st.mu, st.sigma) : 0.0;
  return st;
}

PatternStats pattern_stats(const NeighborProfile& profile) {
  return pattern_stats(profile.pos_counts);
}

std::vector<EnumeratedPattern> enumerate_patterns() {
  std::vector<EnumeratedPattern> out;
  out.reserve(4374);
  std::array<int, 8> counts{};
  // Odometer over the first count (0 or 1) and the seven steps (0, 1, or 2);
  // ascending step digits give ascending count sequences, so the result is
  // lexicographic by count sequence.
  for (int first = 0; first <= 1; ++first) {
    std::array<int, 7> steps{};
    for (;;) {
      counts[0] = first;
      for (std::size_t j = 0; j < 7; ++j) counts[j + 1] = counts[j] + steps[j];
      EnumeratedPattern pat;
      pat.pos_counts = counts;
      pat.stats = pattern_stats(counts);
      for (std::size_t j = 0; j < 8; ++j) {
        if (counts[j] > 0 && counts[j] < kNeighborGrid[j]) ++pat.nonzero_entropies;
      }
      out.push_back(std::move(pat));

      int c = 6;
      while (c >= 0 && steps[static_cast<std::size_t>(c)] == 2) {
        steps[static_cast<std::size_t>(c)] = 0;
        --c;
      }
      if (c < 0) break;
      ++steps[static_cast<std::size_t>(c)];
    }
  }
  return out;
}

void emit_pattern_atlas(const std::vector<EnumeratedPattern>& patterns,
                        const std::string& out_path,
                        const std::vector<std::string>& meta_lines) {
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write file: " + out_path);
  for (const auto& line : meta_lines) out << "# " << line << "\n";
  out << "mu,sigma,d,theta,nonzero_count,kind\n";
  for (const auto& pat : patterns) {
    out << fmt_double(pat.stats.mu) << ',' << fmt_double(pat.stats.sigma) << ','
        << fmt_double(pat.stats.d) << ',' << fmt_double(pat.stats.theta) << ','
        << pat.nonzero_entropies << ",pattern\n";
  }
  // Level curves of d * theta, sampled over theta with d capped at 0.8 so the
  // curves stay inside the scatter's range.
  constexpr double kCurveLevels[] = {0.15, 0.3, 0.45, 0.6, 0.75};
  constexpr int kCurveSamples = 200;
  constexpr double kMaxD = 0.8;
  for (double t : kCurveLevels) {
    const std::string kind = "levelcurve-" + fmt_double(t);
    const double lo = t / kMaxD;
    const double hi = std::numbers::pi / 2.0;
    for (int s = 0; s < kCurveSamples; ++s) {
      double theta = lo + (hi - lo) * static_cast<double>(s) /
                              static_cast<double>(kCurveSamples - 1);
      double d = t / theta;
      double mu = d * std::sin(theta);
      double sigma = d * std::cos(theta);
      out << fmt_double(mu) << ',' << fmt_double(sigma) << ',' << fmt_double(d) << ','
          << fmt_double(theta) << ",-1," << kind << "\n";
    }
  }
  if (!out) throw std::runtime_error("write failed: " + out_path);
}

}  // namespace iefsvm
