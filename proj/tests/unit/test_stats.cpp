#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "iefsvm/stats.hpp"
#include "iefsvm/util.hpp"
#include "test_support.hpp"

using namespace iefsvm;

TEST_CASE("signed-rank on six one-sided pairs hits the closed form") {
  std::vector<double> a{2.0, 3.0, 5.0, 8.0, 13.0, 21.0};
  std::vector<double> b{1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
  WilcoxonResult res = wilcoxon_signed_rank(a, b);
  CHECK(res.n_nonzero == 6);
  CHECK(res.statistic == 0.0);  // every difference is positive
  // z = (0 - 10.5) / sqrt(22.75)
  CHECK(res.z == doctest::Approx(-2.2014).epsilon(1e-4));
  CHECK(res.p == doctest::Approx(2.0 * normal_cdf(-10.5 / std::sqrt(22.75))).epsilon(1e-12));
  CHECK(res.p < 0.05);
}

TEST_CASE("exactly zero differences are dropped before ranking") {
  std::vector<double> a{2.0, 3.0, 5.0, 8.0, 13.0, 21.0, 7.0, 9.0};
  std::vector<double> b{1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 7.0, 9.0};
  WilcoxonResult padded = wilcoxon_signed_rank(a, b);
  WilcoxonResult bare = wilcoxon_signed_rank({2, 3, 5, 8, 13, 21}, {1, 1, 1, 1, 1, 1});
  CHECK(padded.statistic == bare.statistic);
  CHECK(padded.z == bare.z);
  CHECK(padded.p == bare.p);
  CHECK(padded.n_nonzero == 6);
}

TEST_CASE("too few informative pairs is an error, not a number") {
  CHECK_THROWS_WITH_AS(wilcoxon_signed_rank({1, 2, 3, 4}, {0, 0, 0, 0}),
                       doctest::Contains("fewer than 5"), std::runtime_error);
  // zeros eat the sample down to four informative pairs
  CHECK_THROWS_AS(wilcoxon_signed_rank({1, 2, 3, 4, 5}, {0, 0, 0, 4, 5}),
                  std::runtime_error);
  CHECK_THROWS_AS(wilcoxon_signed_rank({1, 2}, {0}), std::invalid_argument);
  // every pair identical: nothing to rank
  CHECK_THROWS_AS(wilcoxon_signed_rank({1, 1, 1, 1, 1}, {1, 1, 1, 1, 1}),
                  std::runtime_error);
}

TEST_CASE("tied magnitudes share ranks and shrink the variance") {
  // |d| = {1,1,2,2,3}: two tie groups of two -> correction 2*(8-2)/48 = 0.25
  std::vector<double> a{1.0, -1.0, 2.0, 2.0, 3.0};
  std::vector<double> b{0.0, 0.0, 0.0, 0.0, 0.0};
  WilcoxonResult res = wilcoxon_signed_rank(a, b);
  // ranks: 1.5, 1.5, 3.5, 3.5, 5 -> w_neg = 1.5
  CHECK(res.statistic == doctest::Approx(1.5));
  double var = 5.0 * 6.0 * 11.0 / 24.0 - 0.25;
  CHECK(res.z == doctest::Approx((1.5 - 7.5) / std::sqrt(var)).epsilon(1e-12));
}

TEST_CASE("the normal approximation tracks the exact distribution") {
  // Continuous draws keep all ten pairs informative; at n = 10 the plain
  // normal approximation sits within 0.018 of the exact mid-p everywhere
  // on the support, so 0.02 is a real bound and not slack.
  Rng rng(33);
  for (int rep = 0; rep < 400; ++rep) {
    std::vector<double> a(10), b(10);
    for (std::size_t i = 0; i < 10; ++i) {
      a[i] = testutil::gauss(rng);
      b[i] = testutil::gauss(rng) + 0.4;
    }
    WilcoxonResult res = wilcoxon_signed_rank(a, b);
    double exact = testutil::wilcoxon_exact_p(a, b);
    CHECK(std::abs(res.p - exact) <= 0.02);
  }
}

TEST_CASE("the approximation degrades gracefully under heavy ties and zeros") {
  // Small integer support drops pairs and bunches ranks into tie groups, so
  // the informative sample shrinks below ten and the discrete distribution
  // coarsens. The gap versus the exact mid-p widens to roughly triple the
  // clean ten-pair figure but stays bounded; anything past 0.07 here would
  // mean the tie correction or zero handling is wrong, not mere coarseness.
  Rng rng(34);
  int tested = 0;
  for (int rep = 0; rep < 400; ++rep) {
    std::vector<double> a(10), b(10);
    int informative = 0;
    for (std::size_t i = 0; i < 10; ++i) {
      a[i] = static_cast<double>(draw_below(rng, 7));
      b[i] = static_cast<double>(draw_below(rng, 7));
      if (a[i] != b[i]) ++informative;
    }
    if (informative < 7) continue;
    WilcoxonResult res;
    try {
      res = wilcoxon_signed_rank(a, b);
    } catch (const std::runtime_error&) {
      continue;  // degenerate variance from one big tie group
    }
    double exact = testutil::wilcoxon_exact_p(a, b);
    CHECK(std::abs(res.p - exact) <= 0.07);
    ++tested;
  }
  CHECK(tested >= 200);
}

TEST_CASE("swapping the samples leaves the two-sided result unchanged") {
  std::vector<double> a{5.0, 1.0, 4.0, 9.0, 2.0, 6.0, 5.5};
  std::vector<double> b{4.5, 2.0, 1.0, 8.0, 4.0, 2.0, 5.0};
  WilcoxonResult ab = wilcoxon_signed_rank(a, b);
  WilcoxonResult ba = wilcoxon_signed_rank(b, a);
  CHECK(ab.statistic == ba.statistic);
  CHECK(ab.z == ba.z);
  CHECK(ab.p == ba.p);
}

TEST_CASE("the post-hoc ladder reproduces its pinned adjusted levels") {
  // six methods, one champion: five comparisons at 0.05/5 ... 0.05/1
  std::vector<std::pair<std::string, double>> ranks{
      {"champ", 1.2}, {"m1", 5.5}, {"m2", 4.9}, {"m3", 4.0}, {"m4", 3.1}, {"m5", 2.3},
  };
  auto rows = holm_test(ranks, "champ", 20);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0].adjusted_alpha == doctest::Approx(0.01));
  CHECK(rows[1].adjusted_alpha == doctest::Approx(0.0125));
  CHECK(rows[2].adjusted_alpha == doctest::Approx(0.05 / 3.0));
  CHECK(rows[3].adjusted_alpha == doctest::Approx(0.025));
  CHECK(rows[4].adjusted_alpha == doctest::Approx(0.05));
  // rows arrive ordered by descending separation
  CHECK(rows[0].method == "m1");
  CHECK(rows[4].method == "m5");
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    CHECK(rows[i].z >= rows[i + 1].z);
  }
}

TEST_CASE("the rank separation statistic matches hand arithmetic") {
  // six methods over 23 datasets, ranks 5.52 against a 2.04 champion
  std::vector<std::pair<std::string, double>> ranks{
      {"champ", 2.04}, {"worst", 5.52}, {"a", 3.0}, {"b", 3.5}, {"c", 4.0}, {"d", 4.5},
  };
  auto rows = holm_test(ranks, "champ", 23);
  CHECK(rows[0].method == "worst");
  CHECK(std::abs(rows[0].z - 6.31) <= 0.01);
  CHECK(rows[0].p == doctest::Approx(normal_cdf(-rows[0].z)).epsilon(1e-12));
}

TEST_CASE("rejection stops at the first surviving hypothesis") {
  // separations chosen so the third comparison fails its adjusted level
  // while the fourth would pass in isolation at 0.05
  std::vector<std::pair<std::string, double>> ranks{
      {"champ", 1.0}, {"far", 6.0}, {"mid", 4.8}, {"near", 2.10}, {"odd", 2.23},
  };
  auto rows = holm_test(ranks, "champ", 12);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].method == "far");
  CHECK(rows[1].method == "mid");
  CHECK(rows[2].method == "odd");
  CHECK(rows[3].method == "near");
  CHECK(rows[0].rejected);
  CHECK(rows[1].rejected);

  // once a row survives, everything after it survives too
  bool alive = false;
  for (const auto& row : rows) {
    if (!row.rejected) alive = true;
    if (alive) CHECK(!row.rejected);
    if (row.rejected) CHECK(row.p < row.adjusted_alpha);
  }
}

TEST_CASE("step-down rejections always form a prefix") {
  Rng rng(44);
  for (int rep = 0; rep < 300; ++rep) {
    std::vector<std::pair<std::string, double>> ranks;
    std::size_t k = 3 + draw_below(rng, 5);
    for (std::size_t m = 0; m < k; ++m) {
      ranks.emplace_back("m" + std::to_string(m), 1.0 + 4.0 * draw_unit(rng));
    }
    auto rows = holm_test(ranks, "m0", 5 + draw_below(rng, 30));
    bool alive = false;
    for (const auto& row : rows) {
      if (!row.rejected) alive = true;
      CHECK(row.rejected != alive);
      if (row.rejected) CHECK(row.p < row.adjusted_alpha);
    }
  }
}

TEST_CASE("the ladder rejects bad inputs") {
  std::vector<std::pair<std::string, double>> ranks{{"a", 1.0}, {"b", 2.0}};
  CHECK_THROWS_AS(holm_test(ranks, "missing", 10), std::invalid_argument);
  CHECK_THROWS_AS(holm_test(ranks, "a", 0), std::invalid_argument);
  CHECK_THROWS_AS(holm_test(ranks, "a", 10, 0.0), std::invalid_argument);
}
