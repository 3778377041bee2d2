#include <gtest/gtest.h>

#include <algorithm>
#include <limits>
#include <numeric>

#include "mmwcarry/assignment.hpp"
#include "mmwcarry/rng.hpp"

using namespace mmw;

namespace {

// Exhaustive minimum over injective row -> column maps (rows <= cols).
double brute_force(const Eigen::MatrixXd& c) {
  std::vector<int> cols(c.cols());
  std::iota(cols.begin(), cols.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double s = 0.0;
    for (int i = 0; i < c.rows(); ++i) s += c(i, cols[i]);
    best = std::min(best, s);
  } while (std::next_permutation(cols.begin(), cols.end()));
  return best;
}

Eigen::MatrixXd random_cost(int r, int c, std::mt19937_64& rng, bool integer) {
  Eigen::MatrixXd m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = integer ? std::floor(uniform01(rng) * 4.0) : uniform01(rng);
  return m;
}

void expect_valid(const Assignment& a, const Eigen::MatrixXd& c) {
  std::vector<bool> used(c.cols(), false);
  double s = 0.0;
  for (int i = 0; i < c.rows(); ++i) {
    const int j = a.row_to_col[i];
    if (j < 0) continue;
    ASSERT_LT(j, c.cols());
    ASSERT_FALSE(used[j]);
    used[j] = true;
    s += c(i, j);
  }
  EXPECT_NEAR(s, a.cost, 1e-9);
}

}  // namespace

TEST(Assignment, ThreeByThreeExample) {
  Eigen::MatrixXd c(3, 3);
  c << 4, 1, 3, 2, 0, 5, 3, 2, 2;
  const auto a = jv_assign(c);
  EXPECT_EQ(a.row_to_col, (std::vector<int>{1, 0, 2}));
  EXPECT_DOUBLE_EQ(a.cost, 5.0);
}

TEST(Assignment, MatchesBruteForceSquare) {
  auto rng = make_rng(17, "jv");
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + trial % 7;
    const auto c = random_cost(n, n, rng, trial % 2 == 0);  // integers give many ties
    const auto a = jv_assign(c);
    expect_valid(a, c);
    EXPECT_NEAR(a.cost, brute_force(c), 1e-9) << trial;
  }
}

TEST(Assignment, MatchesBruteForceRectangular) {
  auto rng = make_rng(18, "jv");
  for (int trial = 0; trial < 200; ++trial) {
    const int r = 1 + trial % 5;
    const int k = r + 1 + trial % 3;
    const auto wide = random_cost(r, k, rng, trial % 3 == 0);
    const auto a = jv_assign(wide);
    expect_valid(a, wide);
    for (int j : a.row_to_col) EXPECT_GE(j, 0);
    EXPECT_NEAR(a.cost, brute_force(wide), 1e-9);

    const Eigen::MatrixXd tall = wide.transpose();
    const auto b = jv_assign(tall);
    expect_valid(b, tall);
    EXPECT_EQ(std::count(b.row_to_col.begin(), b.row_to_col.end(), -1), k - r);
    EXPECT_NEAR(b.cost, a.cost, 1e-9);
  }
}

TEST(Assignment, EmptyAndNonFinite) {
  EXPECT_TRUE(jv_assign(Eigen::MatrixXd(0, 3)).row_to_col.empty());
  const auto none = jv_assign(Eigen::MatrixXd(2, 0));
  EXPECT_EQ(none.row_to_col, (std::vector<int>{-1, -1}));
  Eigen::MatrixXd bad(2, 2);
  bad << 1, std::numeric_limits<double>::quiet_NaN(), 0, 1;
  EXPECT_THROW(jv_assign(bad), std::invalid_argument);
}

// Tall 1 - IoU matrix from a camera tracking run. The dual of the padded
// column sits near the 1e6 sentinel, where a 3e-11 gap is below one ulp.
TEST(Assignment, SubUlpGapAgainstSentinelTerminates) {
  Eigen::MatrixXd c(6, 5);
  c << 1, 1, 1, 1, 1,
       0.59760900426092334, 0.073174881756553456, 0.76174874227903744, 0.98755116236617591, 1,
       1, 1, 0.67790472147605096, 1, 1,
       1, 0.73471908552670984, 1, 0.7859442411304195, 0.6894638549747818,
       1, 1, 1, 1, 0.79160492268287908,
       1, 1, 0.50014133556793039, 0.89756574276709122, 0.65720845551914941;
  const auto a = jv_assign(c);
  expect_valid(a, c);
  EXPECT_NEAR(a.cost, brute_force(c.transpose()), 1e-9);
}

TEST(Assignment, TieHeavyIouCostsMatchBruteForce) {
  auto rng = make_rng(19, "jv");
  for (int trial = 0; trial < 3000; ++trial) {
    const int r = 1 + trial % 6, k = 1 + (trial / 6) % 6;
    Eigen::MatrixXd c(r, k);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < k; ++j) c(i, j) = uniform01(rng) < 0.6 ? 1.0 : 0.05 + 0.95 * uniform01(rng);
    const auto a = jv_assign(c);
    expect_valid(a, c);
    const double best = r <= k ? brute_force(c) : brute_force(c.transpose());
    EXPECT_NEAR(a.cost, best, 1e-9) << trial;
  }
}
