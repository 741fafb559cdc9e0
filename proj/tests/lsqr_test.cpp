#include "phystrack/lsqr.hpp"

#include <Eigen/Cholesky>
#include <gtest/gtest.h>

#include "phystrack/error.hpp"
#include "test_support.hpp"

namespace phystrack {
namespace {

using testing::random_vector;

MatX random_matrix(std::mt19937& rng, int rows, int cols) {
  MatX a(rows, cols);
  for (int c = 0; c < cols; ++c) a.col(c) = random_vector(rng, rows, 1.0);
  return a;
}

TEST(LsqrTest, ConsistentSquareSystem) {
  std::mt19937 rng(31);
  const MatX a = random_matrix(rng, 8, 8) + 4.0 * MatX::Identity(8, 8);
  const VecX x_true = random_vector(rng, 8, 1.0);
  const LsqrResult r = lsqr(a, a * x_true, 1e-12, 200);
  EXPECT_TRUE(r.converged);
  EXPECT_LT((r.x - x_true).norm(), 1e-9);
}

TEST(LsqrTest, OverdeterminedMatchesNormalEquations) {
  std::mt19937 rng(32);
  for (int trial = 0; trial < 50; ++trial) {
    const MatX a = random_matrix(rng, 40, 12);
    const VecX b = random_vector(rng, 40, 3.0);
    const LsqrResult r = lsqr(a, b, 1e-12, 500);
    const VecX oracle = (a.transpose() * a).ldlt().solve(a.transpose() * b);
    EXPECT_TRUE(r.converged);
    EXPECT_LE((r.x - oracle).norm(), 1e-8 * oracle.norm());
    EXPECT_NEAR(r.residual_norm, (b - a * r.x).norm(), 1e-8 * b.norm());
  }
}

TEST(LsqrTest, ZeroRightHandSide) {
  const MatX a = MatX::Identity(3, 3);
  const LsqrResult r = lsqr(a, VecX::Zero(3), 1e-10, 10);
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.iterations, 0);
  EXPECT_EQ(r.x, VecX::Zero(3));
}

TEST(LsqrTest, ReportsNonConvergence) {
  std::mt19937 rng(33);
  const MatX a = random_matrix(rng, 30, 20);
  const LsqrResult r = lsqr(a, random_vector(rng, 30, 1.0), 1e-14, 2);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations, 2);
  EXPECT_GT(r.residual_norm, 0.0);
}

TEST(LsqrTest, SizeMismatchThrows) {
  EXPECT_THROW(lsqr(MatX::Identity(3, 3), VecX::Zero(4), 1e-10, 10), ConfigurationError);
}

}  // namespace
}  // namespace phystrack
