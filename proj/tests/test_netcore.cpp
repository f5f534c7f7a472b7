#include <gtest/gtest.h>

#include <random>

#include "opinion/fixtures.hpp"
#include "opinion/netcore.hpp"
#include "oracles.hpp"

using namespace opinion;
using namespace opinion::netcore;

TEST(Netcore, StochasticToLaplacianSec5Row) {
  const auto l = stochastic_to_laplacian(StochasticMatrix(fixtures::sec5_stochastic()), {1.0});
  EXPECT_NEAR(l.matrix()(0, 0), 0.78, 1e-15);
  EXPECT_NEAR(l.matrix()(0, 1), -0.12, 1e-15);
  EXPECT_NEAR(l.matrix()(0, 2), -0.36, 1e-15);
  EXPECT_NEAR(l.matrix()(0, 3), -0.3, 1e-15);
}

TEST(Netcore, IdentityGivesZeroLaplacian) {
  const auto l = stochastic_to_laplacian(StochasticMatrix(Matrix::Identity(3, 3)), {0.7});
  EXPECT_EQ(l.matrix().cwiseAbs().maxCoeff(), 0.0);
}

TEST(Netcore, SwapPermutation) {
  Matrix p(2, 2);
  p << 0, 1, 1, 0;
  const auto l = stochastic_to_laplacian(StochasticMatrix(p), {1.0});
  Matrix want(2, 2);
  want << 1, -1, -1, 1;
  EXPECT_TRUE(l.matrix().isApprox(want));
}

TEST(Netcore, RejectsBadInputs) {
  Matrix bad(2, 2);
  bad << 0.5, 0.4, 0.0, 1.0;
  EXPECT_THROW(StochasticMatrix{bad}, ValidationError);
  EXPECT_THROW((void)stochastic_to_laplacian(StochasticMatrix(Matrix::Identity(2, 2)), {0.0}),
               ValidationError);
  Matrix lap(2, 2);
  lap << 1, 1, -1, 1;
  EXPECT_THROW(InteractingLaplacian{lap}, ValidationError);
  Vector gains(2);
  gains << 1.0, 0.0;
  EXPECT_THROW(SusceptibilityMatrix{gains}, ValidationError);
  Matrix nan = Matrix::Constant(2, 2, std::nan(""));
  EXPECT_THROW(MiDSMatrix{nan}, ValidationError);
}

TEST(Netcore, LaplacianToStochasticRejectsLargeEpsilon) {
  Matrix lap(2, 2);
  lap << 2, -2, -1, 1;
  EXPECT_THROW((void)laplacian_to_stochastic(InteractingLaplacian(lap), {1.0}), ValidationError);
  EXPECT_NO_THROW((void)laplacian_to_stochastic(InteractingLaplacian(lap), {0.5}));
}

TEST(Netcore, AppraisalKinds) {
  EXPECT_EQ(AppraisalMatrix(fixtures::sec5_d1()).kind(), AppraisalKind::cooperative);
  EXPECT_EQ(AppraisalMatrix(fixtures::sec5_d2()).kind(), AppraisalKind::antagonistic);
  Matrix row_zero(2, 2);
  row_zero << 0, 0, 0.5, 0.5;
  EXPECT_THROW(AppraisalMatrix{row_zero}, ValidationError);
  Matrix over(2, 2);
  over << 0.8, 0.8, 0.5, 0.5;
  EXPECT_THROW(AppraisalMatrix{over}, ValidationError);
  Matrix signed_short(2, 2);
  signed_short << 0.5, -0.2, 0.5, 0.5;  // antagonistic row with abs sum 0.7
  EXPECT_THROW(AppraisalMatrix{signed_short}, ValidationError);
}

TEST(Netcore, AbsMatrix) {
  const auto dstar = abs_matrix(AppraisalMatrix(fixtures::sec5_d2()));
  EXPECT_TRUE(dstar.matrix().isApprox(fixtures::sec5_d2().cwiseAbs()));
  Matrix partial(2, 2);
  partial << 0.2, 0.2, 0.5, 0.5;
  EXPECT_THROW((void)abs_matrix(AppraisalMatrix(partial)), ValidationError);
}

TEST(Netcore, SpanningTreeRootsSec5) {
  const auto l = stochastic_to_laplacian(StochasticMatrix(fixtures::sec5_stochastic()), {1.0});
  const auto roots = spanning_tree_roots(l);
  ASSERT_EQ(roots.size(), 1u);
  EXPECT_EQ(roots[0], 2);
  Matrix two = Matrix::Zero(2, 2);
  EXPECT_FALSE(has_spanning_tree(InteractingLaplacian(two)));
}

TEST(Netcore, SystemDimensionMismatch) {
  EXPECT_THROW(SystemSpec(SusceptibilityMatrix(Vector::Ones(2)), InteractingLaplacian(Matrix::Zero(3, 3)),
                          AppraisalMatrix(Matrix::Identity(3, 3))),
               ValidationError);
}

TEST(Netcore, RandomRoundTripAndTopology) {
  std::mt19937_64 gen(11);
  for (int t = 0; t < 200; ++t) {
    const int n = 2 + t % 5;
    const Matrix lm = oracle::random_laplacian(gen, n);
    const double eps = 0.9 / lm.diagonal().maxCoeff();
    const InteractingLaplacian l(lm);
    const auto p = laplacian_to_stochastic(l, {eps});
    const auto back = stochastic_to_laplacian(p, {eps});
    EXPECT_LT((back.matrix() - lm).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_TRUE(same_topology(lm, back.matrix()));
    EXPECT_EQ(has_spanning_tree(l), oracle::has_spanning_tree(oracle::from_eigen(lm)));
  }
}
