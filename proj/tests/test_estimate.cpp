#include <gtest/gtest.h>

#include "opinion/estimate.hpp"
#include "opinion/fixtures.hpp"
#include "oracles.hpp"

using namespace opinion;
using namespace opinion::estimate;

namespace {

const netcore::SystemSpec& truth() { return fixtures::get("sec5-coop-issue-free").system; }

}  // namespace

TEST(Estimate, VecUnvecKron) {
  Matrix m(2, 3);
  m << 1, 2, 3, 4, 5, 6;
  const Vector v = vec(m);
  EXPECT_DOUBLE_EQ(v(1), 4.0);  // column-major
  EXPECT_TRUE(unvec(v, 2, 3).isApprox(m));
  EXPECT_THROW((void)unvec(v, 4, 2), ValidationError);

  Matrix b(2, 2);
  b << 0, 1, -1, 2;
  const Matrix k = kron(m, b);
  const auto ref = oracle::kron(oracle::from_eigen(m), oracle::from_eigen(b));
  for (Index i = 0; i < k.rows(); ++i)
    for (Index j = 0; j < k.cols(); ++j) EXPECT_DOUBLE_EQ(k(i, j), ref[i][j]);
}

TEST(Estimate, RegressorReproducesDynamics) {
  const auto& s = truth();
  const Vector xi = fixtures::sec5_x0_issue(1);
  const Vector lhs = regressor(xi, s.lambda(), s.laplacian()) * vec(s.appraisal().matrix());
  const Vector rhs = s.lambda().diag().asDiagonal() * (s.laplacian().matrix() * (s.appraisal().matrix() * xi));
  EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12);
  // Kronecker form xi' (x) (Lambda L)
  const Matrix gain = s.lambda().diag().asDiagonal() * s.laplacian().matrix();
  const auto ref = oracle::kron(oracle::from_eigen(xi.transpose()), oracle::from_eigen(gain));
  const Matrix reg = regressor(xi, s.lambda(), s.laplacian());
  for (Index i = 0; i < reg.rows(); ++i)
    for (Index j = 0; j < reg.cols(); ++j) EXPECT_NEAR(reg(i, j), ref[i][j], 1e-14);
}

TEST(Estimate, ScenarioStreamsArePrefixStable) {
  const auto a = draw_scenarios(truth(), 3, 42);
  const auto b = draw_scenarios(truth(), 5, 42);
  for (int t = 0; t < 3; ++t) {
    EXPECT_EQ(a.pairs[t].first, b.pairs[t].first);
    EXPECT_EQ(a.pairs[t].second, b.pairs[t].second);
  }
  auto c = draw_scenarios(truth(), 3, 42);
  append_scenarios(c, truth(), 2);
  EXPECT_EQ(c.pairs[4].first, b.pairs[4].first);
  EXPECT_NE(draw_scenarios(truth(), 1, 43).pairs[0].first, a.pairs[0].first);
  EXPECT_LE(a.pairs[0].first.cwiseAbs().maxCoeff(), 1.0);
  EXPECT_THROW((void)draw_scenarios(truth(), 0, 1), ValidationError);
  EXPECT_LT(uniform01(~0ULL), 1.0);
  EXPECT_EQ(uniform01(0), 0.0);
}

TEST(Estimate, NoiselessSolveFitsIdentifiablePart) {
  const auto scen = draw_scenarios(truth(), 8, 1);
  const auto res = solve_estimation(scen, truth().lambda(), truth().laplacian());
  EXPECT_LT(res.gamma_star, 1e-16);
  EXPECT_LE(res.rank, 12);  // N^2 - N
  EXPECT_FALSE(res.unique);
  const auto m = recovery_metrics(res.D_hat, truth());
  EXPECT_LT(m.identifiable_error, 1e-9);
  EXPECT_LT(m.error_modulo_ones, 1e-9);
  EXPECT_NEAR(mean_residual(scen, truth().lambda(), truth().laplacian(), res.zeta_hat), res.gamma_star, 1e-20);
}

TEST(Estimate, ShiftByOnesIsInvisible) {
  const auto& s = truth();
  Vector v(4);
  v << 0.3, -0.1, 0.2, 0.05;
  const Matrix shifted = s.appraisal().matrix() + Vector::Ones(4) * v.transpose();
  const auto scen = draw_scenarios(s, 4, 9);
  EXPECT_LT(mean_residual(scen, s.lambda(), s.laplacian(), vec(shifted)), 1e-28);
  const auto m = recovery_metrics(shifted, s);
  EXPECT_NEAR(m.max_abs_error, 0.3, 1e-15);
  EXPECT_LT(m.error_modulo_ones, 1e-15);
}

TEST(Estimate, RankMatchesOracle) {
  const auto scen = draw_scenarios(truth(), 8, 5);
  Matrix stacked(32, 16);
  for (int t = 0; t < 8; ++t) stacked.middleRows(4 * t, 4) = regressor(scen.pairs[t].first, truth().lambda(), truth().laplacian());
  const auto res = solve_estimation(scen, truth().lambda(), truth().laplacian());
  EXPECT_EQ(res.rank, oracle::rank(oracle::from_eigen(stacked)));
}

TEST(Estimate, Algorithm1) {
  const auto a1 = algorithm1(truth(), 1e-12, 1, 100, 7);
  EXPECT_EQ(a1.m, 1);
  EXPECT_EQ(a1.gamma_history.size(), 1u);
  ScenarioOptions noisy;
  noisy.noise = 0.1;
  EXPECT_THROW((void)algorithm1(truth(), 1e-12, 1, 20, 7, noisy), NumericalError);
  EXPECT_THROW((void)algorithm1(truth(), 0.0, 1, 20, 7), ValidationError);
}

TEST(Estimate, BoundTailsMatchOracle) {
  for (long d : {1L, 2L, 4L, 16L}) {
    for (double e : {0.05, 0.1, 0.3}) {
      for (long m : {d, d + 5, 3 * d + 20}) {
        SampleBoundQuery q{d, e, 0.01, BoundFormula::campi_garatti};
        const auto ref = static_cast<double>(oracle::binomial_tail(m, 0, d - 1, m, e));
        EXPECT_NEAR(bound_tail(q, m), ref, 1e-12 * std::max(1.0, ref));
        q.formula = BoundFormula::paper_literal;
        const auto ref_p = static_cast<double>(oracle::binomial_tail(d, 0, std::min(m, d), m, e));
        EXPECT_NEAR(bound_tail(q, m), ref_p, 1e-12 * std::max(1.0, ref_p));
      }
    }
  }
}

TEST(Estimate, SampleBoundsPinned) {
  EXPECT_EQ(sample_bound({1, 0.1, 0.01, BoundFormula::campi_garatti}).m, 44);
  // d = 4 (two agents): 97, checked against the oracle tail on both sides.
  const auto b = sample_bound({4, 0.1, 0.01, BoundFormula::campi_garatti});
  EXPECT_EQ(b.m, 97);
  EXPECT_LE(oracle::binomial_tail(97, 0, 3, 97, 0.1L), 0.01L);
  EXPECT_GT(oracle::binomial_tail(96, 0, 3, 96, 0.1L), 0.01L);
  const auto p = sample_bound({4, 0.1, 0.01, BoundFormula::paper_literal});
  EXPECT_LE(oracle::binomial_tail(4, 0, std::min(p.m, 4L), p.m, 0.1L), 0.01L);
  EXPECT_GT(oracle::binomial_tail(4, 0, std::min(p.m - 1, 4L), p.m - 1, 0.1L), 0.01L);
  EXPECT_THROW((void)sample_bound({0, 0.1, 0.01, BoundFormula::campi_garatti}), ValidationError);
  EXPECT_THROW((void)sample_bound({1, 1.5, 0.01, BoundFormula::campi_garatti}), ValidationError);
}

TEST(Estimate, EmpiricalViolation) {
  const auto res = solve_estimation(draw_scenarios(truth(), 8, 3), truth().lambda(), truth().laplacian());
  EXPECT_EQ(empirical_violation(res, truth(), res.gamma_star, 200, 3), 0.0);
  EstimationResult zero = res;
  zero.zeta_hat.setZero();
  EXPECT_GT(empirical_violation(zero, truth(), 0.0, 200, 3), 0.9);
}

TEST(Estimate, ProjectRows) {
  Matrix d(2, 2);
  d << 1.0, -1.0, 0.2, 0.3;
  const Matrix p = project_rows(d);
  EXPECT_NEAR(p.row(0).cwiseAbs().sum(), 1.0, 1e-15);
  EXPECT_EQ(p.row(1), d.row(1));
}
