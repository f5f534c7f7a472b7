#include <gtest/gtest.h>

#include "opinion/fixtures.hpp"
#include "opinion/spectral.hpp"
#include "oracles.hpp"

using namespace opinion;
using namespace opinion::spectral;

namespace {

std::vector<Complex> oracle_spectrum(const Matrix& m) {
  std::vector<Complex> out;
  for (const auto& z : oracle::eigenvalues(oracle::from_eigen(m))) {
    out.emplace_back(static_cast<double>(z.real()), static_cast<double>(z.imag()));
  }
  return out;
}

// x_{k+1} = M x_k by naive loops.
std::vector<double> naive_iterate(const Matrix& m, std::vector<double> x, int steps) {
  const auto mm = oracle::from_eigen(m);
  for (int k = 0; k < steps; ++k) x = oracle::matvec(mm, x);
  return x;
}

}  // namespace

TEST(Spectral, Example1EigenvaluesMatchOracle) {
  const auto& f = fixtures::get("example1");
  const Matrix m = f.system.iteration_matrix();
  const auto ev = eigenvalues(m);
  EXPECT_LT(oracle::spectrum_distance(ev, oracle_spectrum(m)), 1e-10);
  EXPECT_NEAR(ev[0].real(), 1.0, 1e-12);
  EXPECT_NEAR(ev[1].real(), 0.5276, 1e-3);
  EXPECT_NEAR(ev[2].real(), 0.0474, 1e-3);
}

TEST(Spectral, Example1ConsensusAndLimit) {
  const auto& f = fixtures::get("example1");
  const auto rep = classify_system(f.system);
  EXPECT_EQ(rep.classification, Classification::consensus);
  EXPECT_EQ(rep.unit_eigen_count, 1);
  const auto limit = predict_limit(rep, f.x0);
  ASSERT_TRUE(limit.alpha.has_value());
  const auto naive = naive_iterate(f.system.iteration_matrix(), {25, 75, 85}, 400);
  for (double v : naive) EXPECT_NEAR(v, *limit.alpha, 1e-8);
  EXPECT_LT(*limit.alpha, 25.0);  // outside the hull of the initial opinions
}

TEST(Spectral, ConvergenceVerdictForSignedSec5) {
  const auto& f = fixtures::get("sec5-antag-issue-free");
  const auto rep = classify_system(f.system);
  EXPECT_EQ(rep.classification, Classification::convergence);
  const auto limit = predict_limit(rep, f.x0);
  EXPECT_FALSE(limit.alpha.has_value());
  const auto naive = naive_iterate(f.system.iteration_matrix(),
                                   std::vector<double>(f.x0.data(), f.x0.data() + f.x0.size()), 3000);
  for (Index i = 0; i < f.x0.size(); ++i) EXPECT_NEAR(naive[static_cast<std::size_t>(i)], limit.phi(i), 1e-8);
}

TEST(Spectral, StabilityDivergenceAndMultipleUnits) {
  EXPECT_EQ(classify(0.5 * Matrix::Identity(3, 3)).classification, Classification::stability);
  EXPECT_EQ(classify(1.5 * Matrix::Identity(2, 2)).classification, Classification::divergent_or_marginal);
  EXPECT_EQ(classify(Matrix::Identity(2, 2)).classification, Classification::divergent_or_marginal);
  Matrix rot(2, 2);
  rot << 0, -1, 1, 0;
  EXPECT_EQ(classify(rot).classification, Classification::divergent_or_marginal);
}

TEST(Spectral, AmbiguousUnitMultiplicityThrows) {
  Matrix m = Matrix::Zero(3, 3);
  m(0, 0) = 1.0;
  m(1, 1) = 1.0 + 5e-9;
  m(2, 2) = 0.2;
  EXPECT_THROW((void)classify(m), NumericalError);
}

TEST(Spectral, PredictLimitRefusesStableReport) {
  const auto rep = classify(0.5 * Matrix::Identity(2, 2));
  EXPECT_THROW((void)predict_limit(rep, Vector::Ones(2)), ValidationError);
}

TEST(Spectral, RowSumStructure) {
  using netcore::AppraisalMatrix;
  EXPECT_EQ(antagonistic_consensus_structure(AppraisalMatrix(fixtures::example1_appraisal())),
            RowSumStructure::row_sums_zero);
  EXPECT_EQ(antagonistic_consensus_structure(AppraisalMatrix(fixtures::sec5_d2())), RowSumStructure::neither);
  Matrix neg(2, 2);
  neg << -0.5, -0.5, 0, -1;
  EXPECT_EQ(antagonistic_consensus_structure(AppraisalMatrix(neg)), RowSumStructure::row_sums_minus_one);
}

TEST(Spectral, MidsSpectrumAndVerdicts) {
  const auto rep = classify_multi_issue(fixtures::get("sec5-antag").system);
  EXPECT_EQ(rep.verdict, MultiIssueVerdict::convergent);
  ASSERT_EQ(rep.mids_eigenvalues.size(), 2u);
  EXPECT_NEAR(rep.mids_eigenvalues[0].real(), 1.0, 1e-10);
  EXPECT_NEAR(rep.mids_eigenvalues[1].real(), 0.3, 1e-10);
  EXPECT_EQ(classify_multi_issue(fixtures::get("sec5-coop-stable").system).verdict, MultiIssueVerdict::stable);
  EXPECT_EQ(classify_multi_issue(fixtures::get("sec5-antag-stable").system).verdict, MultiIssueVerdict::stable);

  const auto& base = fixtures::get("sec5-coop").system;
  const auto grown = base.with_mids(netcore::MiDSMatrix(Matrix(1.1 * fixtures::sec5_c1())));
  EXPECT_EQ(classify_multi_issue(grown).verdict, MultiIssueVerdict::divergent_or_marginal);
}

TEST(Spectral, PowerLimitMatchesRepeatedProducts) {
  for (const Matrix& c : {fixtures::sec5_c1(), fixtures::sec5_c2()}) {
    auto p = oracle::from_eigen(Matrix::Identity(2, 2));
    const auto cm = oracle::from_eigen(c);
    for (int k = 0; k < 3000; ++k) p = oracle::matmul(p, cm);
    const Matrix lim = power_limit(c);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) EXPECT_NEAR(lim(i, j), p[i][j], 1e-10);
  }
  Matrix rot(2, 2);
  rot << 0, -1, 1, 0;
  EXPECT_FALSE(powers_converge(rot));
  EXPECT_THROW((void)power_limit(rot), ValidationError);
}

TEST(Spectral, MultiIssueLimitMatchesKroneckerIteration) {
  for (const char* name : {"sec5-coop", "sec5-antag"}) {
    const auto& f = fixtures::get(name);
    const auto big = oracle::kron(oracle::from_eigen(f.system.iteration_matrix()),
                                  oracle::from_eigen(f.system.mids()->matrix()));
    std::vector<double> x(f.x0.data(), f.x0.data() + f.x0.size());
    for (int k = 0; k < 4000; ++k) x = oracle::matvec(big, x);
    const Vector phi = predict_multi_issue_limit(f.system, f.x0);
    for (Index i = 0; i < phi.size(); ++i) EXPECT_NEAR(phi(i), x[static_cast<std::size_t>(i)], 1e-7) << name;
  }
}
