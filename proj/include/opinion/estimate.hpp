#pragma once

// Scenario-based identification of the appraisal matrix D from observed
// opinion pairs (xi(k-1), xi(k)) when Lambda and L are known, plus the
// scenario sample-size bounds.
//
// Note: L * 1 = 0, so Lambda L (D + 1 v') = Lambda L D for every v. The data
// determine D only modulo rank-one shifts 1 v'; the stacked regressor has
// rank at most N^2 - N. recovery_metrics reports both the raw error and the
// error on the identifiable part.

#include <cstdint>
#include <utility>
#include <vector>

#include "opinion/common.hpp"
#include "opinion/netcore.hpp"

namespace opinion::estimate {

/// Column-major stacking.
[[nodiscard]] Vector vec(const Matrix& m);
[[nodiscard]] Matrix unvec(const Vector& v, Index rows, Index cols);

/// Explicit Kronecker product a (x) b.
[[nodiscard]] Matrix kron(const Matrix& a, const Matrix& b);

/// xi_prev' (x) (Lambda L): N x N^2.
[[nodiscard]] Matrix regressor(const Vector& xi_prev, const netcore::SusceptibilityMatrix& lambda,
                               const netcore::InteractingLaplacian& l);

struct ScenarioOptions {
  double box = 1.0;    // xi_prev ~ U[-box, box]^N
  double noise = 0.0;  // xi_next += U[-noise, noise]^N
};

struct ScenarioSet {
  std::vector<std::pair<Vector, Vector>> pairs;
  std::uint64_t seed = 0;
  ScenarioOptions options;

  [[nodiscard]] Index m() const noexcept { return static_cast<Index>(pairs.size()); }
};

/// Derived seed of sample t; each sample owns an independent generator so
/// appended samples never disturb earlier ones.
[[nodiscard]] std::uint64_t subseed(std::uint64_t seed, std::uint64_t t);

/// Uniform double in [0, 1) from 53 random bits.
[[nodiscard]] double uniform01(std::uint64_t bits) noexcept;

[[nodiscard]] ScenarioSet draw_scenarios(const netcore::SystemSpec& truth, Index m, std::uint64_t seed,
                                         const ScenarioOptions& opt = {});

/// Appends `count` samples continuing the index sequence of `set`.
void append_scenarios(ScenarioSet& set, const netcore::SystemSpec& truth, Index count);

struct EstimationResult {
  Vector zeta_hat;
  Matrix D_hat;
  double gamma_star = 0.0;  // (1/m) sum_t ||X_t||^2
  Index m_used = 0;
  Index rank = 0;           // numerical rank of the stacked regressor
  bool unique = false;      // rank == N^2
};

/// Least squares with Q = I; the minimum-norm minimiser when rank deficient.
[[nodiscard]] EstimationResult solve_estimation(const ScenarioSet& scen, const netcore::SusceptibilityMatrix& lambda,
                                                const netcore::InteractingLaplacian& l);

/// (1/m) sum_t ||xi_next - xi_prev + regressor_t * zeta||^2.
[[nodiscard]] double mean_residual(const ScenarioSet& scen, const netcore::SusceptibilityMatrix& lambda,
                                   const netcore::InteractingLaplacian& l, const Vector& zeta);

struct RecoveryMetrics {
  double max_abs_error = 0.0;           // max |D_hat - D|
  double identifiable_error = 0.0;      // max |Lambda L (D_hat - D)|
  double error_modulo_ones = 0.0;       // min_v max |D_hat + 1 v' - D|
};

[[nodiscard]] RecoveryMetrics recovery_metrics(const Matrix& d_hat, const netcore::SystemSpec& truth);

/// Rows with sum |d_ij| > 1 are scaled down to sum 1.
[[nodiscard]] Matrix project_rows(const Matrix& d);

struct Algorithm1Result {
  Index m = 0;
  EstimationResult result;
  std::vector<double> gamma_history;  // gamma_star at m0, m0 + 1, ...
};

/// Solve, and while gamma_star > gamma0 append one fresh sample and re-solve.
/// Throws NumericalError when m_cap is reached without success.
[[nodiscard]] Algorithm1Result algorithm1(const netcore::SystemSpec& truth, double gamma0, Index m0, Index m_cap,
                                          std::uint64_t seed, const ScenarioOptions& opt = {});

enum class BoundFormula { campi_garatti, paper_literal };

struct SampleBoundQuery {
  long d = 1;
  double epsilon = 0.1;
  double beta = 0.01;
  BoundFormula formula = BoundFormula::campi_garatti;
};

struct SampleBound {
  long m = 0;
  double tail = 1.0;  // tail value at m
};

/// Tail value for a given m (campi: sum_{l<d} C(m,l) e^l (1-e)^(m-l);
/// paper_literal: sum_{l<=m} C(d,l) e^l (1-e)^(m-l)).
[[nodiscard]] double bound_tail(const SampleBoundQuery& q, long m);

/// Smallest m >= 1 with bound_tail(q, m) <= beta.
[[nodiscard]] SampleBound sample_bound(const SampleBoundQuery& q);

/// Fraction of `trials` fresh single samples whose residual at result.zeta_hat
/// exceeds gamma_star + tol.
[[nodiscard]] double empirical_violation(const EstimationResult& result, const netcore::SystemSpec& truth,
                                         double gamma_star, long trials, std::uint64_t seed,
                                         const ScenarioOptions& opt = {}, double tol = 1e-12);

[[nodiscard]] const char* to_string(BoundFormula f) noexcept;

}  // namespace opinion::estimate
