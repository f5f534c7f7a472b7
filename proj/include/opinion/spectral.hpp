#pragma once

// Eigenstructure of the iteration matrix I - Lambda*L*D and the verdicts
// built on it: consensus, convergence (clusters), stability, and the
// multi-issue variants for the Kronecker system (I - Lambda*L*D) (x) C.

#include <optional>
#include <vector>

#include "opinion/common.hpp"
#include "opinion/netcore.hpp"

namespace opinion::spectral {

enum class Classification { consensus, convergence, stability, divergent_or_marginal };

struct SpectralReport {
  /// Sorted by descending modulus, then descending real part, then imaginary part.
  std::vector<Complex> eigenvalues;
  int unit_eigen_count = 0;
  /// Largest modulus among eigenvalues not within tol of 1 (0 if none).
  double rho_rest = 0.0;
  /// Left/right null vectors of M - I, scaled so that max|right| = 1 and
  /// left' * right = 1. Empty unless exactly one unit eigenvalue exists.
  Vector left_vec;
  Vector right_vec;
  Classification classification = Classification::divergent_or_marginal;

  [[nodiscard]] bool has_eigenvectors() const noexcept {
    return left_vec.size() > 0 && right_vec.size() > 0;
  }
};

struct LimitPrediction {
  Vector phi;
  /// Common opinion when the verdict is consensus (phi = alpha * 1).
  std::optional<double> alpha;
};

/// Eigenvalues of a general real square matrix, in SpectralReport order.
/// Throws NumericalError if the QR iteration does not converge.
[[nodiscard]] std::vector<Complex> eigenvalues(const Matrix& m);

/// Right eigenvector for a given eigenvalue, unit 2-norm.
/// Throws NumericalError if the residual exceeds 1e-8 * ||M||.
[[nodiscard]] CVector eigenvector(const Matrix& m, Complex lambda);

/// Classifies a raw iteration matrix.
[[nodiscard]] SpectralReport classify(const Matrix& iteration, double tol_eig = kTolEig);

/// Classifies I - Lambda*L*D of a system.
[[nodiscard]] SpectralReport classify_system(const netcore::SystemSpec& sys, double tol_eig = kTolEig);

/// phi = right * (left' * xi0). Refuses divergent/marginal and stable reports.
[[nodiscard]] LimitPrediction predict_limit(const SpectralReport& report, const Vector& xi0);
[[nodiscard]] LimitPrediction predict_limit(const netcore::SystemSpec& sys, const Vector& xi0,
                                            double tol_eig = kTolEig);

enum class RowSumStructure { row_sums_zero, row_sums_minus_one, neither };

/// D*1 == 0 or D*1 == -1 (the structural half of the antagonistic consensus test).
[[nodiscard]] RowSumStructure antagonistic_consensus_structure(const netcore::AppraisalMatrix& d,
                                                               double tol = kTolStruct);

enum class MultiIssueVerdict { stable, convergent, divergent_or_marginal };

struct MultiIssueReport {
  MultiIssueVerdict verdict = MultiIssueVerdict::divergent_or_marginal;
  std::vector<Complex> mids_eigenvalues;
  double mids_radius = 0.0;      // max |lambda(C)|
  double rho_rest = 0.0;         // largest non-unit |lambda(I - Lambda L D)|
  bool mids_powers_converge = false;
  /// |lambda_max(C)| > 1 while the product condition holds: the unit
  /// eigenvalue of the issue-free part would amplify, so the case is rejected.
  bool unit_pairing_flagged = false;
};

/// Requires the issue-free system to have a simple unit eigenvalue with the
/// rest strictly inside the unit disk (consensus or convergence).
[[nodiscard]] MultiIssueReport classify_multi_issue(const netcore::SystemSpec& sys,
                                                    double tol_eig = kTolEig);

/// lim C^k exists: spectrum inside the open disk except a semisimple eigenvalue 1.
[[nodiscard]] bool powers_converge(const Matrix& c, double tol_eig = kTolEig);

/// lim C^k, the spectral projector of the eigenvalue 1. Throws ValidationError unless powers_converge(C).
[[nodiscard]] Matrix power_limit(const Matrix& c, double tol_eig = kTolEig);

/// Limit of the Kronecker iteration from an agent-major xi0 when the verdict
/// is convergent or stable: block i equals lim C^k * sum_j (iota varsigma')_ij x_j.
[[nodiscard]] Vector predict_multi_issue_limit(const netcore::SystemSpec& sys, const Vector& xi0,
                                               double tol_eig = kTolEig);

[[nodiscard]] const char* to_string(Classification c) noexcept;
[[nodiscard]] const char* to_string(RowSumStructure s) noexcept;
[[nodiscard]] const char* to_string(MultiIssueVerdict v) noexcept;

}  // namespace opinion::spectral
