#pragma once

// Validated matrix types for the interacting network, the appraisal network,
// the susceptibility gains and the multi-issue dependence structure, plus the
// graph predicates the analyses depend on. Storage is dense row-major in
// spirit; Eigen's default layout is used underneath.

#include <optional>
#include <vector>

#include "opinion/common.hpp"

namespace opinion::netcore {

/// Laplacian of the public interacting graph: zero row sums, non-positive
/// off-diagonal entries. Entry l_ij < 0 encodes an edge j -> i.
class InteractingLaplacian {
 public:
  explicit InteractingLaplacian(Matrix entries, double tol = kTolStruct);

  [[nodiscard]] const Matrix& matrix() const noexcept { return entries_; }
  [[nodiscard]] Index size() const noexcept { return entries_.rows(); }

 private:
  Matrix entries_;
};

/// Nonnegative row-stochastic matrix (DeGroot weights P, cooperative D).
class StochasticMatrix {
 public:
  explicit StochasticMatrix(Matrix entries, double tol = kTolStruct);

  [[nodiscard]] const Matrix& matrix() const noexcept { return entries_; }
  [[nodiscard]] Index size() const noexcept { return entries_.rows(); }

 private:
  Matrix entries_;
};

enum class AppraisalKind { cooperative, antagonistic };

/// Signed private appraisal weights. Cooperative rows need 0 < sum|d_ij| <= 1;
/// antagonistic rows need sum|d_ij| == 1. Self-appraisal d_ii is allowed.
class AppraisalMatrix {
 public:
  explicit AppraisalMatrix(Matrix entries, double tol = kTolStruct);

  [[nodiscard]] const Matrix& matrix() const noexcept { return entries_; }
  [[nodiscard]] Index size() const noexcept { return entries_.rows(); }
  [[nodiscard]] AppraisalKind kind() const noexcept { return kind_; }

 private:
  Matrix entries_;
  AppraisalKind kind_;
};

/// Diagonal susceptibility gains; every gain must be nonzero.
class SusceptibilityMatrix {
 public:
  explicit SusceptibilityMatrix(Vector diag, double tol = kTolStruct);

  [[nodiscard]] const Vector& diag() const noexcept { return diag_; }
  [[nodiscard]] Matrix matrix() const { return diag_.asDiagonal(); }
  [[nodiscard]] Index size() const noexcept { return diag_.size(); }

 private:
  Vector diag_;
};

/// Multi-issue dependence structure C (n x n). Only finiteness is required.
class MiDSMatrix {
 public:
  explicit MiDSMatrix(Matrix entries);

  [[nodiscard]] const Matrix& matrix() const noexcept { return entries_; }
  [[nodiscard]] Index size() const noexcept { return entries_.rows(); }

 private:
  Matrix entries_;
};

struct ConversionParams {
  double epsilon = 1.0;
};

/// Everything an analysis consumes: gains, public Laplacian, private
/// appraisal and (optionally) the issue coupling.
class SystemSpec {
 public:
  SystemSpec(SusceptibilityMatrix lambda, InteractingLaplacian laplacian, AppraisalMatrix appraisal,
             std::optional<MiDSMatrix> mids = std::nullopt);

  [[nodiscard]] const SusceptibilityMatrix& lambda() const noexcept { return lambda_; }
  [[nodiscard]] const InteractingLaplacian& laplacian() const noexcept { return laplacian_; }
  [[nodiscard]] const AppraisalMatrix& appraisal() const noexcept { return appraisal_; }
  [[nodiscard]] const std::optional<MiDSMatrix>& mids() const noexcept { return mids_; }

  [[nodiscard]] Index agents() const noexcept { return laplacian_.size(); }
  [[nodiscard]] Index issues() const noexcept { return mids_ ? mids_->size() : 1; }

  /// I - Lambda * L * D.
  [[nodiscard]] Matrix iteration_matrix() const;

  [[nodiscard]] SystemSpec with_mids(std::optional<MiDSMatrix> mids) const;
  [[nodiscard]] SystemSpec with_lambda(SusceptibilityMatrix lambda) const;

 private:
  SusceptibilityMatrix lambda_;
  InteractingLaplacian laplacian_;
  AppraisalMatrix appraisal_;
  std::optional<MiDSMatrix> mids_;
};

/// L = (I - P) / epsilon.
[[nodiscard]] InteractingLaplacian stochastic_to_laplacian(const StochasticMatrix& p,
                                                          const ConversionParams& params);

/// P = I - epsilon * L; rejects epsilon that produces a negative entry.
[[nodiscard]] StochasticMatrix laplacian_to_stochastic(const InteractingLaplacian& l,
                                                      const ConversionParams& params);

/// D* = (|d_ij|). Requires every row abs-sum to equal 1.
[[nodiscard]] StochasticMatrix abs_matrix(const AppraisalMatrix& d, double tol = kTolStruct);

/// Off-diagonal nonzero patterns coincide.
[[nodiscard]] bool same_topology(const Matrix& a, const Matrix& b, double tol = kTolStruct);

/// Nodes from which every other node is reachable along edges j -> i
/// (present when l_ij < -tol). Sorted ascending, zero-based.
[[nodiscard]] std::vector<Index> spanning_tree_roots(const InteractingLaplacian& l,
                                                     double tol = kTolStruct);

[[nodiscard]] bool has_spanning_tree(const InteractingLaplacian& l, double tol = kTolStruct);

/// Classifies a raw matrix after checking the row abs-sum constraint.
[[nodiscard]] AppraisalKind appraisal_kind(const Matrix& d, double tol = kTolStruct);

[[nodiscard]] const char* to_string(AppraisalKind kind) noexcept;

}  // namespace opinion::netcore
