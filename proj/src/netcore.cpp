#include "opinion/netcore.hpp"

#include <cmath>
#include <deque>
#include <sstream>
#include <string>

namespace opinion::netcore {
namespace {

void require_square(const Matrix& m, const char* what) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    std::ostringstream os;
    os << what << " must be a non-empty square matrix, got " << m.rows() << "x" << m.cols();
    throw ValidationError(os.str());
  }
  if (!m.allFinite()) throw ValidationError(std::string(what) + " has non-finite entries");
}

std::string row_msg(const char* what, Index row, const char* rule, double value) {
  std::ostringstream os;
  os.precision(17);
  os << what << " row " << row + 1 << ": " << rule << " (got " << value << ")";
  return os.str();
}

// Row abs-sum constraint shared by AppraisalMatrix and appraisal_kind.
AppraisalKind check_appraisal(const Matrix& d, double tol) {
  require_square(d, "appraisal matrix");
  const bool cooperative = d.minCoeff() >= 0.0;
  for (Index i = 0; i < d.rows(); ++i) {
    const double s = d.row(i).cwiseAbs().sum();
    if (cooperative) {
      if (!(s > tol) || s > 1.0 + tol) {
        throw ValidationError(row_msg("appraisal matrix", i, "needs 0 < sum|d_ij| <= 1", s));
      }
    } else if (std::abs(s - 1.0) > tol) {
      throw ValidationError(
          row_msg("antagonistic appraisal matrix", i, "needs sum|d_ij| == 1", s));
    }
  }
  return cooperative ? AppraisalKind::cooperative : AppraisalKind::antagonistic;
}

}  // namespace

InteractingLaplacian::InteractingLaplacian(Matrix entries, double tol) : entries_(std::move(entries)) {
  require_square(entries_, "interacting Laplacian");
  for (Index i = 0; i < entries_.rows(); ++i) {
    const double scale = std::max(1.0, entries_.row(i).cwiseAbs().maxCoeff());
    const double s = entries_.row(i).sum();
    if (std::abs(s) > tol * scale) {
      throw ValidationError(row_msg("interacting Laplacian", i, "row must sum to 0", s));
    }
    if (entries_(i, i) < -tol) {
      throw ValidationError(
          row_msg("interacting Laplacian", i, "diagonal must be >= 0", entries_(i, i)));
    }
    for (Index j = 0; j < entries_.cols(); ++j) {
      if (j != i && entries_(i, j) > tol) {
        throw ValidationError(
            row_msg("interacting Laplacian", i, "off-diagonal entries must be <= 0", entries_(i, j)));
      }
    }
  }
}

StochasticMatrix::StochasticMatrix(Matrix entries, double tol) : entries_(std::move(entries)) {
  require_square(entries_, "stochastic matrix");
  for (Index i = 0; i < entries_.rows(); ++i) {
    if (entries_.row(i).minCoeff() < -tol) {
      throw ValidationError(
          row_msg("stochastic matrix", i, "entries must be >= 0", entries_.row(i).minCoeff()));
    }
    const double s = entries_.row(i).sum();
    if (std::abs(s - 1.0) > tol) {
      throw ValidationError(row_msg("stochastic matrix", i, "row must sum to 1", s));
    }
  }
}

AppraisalMatrix::AppraisalMatrix(Matrix entries, double tol)
    : entries_(std::move(entries)), kind_(check_appraisal(entries_, tol)) {}

SusceptibilityMatrix::SusceptibilityMatrix(Vector diag, double tol) : diag_(std::move(diag)) {
  if (diag_.size() == 0) throw ValidationError("susceptibility vector is empty");
  if (!diag_.allFinite()) throw ValidationError("susceptibility vector has non-finite entries");
  for (Index i = 0; i < diag_.size(); ++i) {
    if (std::abs(diag_(i)) <= tol) {
      throw ValidationError(row_msg("susceptibility", i, "gain must be nonzero", diag_(i)));
    }
  }
}

MiDSMatrix::MiDSMatrix(Matrix entries) : entries_(std::move(entries)) {
  require_square(entries_, "MiDS matrix");
}

SystemSpec::SystemSpec(SusceptibilityMatrix lambda, InteractingLaplacian laplacian,
                       AppraisalMatrix appraisal, std::optional<MiDSMatrix> mids)
    : lambda_(std::move(lambda)),
      laplacian_(std::move(laplacian)),
      appraisal_(std::move(appraisal)),
      mids_(std::move(mids)) {
  const Index n = laplacian_.size();
  if (lambda_.size() != n || appraisal_.size() != n) {
    std::ostringstream os;
    os << "system dimensions disagree: lambda " << lambda_.size() << ", laplacian " << n
       << ", appraisal " << appraisal_.size();
    throw ValidationError(os.str());
  }
}

Matrix SystemSpec::iteration_matrix() const {
  const Index n = agents();
  return Matrix::Identity(n, n) -
         lambda_.diag().asDiagonal() * (laplacian_.matrix() * appraisal_.matrix());
}

SystemSpec SystemSpec::with_mids(std::optional<MiDSMatrix> mids) const {
  return SystemSpec(lambda_, laplacian_, appraisal_, std::move(mids));
}

SystemSpec SystemSpec::with_lambda(SusceptibilityMatrix lambda) const {
  return SystemSpec(std::move(lambda), laplacian_, appraisal_, mids_);
}

InteractingLaplacian stochastic_to_laplacian(const StochasticMatrix& p, const ConversionParams& params) {
  if (!(params.epsilon > 0.0) || !std::isfinite(params.epsilon)) {
    throw ValidationError("step size epsilon must be positive");
  }
  const Index n = p.size();
  Matrix l = (Matrix::Identity(n, n) - p.matrix()) / params.epsilon;
  // Force exact zero row sums; the diagonal absorbs the roundoff.
  for (Index i = 0; i < n; ++i) {
    double off = 0.0;
    for (Index j = 0; j < n; ++j) {
      if (j != i) off += l(i, j);
    }
    l(i, i) = -off;
  }
  return InteractingLaplacian(std::move(l));
}

StochasticMatrix laplacian_to_stochastic(const InteractingLaplacian& l, const ConversionParams& params) {
  if (!(params.epsilon > 0.0) || !std::isfinite(params.epsilon)) {
    throw ValidationError("step size epsilon must be positive");
  }
  const Index n = l.size();
  Matrix p = Matrix::Identity(n, n) - params.epsilon * l.matrix();
  if (p.minCoeff() < -kTolStruct) {
    std::ostringstream os;
    os << "epsilon " << params.epsilon << " makes I - epsilon*L negative (needs epsilon*max l_ii <= 1)";
    throw ValidationError(os.str());
  }
  p = p.cwiseMax(0.0);
  return StochasticMatrix(std::move(p));
}

StochasticMatrix abs_matrix(const AppraisalMatrix& d, double tol) {
  const Matrix a = d.matrix().cwiseAbs();
  for (Index i = 0; i < a.rows(); ++i) {
    const double s = a.row(i).sum();
    if (std::abs(s - 1.0) > tol) {
      throw ValidationError(row_msg("appraisal matrix", i, "abs row sum must equal 1", s));
    }
  }
  return StochasticMatrix(a, tol);
}

bool same_topology(const Matrix& a, const Matrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ValidationError("same_topology: dimension mismatch");
  }
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      if (i == j) continue;
      if ((std::abs(a(i, j)) > tol) != (std::abs(b(i, j)) > tol)) return false;
    }
  }
  return true;
}

std::vector<Index> spanning_tree_roots(const InteractingLaplacian& l, double tol) {
  const Matrix& m = l.matrix();
  const Index n = m.rows();
  std::vector<Index> roots;
  std::vector<char> seen(static_cast<std::size_t>(n));
  std::deque<Index> queue;
  for (Index r = 0; r < n; ++r) {
    std::fill(seen.begin(), seen.end(), 0);
    seen[static_cast<std::size_t>(r)] = 1;
    queue.assign(1, r);
    Index reached = 1;
    while (!queue.empty()) {
      const Index j = queue.front();
      queue.pop_front();
      for (Index i = 0; i < n; ++i) {
        if (i != j && !seen[static_cast<std::size_t>(i)] && m(i, j) < -tol) {
          seen[static_cast<std::size_t>(i)] = 1;
          ++reached;
          queue.push_back(i);
        }
      }
    }
    if (reached == n) roots.push_back(r);
  }
  return roots;
}

bool has_spanning_tree(const InteractingLaplacian& l, double tol) {
  return !spanning_tree_roots(l, tol).empty();
}

AppraisalKind appraisal_kind(const Matrix& d, double tol) { return check_appraisal(d, tol); }

const char* to_string(AppraisalKind kind) noexcept {
  return kind == AppraisalKind::cooperative ? "cooperative" : "antagonistic";
}

}  // namespace opinion::netcore
