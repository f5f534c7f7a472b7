#include "opinion/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "opinion/log.hpp"

namespace opinion::spectral {
namespace {

constexpr double kNullSvThreshold = 1e-10;
constexpr double kDefectiveThreshold = 1e-12;

bool eig_order(const Complex& a, const Complex& b) {
  const double ma = std::abs(a);
  const double mb = std::abs(b);
  if (ma != mb) return ma > mb;
  if (a.real() != b.real()) return a.real() > b.real();
  return a.imag() > b.imag();
}

// Null vector of a (real) square matrix from its SVD; checks the smallest
// singular value against the rank threshold.
Vector null_vector(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const Index n = a.cols();
  const double scale = std::max(1.0, sv(0));
  if (sv(n - 1) > kNullSvThreshold * scale) {
    std::ostringstream os;
    os << "no numerical null vector: smallest singular value " << sv(n - 1);
    throw NumericalError(os.str());
  }
  if (n > 1 && sv(n - 2) <= kNullSvThreshold * scale) {
    throw NumericalError("null space of M - I has dimension > 1");
  }
  return svd.matrixV().col(n - 1);
}

}  // namespace

std::vector<Complex> eigenvalues(const Matrix& m) {
  if (m.rows() != m.cols()) throw ValidationError("eigenvalues: matrix must be square");
  if (!m.allFinite()) throw ValidationError("eigenvalues: matrix has non-finite entries");
  if (m.rows() == 0) return {};
  Eigen::EigenSolver<Matrix> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigenvalue QR iteration did not converge");
  }
  std::vector<Complex> out(solver.eigenvalues().data(),
                           solver.eigenvalues().data() + solver.eigenvalues().size());
  std::sort(out.begin(), out.end(), eig_order);
  return out;
}

CVector eigenvector(const Matrix& m, Complex lambda) {
  const Index n = m.rows();
  const CMatrix shifted = m.cast<Complex>() - lambda * CMatrix::Identity(n, n);
  Eigen::JacobiSVD<CMatrix> svd(shifted, Eigen::ComputeFullV);
  CVector v = svd.matrixV().col(n - 1);
  v.normalize();
  const double norm_m = std::max(m.cwiseAbs().rowwise().sum().maxCoeff(), 1e-300);
  const double residual = (m.cast<Complex>() * v - lambda * v).cwiseAbs().maxCoeff();
  if (residual > 1e-8 * norm_m) {
    std::ostringstream os;
    os << "eigenvector residual " << residual << " too large for eigenvalue " << lambda;
    throw NumericalError(os.str());
  }
  return v;
}

SpectralReport classify(const Matrix& iteration, double tol_eig) {
  SpectralReport rep;
  rep.eigenvalues = eigenvalues(iteration);

  std::vector<Complex> unit;
  for (const auto& ev : rep.eigenvalues) {
    if (std::abs(ev - 1.0) <= tol_eig) {
      unit.push_back(ev);
    } else {
      rep.rho_rest = std::max(rep.rho_rest, std::abs(ev));
    }
  }
  rep.unit_eigen_count = static_cast<int>(unit.size());
  for (std::size_t a = 0; a < unit.size(); ++a) {
    for (std::size_t b = a + 1; b < unit.size(); ++b) {
      if (std::abs(unit[a] - unit[b]) > tol_eig / 10.0) {
        std::ostringstream os;
        os.precision(17);
        os << "ambiguous unit-eigenvalue multiplicity: " << unit[a] << " and " << unit[b]
           << " are both within " << tol_eig << " of 1 but not numerically coincident";
        throw NumericalError(os.str());
      }
    }
  }

  const bool inside = rep.rho_rest < 1.0 - tol_eig;
  if (rep.unit_eigen_count == 0) {
    rep.classification = inside ? Classification::stability : Classification::divergent_or_marginal;
    return rep;
  }
  if (rep.unit_eigen_count > 1) {
    rep.classification = Classification::divergent_or_marginal;
    return rep;
  }

  const Index n = iteration.rows();
  const double shift = unit.front().real();
  const Matrix a = iteration - shift * Matrix::Identity(n, n);
  Vector right = null_vector(a);
  Vector left = null_vector(a.transpose());
  Index imax = 0;
  right.cwiseAbs().maxCoeff(&imax);
  right /= right(imax);
  const double overlap = left.dot(right) / right.norm();
  if (std::abs(overlap) < kDefectiveThreshold) {
    throw NumericalError("left and right unit eigenvectors are orthogonal (defective eigenvalue)");
  }
  left /= left.dot(right);
  rep.left_vec = std::move(left);
  rep.right_vec = std::move(right);

  if (!inside) {
    rep.classification = Classification::divergent_or_marginal;
    return rep;
  }
  const bool parallel_to_ones = (rep.right_vec.array() - 1.0).abs().maxCoeff() <= tol_eig;
  rep.classification = parallel_to_ones ? Classification::consensus : Classification::convergence;
  return rep;
}

SpectralReport classify_system(const netcore::SystemSpec& sys, double tol_eig) {
  SpectralReport rep = classify(sys.iteration_matrix(), tol_eig);
  if (sys.appraisal().kind() == netcore::AppraisalKind::antagonistic &&
      rep.classification == Classification::consensus &&
      antagonistic_consensus_structure(sys.appraisal()) == RowSumStructure::neither) {
    log::error(
        "antagonistic appraisal reached a consensus verdict although D*1 is neither 0 nor -1; "
        "the right unit eigenvector passed the ones test only within tolerance");
  }
  return rep;
}

LimitPrediction predict_limit(const SpectralReport& report, const Vector& xi0) {
  if (report.classification != Classification::consensus &&
      report.classification != Classification::convergence) {
    throw ValidationError(std::string("predict_limit needs a consensus or convergence verdict, got ") +
                          to_string(report.classification));
  }
  if (!report.has_eigenvectors()) throw ValidationError("report carries no unit eigenvectors");
  if (xi0.size() != report.right_vec.size()) {
    throw ValidationError("initial opinion length does not match the system");
  }
  LimitPrediction out;
  const double weight = report.left_vec.dot(xi0);
  out.phi = report.right_vec * weight;
  if (report.classification == Classification::consensus) out.alpha = weight;
  return out;
}

LimitPrediction predict_limit(const netcore::SystemSpec& sys, const Vector& xi0, double tol_eig) {
  return predict_limit(classify_system(sys, tol_eig), xi0);
}

RowSumStructure antagonistic_consensus_structure(const netcore::AppraisalMatrix& d, double tol) {
  const Vector sums = d.matrix().rowwise().sum();
  if ((sums.array().abs() <= tol).all()) return RowSumStructure::row_sums_zero;
  if (((sums.array() + 1.0).abs() <= tol).all()) return RowSumStructure::row_sums_minus_one;
  return RowSumStructure::neither;
}

bool powers_converge(const Matrix& c, double tol_eig) {
  const auto ev = eigenvalues(c);
  int unit = 0;
  for (const auto& mu : ev) {
    if (std::abs(mu) < 1.0 - tol_eig) continue;
    if (std::abs(mu - 1.0) <= tol_eig) {
      ++unit;
      continue;
    }
    return false;
  }
  if (unit == 0) return true;
  const Index n = c.rows();
  Eigen::JacobiSVD<Matrix> svd(c - Matrix::Identity(n, n));
  const auto& sv = svd.singularValues();
  const double scale = std::max(1.0, sv(0));
  Index rank = 0;
  for (Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > kNullSvThreshold * scale) ++rank;
  }
  return n - rank == unit;
}

Matrix power_limit(const Matrix& c, double tol_eig) {
  if (!powers_converge(c, tol_eig)) throw ValidationError("powers of the matrix do not converge");
  const Index n = c.rows();
  const Matrix a = c - Matrix::Identity(n, n);
  Eigen::JacobiSVD<Matrix> right(a, Eigen::ComputeFullV);
  Eigen::JacobiSVD<Matrix> left(a.transpose(), Eigen::ComputeFullV);
  const double scale = std::max(1.0, right.singularValues()(0));
  Index rank = 0;
  for (Index i = 0; i < n; ++i) {
    if (right.singularValues()(i) > kNullSvThreshold * scale) ++rank;
  }
  const Index r = n - rank;
  if (r == 0) return Matrix::Zero(n, n);
  // Projector onto null(C - I) along range(C - I).
  const Matrix k = right.matrixV().rightCols(r);
  const Matrix w = left.matrixV().rightCols(r);
  return k * (w.transpose() * k).inverse() * w.transpose();
}

Vector predict_multi_issue_limit(const netcore::SystemSpec& sys, const Vector& xi0, double tol_eig) {
  const MultiIssueReport multi = classify_multi_issue(sys, tol_eig);
  const Index agents = sys.agents();
  const Index n = sys.issues();
  if (xi0.size() != agents * n) throw ValidationError("initial opinion length does not match the system");
  if (multi.verdict == MultiIssueVerdict::stable) return Vector::Zero(xi0.size());
  if (multi.verdict != MultiIssueVerdict::convergent) {
    throw ValidationError("multi-issue limit needs a stable or convergent verdict");
  }
  const SpectralReport base = classify_system(sys, tol_eig);
  const Matrix proj = base.right_vec * base.left_vec.transpose();
  const Matrix c_inf = power_limit(sys.mids()->matrix(), tol_eig);
  Vector out(xi0.size());
  for (Index i = 0; i < agents; ++i) {
    Vector acc = Vector::Zero(n);
    for (Index j = 0; j < agents; ++j) acc += proj(i, j) * xi0.segment(j * n, n);
    out.segment(i * n, n) = c_inf * acc;
  }
  return out;
}

MultiIssueReport classify_multi_issue(const netcore::SystemSpec& sys, double tol_eig) {
  if (!sys.mids()) throw ValidationError("classify_multi_issue needs a MiDS matrix");
  const SpectralReport base = classify_system(sys, tol_eig);
  if (base.unit_eigen_count != 1 || !(base.rho_rest < 1.0 - tol_eig)) {
    std::ostringstream os;
    os << "issue-free part must have a simple unit eigenvalue with the rest inside the unit disk "
       << "(unit count " << base.unit_eigen_count << ", rho_rest " << base.rho_rest << ")";
    throw ValidationError(os.str());
  }
  MultiIssueReport rep;
  rep.rho_rest = base.rho_rest;
  rep.mids_eigenvalues = eigenvalues(sys.mids()->matrix());
  for (const auto& mu : rep.mids_eigenvalues) rep.mids_radius = std::max(rep.mids_radius, std::abs(mu));
  rep.mids_powers_converge = powers_converge(sys.mids()->matrix(), tol_eig);

  if (rep.mids_radius < 1.0 - tol_eig) {
    rep.verdict = MultiIssueVerdict::stable;
    return rep;
  }
  const bool product_ok = rep.rho_rest * rep.mids_radius < 1.0 - tol_eig;
  if (product_ok && rep.mids_radius > 1.0 + tol_eig) {
    rep.unit_pairing_flagged = true;
    log::info("MiDS spectral radius exceeds 1: the unit eigenvalue of the issue-free part amplifies");
  }
  if (product_ok && rep.mids_radius <= 1.0 + tol_eig && rep.mids_powers_converge) {
    rep.verdict = MultiIssueVerdict::convergent;
  } else {
    rep.verdict = MultiIssueVerdict::divergent_or_marginal;
  }
  return rep;
}

const char* to_string(Classification c) noexcept {
  switch (c) {
    case Classification::consensus: return "consensus";
    case Classification::convergence: return "convergence";
    case Classification::stability: return "stability";
    case Classification::divergent_or_marginal: break;
  }
  return "divergent-or-marginal";
}

const char* to_string(RowSumStructure s) noexcept {
  switch (s) {
    case RowSumStructure::row_sums_zero: return "row_sums_zero";
    case RowSumStructure::row_sums_minus_one: return "row_sums_minus_one";
    case RowSumStructure::neither: break;
  }
  return "neither";
}

const char* to_string(MultiIssueVerdict v) noexcept {
  switch (v) {
    case MultiIssueVerdict::stable: return "stable";
    case MultiIssueVerdict::convergent: return "convergent";
    case MultiIssueVerdict::divergent_or_marginal: break;
  }
  return "divergent-or-marginal";
}

}  // namespace opinion::spectral
