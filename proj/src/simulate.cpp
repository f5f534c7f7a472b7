#include "opinion/simulate.hpp"

#include <cmath>
#include <functional>
#include <sstream>

namespace opinion::simulate {
namespace {

// X is N x n (row i = agent i); returns X - Lambda * L * (D * X).
Matrix issue_free_map(const netcore::SystemSpec& sys, const Matrix& x) {
  return x - sys.lambda().diag().asDiagonal() * (sys.laplacian().matrix() * (sys.appraisal().matrix() * x));
}

Matrix as_blocks(const Vector& xi, Index agents, Index issues) {
  // Agent-major vector viewed as the row-major N x n matrix.
  Matrix x(agents, issues);
  for (Index i = 0; i < agents; ++i) {
    for (Index p = 0; p < issues; ++p) x(i, p) = xi(i * issues + p);
  }
  return x;
}

Vector from_blocks(const Matrix& x) {
  Vector xi(x.size());
  for (Index i = 0; i < x.rows(); ++i) {
    for (Index p = 0; p < x.cols(); ++p) xi(i * x.cols() + p) = x(i, p);
  }
  return xi;
}

void check_options(const RunOptions& opt) {
  if (opt.max_steps < 1) throw ValidationError("max_steps must be >= 1");
  if (opt.window < 1) throw ValidationError("convergence window must be >= 1");
  if (opt.stride < 1) throw ValidationError("stride must be >= 1");
  if (!(opt.tol_conv > 0.0)) throw ValidationError("tol_conv must be positive");
}

Trajectory iterate(const OpinionState& start, Index n_issues, const RunOptions& opt,
                   const std::function<OpinionState(const OpinionState&)>& step) {
  check_options(opt);
  Trajectory traj;
  traj.n_issues = n_issues;
  auto keep = [&](const OpinionState& s) {
    traj.states.push_back(s);
    traj.spread_series.push_back(spread(s.xi, n_issues));
  };
  keep(start);
  OpinionState cur = start;
  int streak = 0;
  for (long k = 0; k < opt.max_steps; ++k) {
    OpinionState next = step(cur);
    const bool blown = !next.xi.allFinite() || next.xi.cwiseAbs().maxCoeff() > opt.overflow_guard;
    const double delta = blown ? 0.0 : (next.xi - cur.xi).cwiseAbs().maxCoeff();
    cur = std::move(next);
    if (blown) {
      keep(cur);
      traj.stop_reason = StopReason::diverged;
      return traj;
    }
    streak = delta < opt.tol_conv ? streak + 1 : 0;
    const bool done = streak >= opt.window;
    if (done || cur.k % opt.stride == 0 || k + 1 == opt.max_steps) keep(cur);
    if (done) {
      traj.stop_reason = StopReason::converged;
      return traj;
    }
  }
  traj.stop_reason = StopReason::max_steps;
  return traj;
}

}  // namespace

OpinionState step_issue_free(const netcore::SystemSpec& sys, const OpinionState& state) {
  if (state.xi.size() != sys.agents()) {
    std::ostringstream os;
    os << "opinion vector has length " << state.xi.size() << ", system has " << sys.agents() << " agents";
    throw ValidationError(os.str());
  }
  OpinionState next;
  next.xi = issue_free_map(sys, state.xi);
  next.z = sys.appraisal().matrix() * next.xi;
  next.k = state.k + 1;
  return next;
}

Vector step_multi_issue(const netcore::SystemSpec& sys, const Vector& xi) {
  if (!sys.mids()) throw ValidationError("multi-issue step needs a MiDS matrix");
  const Index n = sys.issues();
  if (xi.size() != sys.agents() * n) {
    std::ostringstream os;
    os << "multi-issue opinion vector has length " << xi.size() << ", expected " << sys.agents() * n;
    throw ValidationError(os.str());
  }
  // Block i of the result is C * sum_j M_ij x_j, i.e. X_new = M X C'.
  return from_blocks(issue_free_map(sys, as_blocks(xi, sys.agents(), n)) * sys.mids()->matrix().transpose());
}

Trajectory run(const netcore::SystemSpec& sys, const Vector& xi0, const RunOptions& opt) {
  OpinionState start;
  start.xi = xi0;
  if (xi0.size() != sys.agents()) {
    std::ostringstream os;
    os << "initial opinion vector has length " << xi0.size() << ", system has " << sys.agents() << " agents";
    throw ValidationError(os.str());
  }
  start.z = sys.appraisal().matrix() * xi0;
  return iterate(start, 1, opt, [&sys](const OpinionState& s) { return step_issue_free(sys, s); });
}

Trajectory run_multi_issue(const netcore::SystemSpec& sys, const Vector& xi0, const RunOptions& opt) {
  if (!sys.mids()) throw ValidationError("run_multi_issue needs a MiDS matrix");
  OpinionState start;
  start.xi = xi0;
  (void)step_multi_issue(sys, xi0);  // dimension check up front
  return iterate(start, sys.issues(), opt, [&sys](const OpinionState& s) {
    OpinionState next;
    next.xi = step_multi_issue(sys, s.xi);
    next.k = s.k + 1;
    return next;
  });
}

double spread(const Vector& xi, Index n_issues) {
  if (xi.size() == 0) return 0.0;
  const Index agents = xi.size() / n_issues;
  double out = 0.0;
  for (Index p = 0; p < n_issues; ++p) {
    double lo = xi(p), hi = xi(p);
    for (Index i = 1; i < agents; ++i) {
      lo = std::min(lo, xi(i * n_issues + p));
      hi = std::max(hi, xi(i * n_issues + p));
    }
    out = std::max(out, hi - lo);
  }
  return out;
}

DisagreementSeries disagreement_series(const Trajectory& traj, const spectral::SpectralReport& report) {
  if (!report.has_eigenvectors()) {
    throw ValidationError("disagreement series needs a report with unit eigenvectors");
  }
  DisagreementSeries out;
  out.flagged = traj.stop_reason == StopReason::diverged;
  const Index n = traj.n_issues;
  for (const auto& s : traj.states) {
    if (s.xi.size() != report.right_vec.size() * n) {
      throw ValidationError("trajectory and spectral report dimensions disagree");
    }
    const Matrix x = as_blocks(s.xi, report.right_vec.size(), n);
    const Matrix theta = x - report.right_vec * (report.left_vec.transpose() * x);
    out.values.push_back(theta.cwiseAbs().maxCoeff());
  }
  return out;
}

const char* to_string(StopReason r) noexcept {
  switch (r) {
    case StopReason::converged: return "converged";
    case StopReason::diverged: return "diverged";
    case StopReason::max_steps: break;
  }
  return "max_steps";
}

}  // namespace opinion::simulate
