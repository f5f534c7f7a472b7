#pragma once

// Trajectory engines for xi(k+1) = (I - Lambda L D) xi(k) and its multi-issue
// Kronecker form. Multi-issue vectors are agent-major: agent i's n issues
// occupy xi[i*n .. i*n + n - 1].

#include <vector>

#include "opinion/common.hpp"
#include "opinion/netcore.hpp"
#include "opinion/spectral.hpp"

namespace opinion::simulate {

struct OpinionState {
  Vector xi;
  Vector z;  // D * xi, issue-free runs only
  long k = 0;
};

enum class StopReason { converged, max_steps, diverged };

struct RunOptions {
  long max_steps = 10000;
  double tol_conv = 1e-10;
  int window = 10;
  double overflow_guard = 1e12;
  /// Keep every stride-th state (the last state is always kept).
  long stride = 1;
};

struct Trajectory {
  std::vector<OpinionState> states;
  StopReason stop_reason = StopReason::max_steps;
  /// Inter-agent spread of each stored state, maximised over issues.
  std::vector<double> spread_series;
  Index n_issues = 1;

  [[nodiscard]] const OpinionState& final_state() const { return states.back(); }
  [[nodiscard]] double final_spread() const { return spread_series.back(); }
};

[[nodiscard]] OpinionState step_issue_free(const netcore::SystemSpec& sys, const OpinionState& state);

/// Block form of ((I - Lambda L D) (x) C) xi without building the Kronecker matrix.
[[nodiscard]] Vector step_multi_issue(const netcore::SystemSpec& sys, const Vector& xi);

[[nodiscard]] Trajectory run(const netcore::SystemSpec& sys, const Vector& xi0, const RunOptions& opt = {});

/// Requires sys.mids(); xi0 has length N * n.
[[nodiscard]] Trajectory run_multi_issue(const netcore::SystemSpec& sys, const Vector& xi0,
                                         const RunOptions& opt = {});

/// max_i xi_i - min_i xi_i per issue, maximised over issues.
[[nodiscard]] double spread(const Vector& xi, Index n_issues = 1);

struct DisagreementSeries {
  std::vector<double> values;  // ||(I - iota varsigma') xi(k)||_inf per stored state
  bool flagged = false;        // trajectory diverged; values are not meaningful
};

/// Refuses reports without unit eigenvectors.
[[nodiscard]] DisagreementSeries disagreement_series(const Trajectory& traj, const spectral::SpectralReport& report);

[[nodiscard]] const char* to_string(StopReason r) noexcept;

}  // namespace opinion::simulate
