#include "opinion/reproduce.hpp"

#include <filesystem>

#include "opinion/estimate.hpp"
#include "opinion/fixtures.hpp"
#include "opinion/log.hpp"
#include "opinion/simulate.hpp"
#include "opinion/spectral.hpp"

namespace opinion::reproduce {
namespace {

constexpr double kSpreadTol = 1e-6;
constexpr double kZeroTol = 1e-6;
constexpr double kClusterSpread = 1.0;

std::string artifact_path(const Options& opt, const std::string& file) {
  return (std::filesystem::path(opt.out_dir) / file).string();
}

void emit(RunReport& rep, const Options& opt, const std::string& file, const std::string& content) {
  if (!opt.write_files) return;
  const std::string path = artifact_path(opt, file);
  io::write_text(path, content);
  rep.artifacts.push_back(path);
}

void finish(RunReport& rep, const Options& opt) {
  if (!opt.write_files) return;
  const std::string path = artifact_path(opt, rep.name + ".json");
  rep.artifacts.push_back(path);
  io::write_text(path, rep.json().dump(2) + "\n");
}

// Example 1 runs: consensus, and whether the common value leaves the hull.
RunReport hull_run(const std::string& name, const std::string& fixture, const std::string& expected,
                   const Options& opt) {
  const auto& f = fixtures::get(fixture);
  RunReport rep;
  rep.name = name;
  rep.expected = expected;
  const auto report = spectral::classify_system(f.system, opt.tol_eig);
  const auto traj = simulate::run(f.system, f.x0);
  const Vector& final_xi = traj.final_state().xi;
  const double hull_lo = f.x0.minCoeff();
  const double hull_hi = f.x0.maxCoeff();
  const double value = final_xi.mean();

  rep.scalars["classification"] = spectral::to_string(report.classification);
  rep.scalars["rho_rest"] = io::number(report.rho_rest);
  rep.scalars["steps"] = traj.final_state().k;
  rep.scalars["stop_reason"] = simulate::to_string(traj.stop_reason);
  rep.scalars["final_spread"] = io::number(traj.final_spread());
  rep.scalars["final_value"] = io::number(value);
  rep.scalars["hull"] = io::Json::array({hull_lo, hull_hi});
  if (report.classification == spectral::Classification::consensus) {
    const auto limit = spectral::predict_limit(report, f.x0);
    rep.scalars["predicted_limit"] = io::number(*limit.alpha);
    rep.scalars["limit_error"] = io::number((final_xi - limit.phi).cwiseAbs().maxCoeff());
  }

  const bool consensus = report.classification == spectral::Classification::consensus &&
                         traj.stop_reason == simulate::StopReason::converged && traj.final_spread() < kSpreadTol;
  if (!consensus) {
    rep.verdict = "no-consensus";
  } else {
    rep.verdict = (value >= hull_lo && value <= hull_hi) ? "consensus-inside-hull" : "consensus-outside-hull";
  }
  emit(rep, opt, name + ".csv", io::trajectory_csv(traj));
  return rep;
}

RunReport multi_issue_run(const std::string& name, const std::string& fixture, const std::string& expected,
                          const Options& opt) {
  const auto& f = fixtures::get(fixture);
  RunReport rep;
  rep.name = name;
  rep.expected = expected;
  const auto multi = spectral::classify_multi_issue(f.system, opt.tol_eig);
  const auto traj = simulate::run_multi_issue(f.system, f.x0);
  const Vector& final_xi = traj.final_state().xi;
  const double max_abs = final_xi.cwiseAbs().maxCoeff();
  const Index n = f.system.issues();

  rep.scalars["multi_issue_verdict"] = spectral::to_string(multi.verdict);
  rep.scalars["rho_rest"] = io::number(multi.rho_rest);
  rep.scalars["mids_radius"] = io::number(multi.mids_radius);
  rep.scalars["steps"] = traj.final_state().k;
  rep.scalars["stop_reason"] = simulate::to_string(traj.stop_reason);
  rep.scalars["final_spread"] = io::number(traj.final_spread());
  rep.scalars["final_max_abs"] = io::number(max_abs);
  rep.scalars["final_xi"] = io::to_json(final_xi);
  if (multi.verdict != spectral::MultiIssueVerdict::divergent_or_marginal) {
    const Vector predicted = spectral::predict_multi_issue_limit(f.system, f.x0, opt.tol_eig);
    rep.scalars["predicted_limit"] = io::to_json(predicted);
    rep.scalars["limit_error"] = io::number((final_xi - predicted).cwiseAbs().maxCoeff());
  }
  const auto roots = netcore::spanning_tree_roots(f.system.laplacian());
  if (!roots.empty()) {
    const Index leader = roots.front();
    double drift = 0.0;
    for (const auto& s : traj.states) {
      drift = std::max(drift, (s.xi.segment(leader * n, n) - f.x0.segment(leader * n, n)).cwiseAbs().maxCoeff());
    }
    rep.scalars["leader"] = leader + 1;
    rep.scalars["leader_drift"] = io::number(drift);
  }

  if (traj.stop_reason != simulate::StopReason::converged) {
    rep.verdict = "no-limit";
  } else if (max_abs < kZeroTol) {
    rep.verdict = "stability";
  } else if (traj.final_spread() < kSpreadTol) {
    rep.verdict = "consensus";
  } else if (traj.final_spread() > kClusterSpread) {
    rep.verdict = "clusters";
  } else {
    rep.verdict = "undetermined";
  }
  emit(rep, opt, name + ".csv", io::trajectory_csv(traj));
  return rep;
}

RunReport estimation_run(const Options& opt) {
  const auto& f = fixtures::get("sec5-coop-issue-free");
  RunReport rep;
  rep.name = "example-estimation";
  rep.expected = "recovered";
  const Index m = 2 * f.system.agents();
  const auto scen = estimate::draw_scenarios(f.system, m, opt.seed);
  const auto res = estimate::solve_estimation(scen, f.system.lambda(), f.system.laplacian());
  const auto metrics = estimate::recovery_metrics(res.D_hat, f.system);

  rep.scalars["m"] = m;
  rep.scalars["seed"] = opt.seed;
  rep.scalars["gamma_star"] = io::number(res.gamma_star);
  rep.scalars["rank"] = res.rank;
  rep.scalars["unknowns"] = f.system.agents() * f.system.agents();
  rep.scalars["unique"] = res.unique;
  rep.scalars["recovery"] = io::to_json(metrics);

  if (res.gamma_star < 1e-16 && metrics.max_abs_error < 1e-6) {
    rep.verdict = "recovered";
  } else if (res.gamma_star < 1e-16 && metrics.error_modulo_ones < 1e-6) {
    rep.verdict = "recovered-modulo-ones";
  } else {
    rep.verdict = "not-recovered";
  }
  emit(rep, opt, "example-estimation-D_hat.csv", io::matrix_csv(res.D_hat));
  return rep;
}

}  // namespace

io::Json RunReport::json() const {
  io::Json j;
  j["name"] = name;
  j["verdict"] = verdict;
  j["expected"] = expected;
  j["matches"] = matches();
  j["scalars"] = scalars;
  j["artifacts"] = artifacts;
  return j;
}

const std::vector<std::string>& names() {
  static const std::vector<std::string> n{"fig2a", "fig2b", "fig5", "fig6", "fig7a", "fig7b", "example-estimation"};
  return n;
}

RunReport run(const std::string& name, const Options& opt) {
  if (opt.write_files) std::filesystem::create_directories(opt.out_dir);
  RunReport rep;
  if (name == "fig2a") {
    rep = hull_run(name, "example1", "consensus-outside-hull", opt);
  } else if (name == "fig2b") {
    rep = hull_run(name, "example1-half", "consensus-inside-hull", opt);
  } else if (name == "fig5") {
    rep = multi_issue_run(name, "sec5-coop", "consensus", opt);
  } else if (name == "fig6") {
    rep = multi_issue_run(name, "sec5-antag", "clusters", opt);
  } else if (name == "fig7a") {
    rep = multi_issue_run(name, "sec5-coop-stable", "stability", opt);
  } else if (name == "fig7b") {
    rep = multi_issue_run(name, "sec5-antag-stable", "stability", opt);
  } else if (name == "example-estimation") {
    rep = estimation_run(opt);
  } else {
    std::string known;
    for (const auto& n : names()) known += (known.empty() ? "" : ", ") + n;
    throw ValidationError("unknown experiment '" + name + "' (known: " + known + ")");
  }
  finish(rep, opt);
  if (!rep.matches()) log::info(rep.name + ": verdict " + rep.verdict + " differs from expected " + rep.expected);
  return rep;
}

}  // namespace opinion::reproduce
