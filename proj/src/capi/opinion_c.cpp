#include "opinion/opinion_c.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <new>
#include <string>

#include "opinion/estimate.hpp"
#include "opinion/fixtures.hpp"
#include "opinion/io.hpp"
#include "opinion/log.hpp"
#include "opinion/reproduce.hpp"
#include "opinion/simulate.hpp"
#include "opinion/spectral.hpp"
#include "opinion/stepsize.hpp"

using namespace opinion;

struct opn_system {
  io::LoadedSystem loaded;
};

namespace {

thread_local std::string g_last_error;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

template <typename F>
opn_status guard(F&& f) noexcept {
  g_last_error.clear();
  try {
    f();
    return OPN_OK;
  } catch (const UsageError& e) {
    g_last_error = e.what();
    return OPN_ERR_USAGE;
  } catch (const ValidationError& e) {
    g_last_error = e.what();
    return OPN_ERR_VALIDATION;
  } catch (const NumericalError& e) {
    g_last_error = e.what();
    return OPN_ERR_NUMERICAL;
  } catch (const std::filesystem::filesystem_error& e) {
    g_last_error = e.what();
    return OPN_ERR_VALIDATION;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return OPN_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = std::string("internal error: ") + e.what();
    return OPN_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "internal error: unknown exception";
    return OPN_ERR_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (p == nullptr) throw UsageError(std::string(what) + " must not be NULL");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

double* dup_array(const double* src, std::size_t n) {
  if (n == 0) return nullptr;
  auto* out = static_cast<double*>(std::malloc(n * sizeof(double)));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, src, n * sizeof(double));
  return out;
}

Vector to_vector(const double* data, std::size_t len) {
  Vector v(static_cast<Index>(len));
  for (std::size_t i = 0; i < len; ++i) v(static_cast<Index>(i)) = data[i];
  return v;
}

io::Json dims_json(const netcore::SystemSpec& sys) {
  io::Json j;
  j["agents"] = sys.agents();
  j["issues"] = sys.issues();
  return j;
}

std::optional<Vector> pick_x0(const opn_system* sys, const double* x0, std::size_t len) {
  if (x0 != nullptr && len > 0) return to_vector(x0, len);
  return sys->loaded.x0;
}

}  // namespace

extern "C" {

const char* opn_version(void) { return "1.0.0"; }

const char* opn_last_error(void) { return g_last_error.c_str(); }

void opn_free(void* p) { std::free(p); }

opn_status opn_set_log_level(int level) {
  return guard([&] {
    if (level < 0 || level > 2) throw UsageError("log level must be 0, 1 or 2");
    log::set_level(static_cast<log::Level>(level));
  });
}

opn_status opn_system_load(const char* source, opn_system** out) {
  return guard([&] {
    require(source, "source");
    require(out, "out");
    *out = new opn_system{io::load_system(source)};
  });
}

opn_status opn_system_from_json(const char* json, opn_system** out) {
  return guard([&] {
    require(json, "json");
    require(out, "out");
    *out = new opn_system{io::parse_system_json(json, "<json>")};
  });
}

void opn_system_free(opn_system* sys) { delete sys; }

opn_status opn_system_dims(const opn_system* sys, size_t* agents, size_t* issues) {
  return guard([&] {
    require(sys, "sys");
    if (agents) *agents = static_cast<size_t>(sys->loaded.system.agents());
    if (issues) *issues = static_cast<size_t>(sys->loaded.system.issues());
  });
}

opn_status opn_system_x0(const opn_system* sys, double** data, size_t* len) {
  return guard([&] {
    require(sys, "sys");
    require(data, "data");
    require(len, "len");
    *data = nullptr;
    *len = 0;
    if (sys->loaded.x0) {
      *data = dup_array(sys->loaded.x0->data(), static_cast<std::size_t>(sys->loaded.x0->size()));
      *len = static_cast<size_t>(sys->loaded.x0->size());
    }
  });
}

opn_status opn_system_json(const opn_system* sys, char** json) {
  return guard([&] {
    require(sys, "sys");
    require(json, "json");
    *json = dup_string(io::system_to_json(sys->loaded.system, sys->loaded.x0).dump(2));
  });
}

opn_status opn_fixture_list(char** json) {
  return guard([&] {
    require(json, "json");
    io::Json out = io::Json::array();
    for (const auto& f : fixtures::catalog()) {
      io::Json j;
      j["name"] = f.name;
      j["description"] = f.description;
      j.update(dims_json(f.system));
      out.push_back(std::move(j));
    }
    *json = dup_string(out.dump(2));
  });
}

opn_status opn_csv_read(const char* path, double** data, size_t* rows, size_t* cols) {
  return guard([&] {
    require(path, "path");
    require(data, "data");
    require(rows, "rows");
    require(cols, "cols");
    const Matrix m = io::read_csv(path);
    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = m;
    *data = dup_array(rm.data(), static_cast<std::size_t>(rm.size()));
    *rows = static_cast<size_t>(m.rows());
    *cols = static_cast<size_t>(m.cols());
  });
}

void opn_analyze_options_init(opn_analyze_options* opt) {
  if (opt == nullptr) return;
  opt->tol_eig = kTolEig;
  opt->x0 = nullptr;
  opt->x0_len = 0;
}

opn_status opn_analyze(const opn_system* sys, const opn_analyze_options* opt, char** json) {
  return guard([&] {
    require(sys, "sys");
    require(json, "json");
    opn_analyze_options defaults;
    opn_analyze_options_init(&defaults);
    const opn_analyze_options& o = opt ? *opt : defaults;
    if (!(o.tol_eig > 0.0)) throw UsageError("tol_eig must be positive");

    const auto& s = sys->loaded.system;
    io::Json out;
    out["source"] = sys->loaded.source;
    out.update(dims_json(s));
    out["appraisal_kind"] = netcore::to_string(s.appraisal().kind());
    io::Json roots = io::Json::array();
    for (Index r : netcore::spanning_tree_roots(s.laplacian())) roots.push_back(r + 1);
    out["has_spanning_tree"] = !roots.empty();
    out["spanning_tree_roots"] = roots;
    if (s.appraisal().kind() == netcore::AppraisalKind::antagonistic) {
      out["row_sum_structure"] = spectral::to_string(spectral::antagonistic_consensus_structure(s.appraisal()));
    }
    const auto report = spectral::classify_system(s, o.tol_eig);
    out["spectral"] = io::to_json(report);

    if (s.mids()) {
      try {
        out["multi_issue"] = io::to_json(spectral::classify_multi_issue(s, o.tol_eig));
      } catch (const ValidationError& e) {
        out["multi_issue"] = {{"error", e.what()}};
      }
    }

    const auto x0 = pick_x0(sys, o.x0, o.x0_len);
    if (x0) {
      if (x0->size() != s.agents() * s.issues()) {
        throw ValidationError("x0 has length " + std::to_string(x0->size()) + ", expected " +
                              std::to_string(s.agents() * s.issues()));
      }
      if (s.mids()) {
        try {
          out["limit"] = {{"phi", io::to_json(spectral::predict_multi_issue_limit(s, *x0, o.tol_eig))}};
        } catch (const ValidationError& e) {
          out["limit"] = {{"error", e.what()}};
        }
      } else if (report.classification == spectral::Classification::consensus ||
                 report.classification == spectral::Classification::convergence) {
        const auto limit = spectral::predict_limit(report, *x0);
        io::Json lj;
        lj["phi"] = io::to_json(limit.phi);
        if (limit.alpha) lj["alpha"] = io::number(*limit.alpha);
        out["limit"] = std::move(lj);
      } else if (report.classification == spectral::Classification::stability) {
        out["limit"] = {{"phi", io::to_json(Vector(Vector::Zero(x0->size())))}};
      }
    }
    *json = dup_string(out.dump(2));
  });
}

void opn_sim_options_init(opn_sim_options* opt) {
  if (opt == nullptr) return;
  const simulate::RunOptions d;
  opt->max_steps = d.max_steps;
  opt->tol_conv = d.tol_conv;
  opt->window = d.window;
  opt->overflow_guard = d.overflow_guard;
  opt->stride = d.stride;
  opt->multi_issue = -1;
}

opn_status opn_simulate(const opn_system* sys, const double* x0, size_t x0_len, const opn_sim_options* opt,
                        char** csv, char** summary) {
  return guard([&] {
    require(sys, "sys");
    opn_sim_options defaults;
    opn_sim_options_init(&defaults);
    const opn_sim_options& o = opt ? *opt : defaults;
    const auto& s = sys->loaded.system;
    const auto start = pick_x0(sys, x0, x0_len);
    if (!start) throw UsageError("no initial opinions given and the system carries none");

    simulate::RunOptions ro;
    ro.max_steps = o.max_steps;
    ro.tol_conv = o.tol_conv;
    ro.window = o.window;
    ro.overflow_guard = o.overflow_guard;
    ro.stride = o.stride;
    const bool multi = o.multi_issue < 0 ? s.mids().has_value() : o.multi_issue != 0;
    const auto traj = multi ? simulate::run_multi_issue(s, *start, ro) : simulate::run(s, *start, ro);

    if (csv) *csv = dup_string(io::trajectory_csv(traj));
    if (summary) {
      io::Json j;
      j["stop_reason"] = simulate::to_string(traj.stop_reason);
      j["steps"] = traj.final_state().k;
      j["states_stored"] = traj.states.size();
      j["n_issues"] = traj.n_issues;
      j["final_spread"] = io::number(traj.final_spread());
      j["final_xi"] = io::to_json(traj.final_state().xi);
      *summary = dup_string(j.dump(2));
    }
  });
}

void opn_stepsize_options_init(opn_stepsize_options* opt) {
  if (opt == nullptr) return;
  opt->method = OPN_STEP_DIRECT;
  opt->eps_equals_rho = 1;
  opt->epsilon = 0.0;
  opt->grid = 1e-3;
  opt->rho_max = 0.0;
  opt->check_rho = 0.0;
}

opn_status opn_stepsize(const double* laplacian, size_t n, const opn_stepsize_options* opt, char** json,
                        char** csv) {
  return guard([&] {
    require(laplacian, "laplacian");
    if (n == 0) throw UsageError("laplacian dimension must be positive");
    opn_stepsize_options defaults;
    opn_stepsize_options_init(&defaults);
    const opn_stepsize_options& o = opt ? *opt : defaults;

    const Matrix lm = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        laplacian, static_cast<Index>(n), static_cast<Index>(n));
    const netcore::InteractingLaplacian l(lm);
    const stepsize::Mode mode = o.eps_equals_rho ? stepsize::Mode{stepsize::EpsEqualsRho{}}
                                                 : stepsize::Mode{stepsize::EpsFixed{o.epsilon}};
    stepsize::ScanOptions scan;
    scan.grid_step = o.grid;
    scan.rho_max = o.rho_max;

    auto need_rho_squared = [&](const char* what) {
      if (!o.eps_equals_rho) throw UsageError(std::string(what) + " applies only to the rho-squared mode");
    };
    stepsize::FeasibleRegion region;
    switch (o.method) {
      case OPN_STEP_DIRECT: region = stepsize::feasible_rho_direct(l, mode, scan); break;
      case OPN_STEP_COROLLARY1:
        if (o.eps_equals_rho) throw UsageError("corollary1 needs a fixed epsilon");
        region = stepsize::feasible_rho_corollary1(l, o.epsilon, o.rho_max);
        break;
      case OPN_STEP_CUBIC:
        need_rho_squared("cubic");
        region = stepsize::feasible_rho_cubic(l, stepsize::CubicVariant::corrected, o.rho_max);
        break;
      case OPN_STEP_CUBIC_PAPER:
        need_rho_squared("cubic-paper");
        region = stepsize::feasible_rho_cubic(l, stepsize::CubicVariant::paper, o.rho_max);
        break;
      case OPN_STEP_HB:
        need_rho_squared("hb");
        region = stepsize::feasible_rho_hb(l, scan);
        break;
      default: throw UsageError("unknown step-size method");
    }

    io::Json out;
    out["mode"] = o.eps_equals_rho ? "rho-squared" : "fixed-eps";
    if (!o.eps_equals_rho) out["epsilon"] = io::number(o.epsilon);
    out["nonzero_eigenvalues"] = io::to_json(stepsize::nonzero_eigenvalues(l));
    out["region"] = io::to_json(region);
    if (o.method != OPN_STEP_DIRECT) {
      stepsize::ScanOptions ref = scan;
      ref.rho_max = region.rho_max;
      out["direct_reference"] = io::to_json(stepsize::feasible_rho_direct(l, mode, ref));
    }
    out["epsilon_range"] = io::to_json(stepsize::epsilon_range(l));
    if (o.check_rho > 0.0) out["diagnostics"] = io::to_json(stepsize::theorem_hb_check(l, o.check_rho));
    if (json) *json = dup_string(out.dump(2));
    if (csv) {
      stepsize::ScanOptions samples = scan;
      samples.rho_max = region.rho_max;
      *csv = dup_string(io::magnitude_csv(stepsize::scan_magnitude(l, mode, samples)));
    }
  });
}

void opn_estimate_options_init(opn_estimate_options* opt) {
  if (opt == nullptr) return;
  opt->samples = 0;
  opt->seed = 1;
  opt->gamma0 = 0.0;
  opt->m_cap = 1000;
  opt->box = 1.0;
  opt->noise = 0.0;
  opt->violation_trials = 0;
}

opn_status opn_estimate(const opn_system* truth, const opn_estimate_options* opt, char** json) {
  return guard([&] {
    require(truth, "truth");
    require(json, "json");
    opn_estimate_options defaults;
    opn_estimate_options_init(&defaults);
    const opn_estimate_options& o = opt ? *opt : defaults;
    const auto& s = truth->loaded.system;
    const Index m = o.samples > 0 ? static_cast<Index>(o.samples) : 2 * s.agents();
    estimate::ScenarioOptions so;
    so.box = o.box;
    so.noise = o.noise;

    io::Json out;
    out["seed"] = o.seed;
    out["box"] = o.box;
    out["noise"] = o.noise;
    estimate::EstimationResult res;
    if (o.gamma0 > 0.0) {
      const auto a1 = estimate::algorithm1(s, o.gamma0, m, static_cast<Index>(o.m_cap), o.seed, so);
      res = a1.result;
      io::Json aj;
      aj["gamma0"] = o.gamma0;
      aj["m0"] = m;
      aj["m"] = a1.m;
      aj["gamma_history"] = io::Json::array();
      for (double g : a1.gamma_history) aj["gamma_history"].push_back(io::number(g));
      out["algorithm1"] = std::move(aj);
    } else {
      res = estimate::solve_estimation(estimate::draw_scenarios(s, m, o.seed, so), s.lambda(), s.laplacian());
    }
    out["result"] = io::to_json(res);
    out["recovery"] = io::to_json(estimate::recovery_metrics(res.D_hat, s));
    const Matrix projected = estimate::project_rows(res.D_hat);
    out["projected"] = {{"D", io::to_json(projected)},
                        {"recovery", io::to_json(estimate::recovery_metrics(projected, s))}};
    if (o.violation_trials > 0) {
      out["violation"] = {{"trials", o.violation_trials},
                          {"v_hat", estimate::empirical_violation(res, s, res.gamma_star, o.violation_trials,
                                                                  o.seed, so)}};
    }
    *json = dup_string(out.dump(2));
  });
}

opn_status opn_sample_bound(long d, double epsilon, double beta, opn_bound_formula formula, long* m, double* tail) {
  return guard([&] {
    require(m, "m");
    if (formula != OPN_BOUND_CAMPI && formula != OPN_BOUND_PAPER) throw UsageError("unknown bound formula");
    estimate::SampleBoundQuery q;
    q.d = d;
    q.epsilon = epsilon;
    q.beta = beta;
    q.formula = formula == OPN_BOUND_CAMPI ? estimate::BoundFormula::campi_garatti : estimate::BoundFormula::paper_literal;
    const auto b = estimate::sample_bound(q);
    *m = b.m;
    if (tail) *tail = b.tail;
  });
}

void opn_reproduce_options_init(opn_reproduce_options* opt) {
  if (opt == nullptr) return;
  opt->tol_eig = kTolEig;
  opt->seed = 1;
  opt->out_dir = ".";
}

opn_status opn_reproduce(const char* name, const opn_reproduce_options* opt, char** json, int* matches) {
  return guard([&] {
    require(name, "name");
    opn_reproduce_options defaults;
    opn_reproduce_options_init(&defaults);
    const opn_reproduce_options& o = opt ? *opt : defaults;
    reproduce::Options ro;
    ro.tol_eig = o.tol_eig;
    ro.seed = o.seed;
    ro.out_dir = o.out_dir ? o.out_dir : ".";
    const auto rep = reproduce::run(name, ro);
    if (json) *json = dup_string(rep.json().dump(2));
    if (matches) *matches = rep.matches() ? 1 : 0;
  });
}

opn_status opn_reproduce_list(char** json) {
  return guard([&] {
    require(json, "json");
    *json = dup_string(io::Json(reproduce::names()).dump());
  });
}

}  // extern "C"
