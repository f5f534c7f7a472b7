// Command-line front end. Talks to the library only through the C API.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "opinion/opinion_c.h"

namespace {

struct Globals {
  double tol_eig = 1e-8;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
};

struct Failure {
  int code;
};

void check(opn_status st) {
  if (st == OPN_OK) return;
  std::cerr << "error: " << opn_last_error() << "\n";
  throw Failure{static_cast<int>(st)};
}

struct CString {
  char* p = nullptr;
  ~CString() { opn_free(p); }
  std::string str() const { return p ? std::string(p) : std::string(); }
};

struct System {
  opn_system* p = nullptr;
  ~System() { opn_system_free(p); }
};

std::vector<double> read_vector(const std::string& path) {
  double* data = nullptr;
  size_t rows = 0, cols = 0;
  check(opn_csv_read(path.c_str(), &data, &rows, &cols));
  std::vector<double> v(data, data + rows * cols);
  opn_free(data);
  if (rows != 1 && cols != 1) {
    std::cerr << "error: " << path << ": expected a single row or column\n";
    throw Failure{2};
  }
  return v;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << content)) {
    std::cerr << "error: cannot write '" << path << "'\n";
    throw Failure{2};
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Opinion dynamics on interacting and appraisal networks"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--tol-eig", g.tol_eig, "Eigenvalue classification tolerance")->capture_default_str();
  app.add_option("--seed", g.seed, "Seed for randomized operations")->capture_default_str();
  app.add_option("--out-dir", g.out_dir, "Directory for reproduce artifacts")->capture_default_str();

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Classify a system and predict its limit");
  std::string a_system, a_x0;
  analyze->add_option("--system", a_system, "System JSON or fixture:NAME")->required();
  analyze->add_option("--x0", a_x0, "Initial opinions CSV");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Run a trajectory");
  std::string s_system, s_x0, s_out;
  opn_sim_options s_opt;
  opn_sim_options_init(&s_opt);
  bool s_issue_free = false;
  sim->add_option("--system", s_system, "System JSON or fixture:NAME")->required();
  sim->add_option("--x0", s_x0, "Initial opinions CSV (defaults to the system's)");
  sim->add_option("--steps", s_opt.max_steps, "Maximum steps")->capture_default_str();
  sim->add_option("--tol", s_opt.tol_conv, "Convergence tolerance")->capture_default_str();
  sim->add_option("--window", s_opt.window, "Consecutive small steps needed")->capture_default_str();
  sim->add_option("--stride", s_opt.stride, "Keep every stride-th state")->capture_default_str();
  sim->add_flag("--issue-free", s_issue_free, "Ignore the MiDS matrix");
  sim->add_option("--out", s_out, "Trajectory CSV path (stdout if omitted)");

  // stepsize
  auto* step = app.add_subcommand("stepsize", "Feasible step-size region");
  std::string st_lap, st_method = "direct", st_out;
  std::vector<std::string> st_mode{"rho-squared"};
  opn_stepsize_options st_opt;
  opn_stepsize_options_init(&st_opt);
  step->add_option("--laplacian", st_lap, "Laplacian CSV")->required();
  step->add_option("--mode", st_mode, "fixed-eps <v> | rho-squared")->expected(1, 2);
  step->add_option("--method", st_method, "direct | corollary1 | cubic | cubic-paper | hb")
      ->check(CLI::IsMember({"direct", "corollary1", "cubic", "cubic-paper", "hb"}));
  step->add_option("--grid", st_opt.grid, "Scan grid step")->capture_default_str();
  step->add_option("--rho-max", st_opt.rho_max, "Upper end of the scan (default from the spectrum)");
  step->add_option("--check-rho", st_opt.check_rho, "Attach per-eigenvalue diagnostics at this rho");
  step->add_option("--out", st_out, "CSV of (rho, max magnitude) samples");

  // estimate
  auto* est = app.add_subcommand("estimate", "Identify the appraisal matrix from sampled pairs");
  std::string e_system, e_out;
  opn_estimate_options e_opt;
  opn_estimate_options_init(&e_opt);
  est->add_option("--system", e_system, "Truth system JSON or fixture:NAME")->required();
  est->add_option("--samples", e_opt.samples, "Scenario count m (default 2N)");
  est->add_option("--gamma0", e_opt.gamma0, "Grow the sample set until gamma_star <= this target");
  est->add_option("--m-cap", e_opt.m_cap, "Sample cap when --gamma0 is set")->capture_default_str();
  est->add_option("--box", e_opt.box, "Sampling box half-width")->capture_default_str();
  est->add_option("--noise", e_opt.noise, "Uniform perturbation on observed next states")->capture_default_str();
  est->add_option("--trials", e_opt.violation_trials, "Fresh samples for the violation estimate");
  est->add_option("--out", e_out, "Result JSON path (stdout if omitted)");

  // samplebound
  auto* sb = app.add_subcommand("samplebound", "Scenario sample-size bound");
  long sb_agents = 0, sb_dim = 0;
  double sb_eps = 0.1, sb_beta = 0.01;
  std::string sb_formula = "campi";
  auto* agents_opt = sb->add_option("--agents", sb_agents, "N (d = N^2)");
  sb->add_option("--dim", sb_dim, "Decision dimension d")->excludes(agents_opt);
  sb->add_option("--eps", sb_eps, "Violation level")->capture_default_str();
  sb->add_option("--beta", sb_beta, "Confidence level")->capture_default_str();
  sb->add_option("--formula", sb_formula, "campi | paper")->check(CLI::IsMember({"campi", "paper"}));

  // reproduce
  auto* rep = app.add_subcommand("reproduce", "Run named experiments");
  std::vector<std::string> rep_names;
  bool rep_all = false;
  rep->add_option("names", rep_names, "fig2a fig2b fig5 fig6 fig7a fig7b example-estimation");
  rep->add_flag("--all", rep_all, "Run every experiment");

  app.add_subcommand("fixtures", "List the fixture catalog");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    (void)app.exit(e);
    return 1;
  }

  try {
    if (*analyze) {
      System sys;
      check(opn_system_load(a_system.c_str(), &sys.p));
      opn_analyze_options o;
      opn_analyze_options_init(&o);
      o.tol_eig = g.tol_eig;
      std::vector<double> x0;
      if (!a_x0.empty()) {
        x0 = read_vector(a_x0);
        o.x0 = x0.data();
        o.x0_len = x0.size();
      }
      CString json;
      check(opn_analyze(sys.p, &o, &json.p));
      std::cout << json.str() << "\n";
    } else if (*sim) {
      System sys;
      check(opn_system_load(s_system.c_str(), &sys.p));
      std::vector<double> x0;
      if (!s_x0.empty()) x0 = read_vector(s_x0);
      if (s_issue_free) s_opt.multi_issue = 0;
      CString csv, summary;
      check(opn_simulate(sys.p, x0.empty() ? nullptr : x0.data(), x0.size(), &s_opt, &csv.p, &summary.p));
      if (s_out.empty()) {
        std::cout << csv.str();
      } else {
        write_file(s_out, csv.str());
        std::cout << summary.str() << "\n";
      }
    } else if (*step) {
      double* data = nullptr;
      size_t rows = 0, cols = 0;
      check(opn_csv_read(st_lap.c_str(), &data, &rows, &cols));
      std::unique_ptr<double, decltype(&opn_free)> owned(data, &opn_free);
      if (rows != cols) {
        std::cerr << "error: " << st_lap << ": Laplacian must be square, got " << rows << "x" << cols << "\n";
        return 2;
      }
      if (st_mode[0] == "fixed-eps") {
        if (st_mode.size() != 2) {
          std::cerr << "error: --mode fixed-eps needs a value\n";
          return 1;
        }
        st_opt.eps_equals_rho = 0;
        try {
          st_opt.epsilon = std::stod(st_mode[1]);
        } catch (const std::exception&) {
          std::cerr << "error: --mode fixed-eps: '" << st_mode[1] << "' is not a number\n";
          return 1;
        }
      } else if (st_mode[0] == "rho-squared" && st_mode.size() == 1) {
        st_opt.eps_equals_rho = 1;
      } else {
        std::cerr << "error: --mode must be 'fixed-eps <v>' or 'rho-squared'\n";
        return 1;
      }
      if (st_method == "direct") st_opt.method = OPN_STEP_DIRECT;
      if (st_method == "corollary1") st_opt.method = OPN_STEP_COROLLARY1;
      if (st_method == "cubic") st_opt.method = OPN_STEP_CUBIC;
      if (st_method == "cubic-paper") st_opt.method = OPN_STEP_CUBIC_PAPER;
      if (st_method == "hb") st_opt.method = OPN_STEP_HB;
      CString json, csv;
      check(opn_stepsize(data, rows, &st_opt, &json.p, st_out.empty() ? nullptr : &csv.p));
      if (!st_out.empty()) write_file(st_out, csv.str());
      std::cout << json.str() << "\n";
    } else if (*est) {
      System sys;
      check(opn_system_load(e_system.c_str(), &sys.p));
      e_opt.seed = g.seed;
      CString json;
      check(opn_estimate(sys.p, &e_opt, &json.p));
      if (e_out.empty()) {
        std::cout << json.str() << "\n";
      } else {
        write_file(e_out, json.str() + "\n");
      }
    } else if (*sb) {
      const long d = sb_dim > 0 ? sb_dim : sb_agents * sb_agents;
      if (d <= 0) {
        std::cerr << "error: samplebound needs --agents or --dim\n";
        return 1;
      }
      long m = 0;
      double tail = 0.0;
      check(opn_sample_bound(d, sb_eps, sb_beta, sb_formula == "campi" ? OPN_BOUND_CAMPI : OPN_BOUND_PAPER, &m,
                             &tail));
      std::printf("d=%ld eps=%.17g beta=%.17g formula=%s m=%ld tail=%.17g\n", d, sb_eps, sb_beta,
                  sb_formula.c_str(), m, tail);
    } else if (*rep) {
      if (rep_all) {
        CString list;
        check(opn_reproduce_list(&list.p));
        for (const auto& n : nlohmann::json::parse(list.str())) rep_names.push_back(n.get<std::string>());
      }
      if (rep_names.empty()) {
        std::cerr << "error: name an experiment or pass --all\n";
        return 1;
      }
      opn_reproduce_options o;
      opn_reproduce_options_init(&o);
      o.tol_eig = g.tol_eig;
      o.seed = g.seed;
      o.out_dir = g.out_dir.c_str();
      for (const auto& name : rep_names) {
        CString json;
        int matches = 0;
        check(opn_reproduce(name.c_str(), &o, &json.p, &matches));
        const auto report = nlohmann::json::parse(json.str());
        std::cout << name << ": " << report["verdict"].get<std::string>() << " (expected "
                  << report["expected"].get<std::string>() << ") " << (matches ? "match" : "MISMATCH") << "\n";
      }
    } else {
      CString json;
      check(opn_fixture_list(&json.p));
      std::cout << json.str() << "\n";
    }
  } catch (const Failure& f) {
    return f.code;
  }
  return 0;
}
