#include "opinion/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "opinion/fixtures.hpp"

namespace opinion::io {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

bool parse_number(const std::string& tok, double& out) {
  if (tok.empty()) return false;
  const char* first = tok.data();
  if (*first == '+') ++first;
  const auto res = std::from_chars(first, tok.data() + tok.size(), out);
  return res.ec == std::errc() && res.ptr == tok.data() + tok.size() && std::isfinite(out);
}

[[noreturn]] void field_error(const std::string& source, const std::string& field, const std::string& what) {
  throw ValidationError(source + ": field '" + field + "' " + what);
}

Vector json_vector(const Json& j, const std::string& source, const std::string& field) {
  if (!j.is_array() || j.empty()) field_error(source, field, "must be a non-empty array of numbers");
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) {
      field_error(source, field, "entry " + std::to_string(i + 1) + " is not a number");
    }
    v(static_cast<Index>(i)) = j[i].get<double>();
  }
  return v;
}

Matrix json_matrix(const Json& j, const std::string& source, const std::string& field) {
  if (!j.is_array() || j.empty()) field_error(source, field, "must be a non-empty array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  Matrix m(static_cast<Index>(j.size()), static_cast<Index>(cols));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].size() != cols || cols == 0) {
      field_error(source, field, "row " + std::to_string(i + 1) + " must hold " + std::to_string(cols) + " numbers");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      if (!j[i][c].is_number()) {
        field_error(source, field,
                    "row " + std::to_string(i + 1) + " column " + std::to_string(c + 1) + " is not a number");
      }
      m(static_cast<Index>(i), static_cast<Index>(c)) = j[i][c].get<double>();
    }
  }
  return m;
}

// Validation errors raised by the matrix types get the source prefix.
template <typename F>
auto with_source(const std::string& source, F&& f) {
  try {
    return f();
  } catch (const ValidationError& e) {
    throw ValidationError(source + ": " + e.what());
  }
}

}  // namespace

Matrix parse_csv(const std::string& text, const std::string& source) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::vector<double> row;
    std::size_t start = 0;
    int col = 0;
    for (;;) {
      const auto comma = t.find(',', start);
      const std::string tok = trim(std::string_view(t).substr(start, comma == std::string::npos ? std::string::npos
                                                                                             : comma - start));
      ++col;
      double v = 0.0;
      if (!parse_number(tok, v)) {
        std::ostringstream os;
        os << source << ":" << lineno << ": column " << col << ": '" << tok << "' is not a finite number";
        throw ValidationError(os.str());
      }
      row.push_back(v);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (rows.empty()) {
      width = row.size();
    } else if (row.size() != width) {
      std::ostringstream os;
      os << source << ":" << lineno << ": expected " << width << " values, got " << row.size();
      throw ValidationError(os.str());
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ValidationError(source + ": no data rows");
  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(width));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < width; ++j) m(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
  }
  return m;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << content;
  if (!out) throw ValidationError("write to '" + path + "' failed");
}

Matrix read_csv(const std::string& path) { return parse_csv(read_text(path), path); }

Vector read_vector_csv(const std::string& path) {
  const Matrix m = read_csv(path);
  if (m.rows() == 1) return m.row(0).transpose();
  if (m.cols() == 1) return m.col(0);
  throw ValidationError(path + ": expected a single row or a single column, got " + std::to_string(m.rows()) +
                        "x" + std::to_string(m.cols()));
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

LoadedSystem parse_system_json(const std::string& text, const std::string& source) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ValidationError(source + ": " + e.what());
  }
  if (!j.is_object()) throw ValidationError(source + ": top level must be an object");
  for (const char* key : {"lambda", "appraisal"}) {
    if (!j.contains(key)) throw ValidationError(source + ": missing field '" + std::string(key) + "'");
  }

  const Vector lambda = json_vector(j["lambda"], source, "lambda");
  const Matrix appraisal = json_matrix(j["appraisal"], source, "appraisal");
  std::optional<netcore::InteractingLaplacian> laplacian;
  if (j.contains("laplacian")) {
    const Matrix l = json_matrix(j["laplacian"], source, "laplacian");
    laplacian = with_source(source, [&] { return netcore::InteractingLaplacian(l); });
  } else if (j.contains("stochastic")) {
    const Matrix p = json_matrix(j["stochastic"], source, "stochastic");
    double eps = 1.0;
    if (j.contains("epsilon")) {
      if (!j["epsilon"].is_number()) field_error(source, "epsilon", "must be a number");
      eps = j["epsilon"].get<double>();
    }
    laplacian = with_source(source, [&] {
      return netcore::stochastic_to_laplacian(netcore::StochasticMatrix(p), netcore::ConversionParams{eps});
    });
  } else {
    throw ValidationError(source + ": needs either 'laplacian' or 'stochastic'");
  }

  std::optional<netcore::MiDSMatrix> mids;
  if (j.contains("mids") && !j["mids"].is_null()) {
    const Matrix c = json_matrix(j["mids"], source, "mids");
    mids = with_source(source, [&] { return netcore::MiDSMatrix(c); });
  }
  if (j.contains("n_issues")) {
    if (!j["n_issues"].is_number_integer()) field_error(source, "n_issues", "must be an integer");
    const auto n = j["n_issues"].get<long>();
    const long have = mids ? static_cast<long>(mids->size()) : 1;
    if (n != have) {
      field_error(source, "n_issues", "is " + std::to_string(n) + " but the MiDS matrix implies " +
                                          std::to_string(have));
    }
  }

  auto system = with_source(source, [&] {
    return netcore::SystemSpec(netcore::SusceptibilityMatrix(lambda), *laplacian, netcore::AppraisalMatrix(appraisal),
                               mids);
  });
  LoadedSystem out{std::move(system), std::nullopt, source};
  if (j.contains("x0")) {
    Vector x0 = json_vector(j["x0"], source, "x0");
    const Index want = out.system.agents() * out.system.issues();
    if (x0.size() != want) {
      field_error(source, "x0", "has length " + std::to_string(x0.size()) + ", expected " + std::to_string(want));
    }
    out.x0 = std::move(x0);
  }
  return out;
}

LoadedSystem load_system(const std::string& spec) {
  static const std::string prefix = "fixture:";
  if (spec.rfind(prefix, 0) == 0) {
    const auto& f = fixtures::get(spec.substr(prefix.size()));
    return LoadedSystem{f.system, f.x0, spec};
  }
  return parse_system_json(read_text(spec), spec);
}

Json number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return nullptr;
  return v;
}

Json to_json(const Matrix& m) {
  Json out = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(number(m(i, j)));
    out.push_back(std::move(row));
  }
  return out;
}

Json to_json(const Vector& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(number(v(i)));
  return out;
}

Json to_json(Complex c) { return Json::array({number(c.real()), number(c.imag())}); }

Json to_json(const std::vector<Complex>& v) {
  Json out = Json::array();
  for (const auto& c : v) out.push_back(to_json(c));
  return out;
}

Json system_to_json(const netcore::SystemSpec& sys, const std::optional<Vector>& x0) {
  Json j;
  j["lambda"] = to_json(sys.lambda().diag());
  j["laplacian"] = to_json(sys.laplacian().matrix());
  j["appraisal"] = to_json(sys.appraisal().matrix());
  if (sys.mids()) j["mids"] = to_json(sys.mids()->matrix());
  j["n_issues"] = sys.issues();
  if (x0) j["x0"] = to_json(*x0);
  return j;
}

Json to_json(const spectral::SpectralReport& r) {
  Json j;
  j["classification"] = spectral::to_string(r.classification);
  j["eigenvalues"] = to_json(r.eigenvalues);
  j["moduli"] = Json::array();
  for (const auto& e : r.eigenvalues) j["moduli"].push_back(number(std::abs(e)));
  j["unit_eigen_count"] = r.unit_eigen_count;
  j["rho_rest"] = number(r.rho_rest);
  if (r.has_eigenvectors()) {
    j["left_vec"] = to_json(r.left_vec);
    j["right_vec"] = to_json(r.right_vec);
  }
  return j;
}

Json to_json(const spectral::MultiIssueReport& r) {
  Json j;
  j["verdict"] = spectral::to_string(r.verdict);
  j["mids_eigenvalues"] = to_json(r.mids_eigenvalues);
  j["mids_radius"] = number(r.mids_radius);
  j["rho_rest"] = number(r.rho_rest);
  j["product"] = number(r.rho_rest * r.mids_radius);
  j["mids_powers_converge"] = r.mids_powers_converge;
  j["unit_pairing_flagged"] = r.unit_pairing_flagged;
  return j;
}

Json to_json(const stepsize::FeasibleRegion& r) {
  Json j;
  j["method"] = stepsize::to_string(r.method);
  j["rho_max"] = number(r.rho_max);
  j["intervals"] = Json::array();
  for (const auto& iv : r.intervals) j["intervals"].push_back(Json::array({number(iv.lo), number(iv.hi)}));
  return j;
}

Json to_json(const stepsize::EpsilonRange& r) {
  Json j;
  j["lower"] = number(r.lower);
  j["upper"] = number(r.upper);
  j["positive"] = Json::array({number(r.positive.lo), number(r.positive.hi)});
  return j;
}

Json to_json(const stepsize::StepSizeDiagnostics& d, bool full) {
  Json j;
  j["rho"] = number(d.rho);
  j["hb_verdict"] = d.hb_verdict;
  j["direct_verdict"] = d.direct_verdict;
  j["polynomial_verdict"] = d.polynomial_verdict;
  j["min_f_printed"] = number(d.min_f_printed);
  j["min_f_corrected"] = number(d.min_f_corrected);
  j["eigen"] = Json::array();
  for (const auto& e : d.eigen) {
    Json ej;
    ej["lambda"] = to_json(e.lambda);
    ej["magnitude"] = number(e.magnitude);
    ej["f_printed"] = number(e.f_printed);
    ej["f_corrected"] = number(e.f_corrected);
    ej["excluded_some_theta"] = e.excluded_some_theta;
    ej["excluded_all_theta"] = e.excluded_all_theta;
    ej["excluded_root_count"] = e.excluded_roots.size();
    if (!e.excluded_roots.empty()) {
      double lo = e.excluded_roots.front().rho, hi = lo;
      for (const auto& r : e.excluded_roots) {
        lo = std::min(lo, r.rho);
        hi = std::max(hi, r.rho);
      }
      ej["excluded_root_range"] = Json::array({number(lo), number(hi)});
    }
    if (full) {
      ej["excluded_roots"] = Json::array();
      for (const auto& r : e.excluded_roots) {
        ej["excluded_roots"].push_back(Json::array({number(r.theta), r.which, number(r.rho)}));
      }
    }
    j["eigen"].push_back(std::move(ej));
  }
  return j;
}

Json to_json(const estimate::EstimationResult& r) {
  Json j;
  j["m_used"] = r.m_used;
  j["gamma_star"] = number(r.gamma_star);
  j["rank"] = r.rank;
  j["unique"] = r.unique;
  j["zeta_hat"] = to_json(r.zeta_hat);
  j["D_hat"] = to_json(r.D_hat);
  return j;
}

Json to_json(const estimate::RecoveryMetrics& r) {
  Json j;
  j["max_abs_error"] = number(r.max_abs_error);
  j["identifiable_error"] = number(r.identifiable_error);
  j["error_modulo_ones"] = number(r.error_modulo_ones);
  return j;
}

std::string trajectory_csv(const simulate::Trajectory& traj) {
  std::ostringstream os;
  os << "k";
  const Index width = traj.states.empty() ? 0 : traj.states.front().xi.size();
  for (Index i = 0; i < width; ++i) os << ",xi_" << i + 1;
  os << ",spread\n";
  for (std::size_t s = 0; s < traj.states.size(); ++s) {
    const auto& st = traj.states[s];
    os << st.k;
    for (Index i = 0; i < st.xi.size(); ++i) os << ',' << format_double(st.xi(i));
    os << ',' << format_double(traj.spread_series[s]) << '\n';
  }
  return os.str();
}

std::string magnitude_csv(const std::vector<stepsize::MagnitudeSample>& samples) {
  std::ostringstream os;
  os << "rho,max_magnitude\n";
  for (const auto& s : samples) os << format_double(s.rho) << ',' << format_double(s.magnitude) << '\n';
  return os.str();
}

std::string matrix_csv(const Matrix& m) {
  std::ostringstream os;
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) os << (j ? "," : "") << format_double(m(i, j));
    os << '\n';
  }
  return os.str();
}

}  // namespace opinion::io
