#include "opinion/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/QR>

namespace opinion::estimate {
namespace {

constexpr double kRankThreshold = 1e-10;
constexpr long kMaxSamples = 100000000;
constexpr std::uint64_t kTrialStream = 0xD1B54A32D192ED03ULL;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::pair<Vector, Vector> draw_pair(const netcore::SystemSpec& truth, std::uint64_t seed, std::uint64_t t,
                                    const ScenarioOptions& opt) {
  std::mt19937_64 gen(subseed(seed, t));
  const Index n = truth.agents();
  Vector prev(n);
  for (Index i = 0; i < n; ++i) prev(i) = opt.box * (2.0 * uniform01(gen()) - 1.0);
  const Matrix& l = truth.laplacian().matrix();
  Vector next = prev - truth.lambda().diag().asDiagonal() * (l * (truth.appraisal().matrix() * prev));
  if (opt.noise != 0.0) {
    for (Index i = 0; i < n; ++i) next(i) += opt.noise * (2.0 * uniform01(gen()) - 1.0);
  }
  return {std::move(prev), std::move(next)};
}

void check_options(const ScenarioOptions& opt) {
  if (!(opt.box > 0.0) || !std::isfinite(opt.box)) throw ValidationError("scenario box must be positive");
  if (!(opt.noise >= 0.0) || !std::isfinite(opt.noise)) throw ValidationError("noise level must be >= 0");
}

double log_binom(double n, double k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// log(sum exp(terms))
double log_sum_exp(const std::vector<double>& terms) {
  if (terms.empty()) return -INFINITY;
  const double mx = *std::max_element(terms.begin(), terms.end());
  if (!std::isfinite(mx)) return mx;
  double s = 0.0;
  for (double t : terms) s += std::exp(t - mx);
  return mx + std::log(s);
}

void check_query(const SampleBoundQuery& q) {
  if (q.d < 1) throw ValidationError("decision dimension d must be >= 1");
  if (!(q.epsilon > 0.0 && q.epsilon < 1.0)) throw ValidationError("epsilon must lie in (0, 1)");
  if (!(q.beta > 0.0 && q.beta < 1.0)) throw ValidationError("beta must lie in (0, 1)");
}

}  // namespace

Vector vec(const Matrix& m) { return Eigen::Map<const Vector>(m.data(), m.size()); }

Matrix unvec(const Vector& v, Index rows, Index cols) {
  if (rows * cols != v.size()) {
    std::ostringstream os;
    os << "unvec: length " << v.size() << " does not match " << rows << "x" << cols;
    throw ValidationError(os.str());
  }
  return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Matrix regressor(const Vector& xi_prev, const netcore::SusceptibilityMatrix& lambda,
                 const netcore::InteractingLaplacian& l) {
  const Index n = l.size();
  if (xi_prev.size() != n || lambda.size() != n) throw ValidationError("regressor: dimension mismatch");
  const Matrix gain = lambda.diag().asDiagonal() * l.matrix();
  Matrix out(n, n * n);
  for (Index j = 0; j < n; ++j) out.middleCols(j * n, n) = xi_prev(j) * gain;
  return out;
}

std::uint64_t subseed(std::uint64_t seed, std::uint64_t t) { return splitmix64(splitmix64(seed) ^ t); }

double uniform01(std::uint64_t bits) noexcept { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

ScenarioSet draw_scenarios(const netcore::SystemSpec& truth, Index m, std::uint64_t seed,
                           const ScenarioOptions& opt) {
  if (m < 1) throw ValidationError("scenario count m must be >= 1");
  check_options(opt);
  ScenarioSet set;
  set.seed = seed;
  set.options = opt;
  append_scenarios(set, truth, m);
  return set;
}

void append_scenarios(ScenarioSet& set, const netcore::SystemSpec& truth, Index count) {
  check_options(set.options);
  const auto start = static_cast<std::uint64_t>(set.pairs.size());
  for (Index t = 0; t < count; ++t) {
    set.pairs.push_back(draw_pair(truth, set.seed, start + static_cast<std::uint64_t>(t), set.options));
  }
}

EstimationResult solve_estimation(const ScenarioSet& scen, const netcore::SusceptibilityMatrix& lambda,
                                  const netcore::InteractingLaplacian& l) {
  const Index m = scen.m();
  if (m < 1) throw ValidationError("estimation needs at least one scenario");
  const Index n = l.size();
  Matrix a(m * n, n * n);
  Vector rhs(m * n);
  for (Index t = 0; t < m; ++t) {
    const auto& [prev, next] = scen.pairs[static_cast<std::size_t>(t)];
    if (prev.size() != n || next.size() != n) throw ValidationError("scenario dimension mismatch");
    a.middleRows(t * n, n) = regressor(prev, lambda, l);
    rhs.segment(t * n, n) = prev - next;
  }
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod;
  cod.setThreshold(kRankThreshold);
  cod.compute(a);

  EstimationResult out;
  out.zeta_hat = cod.solve(rhs);
  out.D_hat = unvec(out.zeta_hat, n, n);
  out.m_used = m;
  out.rank = cod.rank();
  out.unique = out.rank == n * n;
  out.gamma_star = (a * out.zeta_hat - rhs).squaredNorm() / static_cast<double>(m);
  return out;
}

double mean_residual(const ScenarioSet& scen, const netcore::SusceptibilityMatrix& lambda,
                     const netcore::InteractingLaplacian& l, const Vector& zeta) {
  if (scen.m() < 1) throw ValidationError("mean_residual needs at least one scenario");
  double total = 0.0;
  for (const auto& [prev, next] : scen.pairs) {
    total += (next - prev + regressor(prev, lambda, l) * zeta).squaredNorm();
  }
  return total / static_cast<double>(scen.m());
}

RecoveryMetrics recovery_metrics(const Matrix& d_hat, const netcore::SystemSpec& truth) {
  const Matrix& d = truth.appraisal().matrix();
  if (d_hat.rows() != d.rows() || d_hat.cols() != d.cols()) {
    throw ValidationError("recovery_metrics: dimension mismatch");
  }
  const Matrix diff = d_hat - d;
  RecoveryMetrics out;
  out.max_abs_error = diff.cwiseAbs().maxCoeff();
  out.identifiable_error =
      (truth.lambda().diag().asDiagonal() * (truth.laplacian().matrix() * diff)).cwiseAbs().maxCoeff();
  // Per column, shifting by the midrange minimises the max deviation.
  for (Index j = 0; j < diff.cols(); ++j) {
    const double half_range = 0.5 * (diff.col(j).maxCoeff() - diff.col(j).minCoeff());
    out.error_modulo_ones = std::max(out.error_modulo_ones, half_range);
  }
  return out;
}

Matrix project_rows(const Matrix& d) {
  Matrix out = d;
  for (Index i = 0; i < out.rows(); ++i) {
    const double s = out.row(i).cwiseAbs().sum();
    if (s > 1.0) out.row(i) /= s;
  }
  return out;
}

Algorithm1Result algorithm1(const netcore::SystemSpec& truth, double gamma0, Index m0, Index m_cap,
                            std::uint64_t seed, const ScenarioOptions& opt) {
  if (!(gamma0 > 0.0)) throw ValidationError("gamma0 must be positive");
  if (m0 < 1 || m0 > m_cap) throw ValidationError("need 1 <= m0 <= m_cap");
  ScenarioSet set = draw_scenarios(truth, m0, seed, opt);
  Algorithm1Result out;
  for (;;) {
    out.result = solve_estimation(set, truth.lambda(), truth.laplacian());
    out.gamma_history.push_back(out.result.gamma_star);
    out.m = set.m();
    if (out.result.gamma_star <= gamma0) return out;
    if (set.m() >= m_cap) {
      std::ostringstream os;
      os << "sample growth reached m_cap = " << m_cap << " with gamma_star " << out.result.gamma_star
         << " > gamma0 " << gamma0;
      throw NumericalError(os.str());
    }
    append_scenarios(set, truth, 1);
  }
}

double bound_tail(const SampleBoundQuery& q, long m) {
  check_query(q);
  if (m < 0) throw ValidationError("sample count must be >= 0");
  const double le = std::log(q.epsilon);
  const double l1e = std::log1p(-q.epsilon);
  std::vector<double> terms;
  if (q.formula == BoundFormula::campi_garatti) {
    if (m < q.d) return 1.0;
    for (long l = 0; l < q.d; ++l) {
      terms.push_back(log_binom(static_cast<double>(m), static_cast<double>(l)) + l * le + (m - l) * l1e);
    }
  } else {
    for (long l = 0; l <= std::min(m, q.d); ++l) {
      terms.push_back(log_binom(static_cast<double>(q.d), static_cast<double>(l)) + l * le + (m - l) * l1e);
    }
  }
  return std::exp(log_sum_exp(terms));
}

SampleBound sample_bound(const SampleBoundQuery& q) {
  check_query(q);
  long m = 1;
  if (q.formula == BoundFormula::campi_garatti) {
    // The l = 0 term alone is (1 - eps)^m, and the tail is 1 below m = d.
    const double guess = std::floor(std::log(q.beta) / std::log1p(-q.epsilon)) - 1.0;
    m = std::max({1L, q.d, static_cast<long>(std::max(guess, 1.0))});
  }
  for (; m <= kMaxSamples; ++m) {
    const double tail = bound_tail(q, m);
    if (tail <= q.beta) return {m, tail};
  }
  throw NumericalError("sample bound exceeds the search limit");
}

double empirical_violation(const EstimationResult& result, const netcore::SystemSpec& truth, double gamma_star,
                           long trials, std::uint64_t seed, const ScenarioOptions& opt, double tol) {
  if (trials < 1) throw ValidationError("trials must be >= 1");
  check_options(opt);
  const Index n = truth.agents();
  if (result.zeta_hat.size() != n * n) throw ValidationError("estimate does not match the truth dimension");
  const std::uint64_t stream = subseed(seed, kTrialStream);
  long violations = 0;
  for (long t = 0; t < trials; ++t) {
    const auto [prev, next] = draw_pair(truth, stream, static_cast<std::uint64_t>(t), opt);
    const double f =
        (next - prev + regressor(prev, truth.lambda(), truth.laplacian()) * result.zeta_hat).squaredNorm();
    if (f > gamma_star + tol) ++violations;
  }
  return static_cast<double>(violations) / static_cast<double>(trials);
}

const char* to_string(BoundFormula f) noexcept {
  return f == BoundFormula::campi_garatti ? "campi" : "paper";
}

}  // namespace opinion::estimate
