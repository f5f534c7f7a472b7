#pragma once

// Feasible step-size regions for the case where the appraisal coincides with
// the self-appraisal, i.e. the iteration I - rho*L + eps*rho*L^2 (eps fixed)
// or I - rho*L + rho^2*L^2 (eps tied to rho).

#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "opinion/common.hpp"
#include "opinion/netcore.hpp"

namespace opinion::stepsize {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

enum class Method { direct_scan, corollary1, cubic_corrected, cubic_paper, theorem_hb };

struct FeasibleRegion {
  std::vector<Interval> intervals;  // disjoint, ascending, open
  Method method = Method::direct_scan;
  double rho_max = 0.0;

  [[nodiscard]] bool contains(double rho) const noexcept;
};

struct EpsFixed {
  double epsilon = 0.0;
};
struct EpsEqualsRho {};
using Mode = std::variant<EpsFixed, EpsEqualsRho>;

enum class CubicVariant { corrected, paper };

struct ScanOptions {
  double grid_step = 1e-3;
  /// Non-positive selects the default 2 * max(1/Re(lambda)), capped at 100.
  double rho_max = 0.0;
};

/// Eigenvalues of L other than the single zero eigenvalue (the one of
/// smallest modulus is dropped). Throws ValidationError without a spanning tree.
[[nodiscard]] std::vector<Complex> nonzero_eigenvalues(const netcore::InteractingLaplacian& l);

[[nodiscard]] double default_rho_max(const std::vector<Complex>& nonzero);

/// max_i |1 - rho*lambda_i + eps*rho*lambda_i^2| (eps = rho in EpsEqualsRho mode).
[[nodiscard]] double max_magnitude(const std::vector<Complex>& nonzero, const Mode& mode, double rho);

struct MagnitudeSample {
  double rho;
  double magnitude;
};

/// Samples rho = grid_step, 2*grid_step, ... <= rho_max.
[[nodiscard]] std::vector<MagnitudeSample> scan_magnitude(const netcore::InteractingLaplacian& l,
                                                          const Mode& mode, const ScanOptions& opt = {});

[[nodiscard]] FeasibleRegion feasible_rho_direct(const netcore::InteractingLaplacian& l, const Mode& mode,
                                                 const ScanOptions& opt = {});

struct EpsilonRange {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  /// (max(0, lower), upper).
  Interval positive;

  [[nodiscard]] bool contains(double eps) const noexcept { return eps > lower && eps < upper; }
};

/// eps values keeping Re(lambda - eps*lambda^2) > 0 for every nonzero lambda.
[[nodiscard]] EpsilonRange epsilon_range(const netcore::InteractingLaplacian& l);

/// (0, min 2Re(l*)/|l*|^2) over eigenvalues l* of L - eps*L^2 with Re(l*) > 0.
/// Throws ValidationError if eps is outside epsilon_range(L).
[[nodiscard]] FeasibleRegion feasible_rho_corollary1(const netcore::InteractingLaplacian& l, double epsilon,
                                                     double rho_max = 0.0);

struct CubicCoefficients {
  double a, b, c, d;
};

[[nodiscard]] CubicCoefficients cubic_coefficients(Complex lambda, CubicVariant variant);

[[nodiscard]] FeasibleRegion feasible_rho_cubic(const netcore::InteractingLaplacian& l, CubicVariant variant,
                                                double rho_max = 0.0);

/// Printed closed-form expression in r = rho*|lambda|, phi = arg(lambda).
[[nodiscard]] double f_printed(double rho, Complex lambda);

/// 2Re(a) - |a|^2 with a = u - u^2, u = rho*lambda; positive exactly when
/// |1 - u + u^2| < 1.
[[nodiscard]] double f_corrected(double rho, Complex lambda);

struct ExcludedRoot {
  double theta;
  int which;  // 1..4
  double rho;
};

struct EigenDiagnostics {
  Complex lambda;
  double magnitude = 0.0;
  double f_printed = 0.0;
  double f_corrected = 0.0;
  /// Only roots whose discriminant is nonnegative and denominator nonzero.
  std::vector<ExcludedRoot> excluded_roots;
  /// rho within the margin of a sampled root for at least one theta.
  bool excluded_some_theta = false;
  /// rho within the margin of a sampled root for every theta that has one.
  bool excluded_all_theta = false;
};

struct StepSizeDiagnostics {
  double rho = 0.0;
  std::vector<EigenDiagnostics> eigen;
  double min_f_printed = std::numeric_limits<double>::infinity();
  double min_f_corrected = std::numeric_limits<double>::infinity();
  /// Printed criterion: min f > 0, the real-eigenvalue clause rho < 1/lambda,
  /// and rho away from every sampled excluded root.
  bool hb_verdict = false;
  /// max |1 - rho*lambda + rho^2*lambda^2| < 1.
  bool direct_verdict = false;
  /// Bilinear transform plus Hermite-Biehler on each z - 1 + u - u^2.
  bool polynomial_verdict = false;
};

struct HbOptions {
  int theta_points = 720;
  double margin = 1e-6;
};

[[nodiscard]] StepSizeDiagnostics theorem_hb_check(const netcore::InteractingLaplacian& l, double rho,
                                                   const HbOptions& opt = {});

/// Grid scan of the printed criterion (hb_verdict), merged into intervals
/// without endpoint refinement.
[[nodiscard]] FeasibleRegion feasible_rho_hb(const netcore::InteractingLaplacian& l, const ScanOptions& scan = {},
                                             const HbOptions& opt = {});

[[nodiscard]] std::vector<Interval> intersect(const std::vector<Interval>& a, const std::vector<Interval>& b);

[[nodiscard]] const char* to_string(Method m) noexcept;

}  // namespace opinion::stepsize
