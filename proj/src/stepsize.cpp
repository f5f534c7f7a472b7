#include "opinion/stepsize.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "opinion/polynomial.hpp"
#include "opinion/spectral.hpp"

namespace opinion::stepsize {
namespace {

constexpr double kRhoCap = 100.0;
constexpr double kBisectTol = 1e-9;

bool is_complex(Complex lambda) {
  return std::abs(lambda.imag()) > 1e-12 * std::max(1.0, std::abs(lambda));
}

double resolve_rho_max(const std::vector<Complex>& nonzero, double requested) {
  return requested > 0.0 ? requested : default_rho_max(nonzero);
}

double bisect_edge(const std::function<bool(double)>& feasible, double in, double out) {
  while (std::abs(in - out) > kBisectTol) {
    const double mid = 0.5 * (in + out);
    if (feasible(mid)) {
      in = mid;
    } else {
      out = mid;
    }
  }
  return 0.5 * (in + out);
}

// Samples rho_j = j*step on (0, rho_max], merges feasible runs and optionally
// refines each interior edge by bisection.
std::vector<Interval> scan_intervals(const std::function<bool(double)>& feasible, double step, double rho_max,
                                     bool refine) {
  if (!(step > 0.0) || !std::isfinite(step)) throw ValidationError("grid step must be positive");
  if (!(rho_max > 0.0)) throw ValidationError("rho_max must be positive");
  const auto count = static_cast<long long>(std::floor(rho_max / step + 1e-9));
  std::vector<Interval> out;
  bool inside = false;
  double prev = 0.0;
  Interval cur;
  for (long long j = 1; j <= count; ++j) {
    const double rho = static_cast<double>(j) * step;
    const bool ok = feasible(rho);
    if (ok && !inside) {
      if (j == 1) {
        cur.lo = 0.0;
      } else {
        cur.lo = refine ? bisect_edge(feasible, rho, prev) : prev;
      }
      inside = true;
    } else if (!ok && inside) {
      cur.hi = refine ? bisect_edge(feasible, prev, rho) : prev;
      out.push_back(cur);
      inside = false;
    }
    prev = rho;
  }
  if (inside) {
    cur.hi = rho_max;
    out.push_back(cur);
  }
  return out;
}

// Open set {rho in (0, rho_max) : p(rho) < 0} for a cubic p.
std::vector<Interval> cubic_negative_set(const CubicCoefficients& c, double rho_max) {
  std::vector<double> cuts{0.0};
  for (double r : poly::real_cubic_roots(c.a, c.b, c.c, c.d)) {
    if (r > 0.0 && r < rho_max) cuts.push_back(r);
  }
  cuts.push_back(rho_max);
  std::vector<Interval> out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    if (((c.a * mid + c.b) * mid + c.c) * mid + c.d < 0.0) {
      if (!out.empty() && out.back().hi == cuts[i]) {
        out.back().hi = cuts[i + 1];
      } else {
        out.push_back({cuts[i], cuts[i + 1]});
      }
    }
  }
  return out;
}

void require_spanning_tree(const netcore::InteractingLaplacian& l) {
  if (!netcore::has_spanning_tree(l)) {
    throw ValidationError("interacting graph has no spanning tree");
  }
}

}  // namespace

bool FeasibleRegion::contains(double rho) const noexcept {
  return std::any_of(intervals.begin(), intervals.end(),
                     [rho](const Interval& iv) { return rho > iv.lo && rho < iv.hi; });
}

std::vector<Complex> nonzero_eigenvalues(const netcore::InteractingLaplacian& l) {
  require_spanning_tree(l);
  auto ev = spectral::eigenvalues(l.matrix());
  // The spanning tree makes the zero eigenvalue simple; it sorts last.
  ev.pop_back();
  return ev;
}

double default_rho_max(const std::vector<Complex>& nonzero) {
  double m = 0.0;
  for (const auto& lambda : nonzero) {
    if (lambda.real() > 0.0) m = std::max(m, 1.0 / lambda.real());
  }
  return m > 0.0 ? std::min(2.0 * m, kRhoCap) : kRhoCap;
}

double max_magnitude(const std::vector<Complex>& nonzero, const Mode& mode, double rho) {
  const double eps = std::holds_alternative<EpsFixed>(mode) ? std::get<EpsFixed>(mode).epsilon : rho;
  double m = 0.0;
  for (const auto& lambda : nonzero) {
    m = std::max(m, std::abs(1.0 - rho * lambda + eps * rho * lambda * lambda));
  }
  return m;
}

std::vector<MagnitudeSample> scan_magnitude(const netcore::InteractingLaplacian& l, const Mode& mode,
                                            const ScanOptions& opt) {
  const auto ev = nonzero_eigenvalues(l);
  const double rho_max = resolve_rho_max(ev, opt.rho_max);
  if (!(opt.grid_step > 0.0)) throw ValidationError("grid step must be positive");
  const auto count = static_cast<long long>(std::floor(rho_max / opt.grid_step + 1e-9));
  std::vector<MagnitudeSample> out;
  out.reserve(static_cast<std::size_t>(count));
  for (long long j = 1; j <= count; ++j) {
    const double rho = static_cast<double>(j) * opt.grid_step;
    out.push_back({rho, max_magnitude(ev, mode, rho)});
  }
  return out;
}

FeasibleRegion feasible_rho_direct(const netcore::InteractingLaplacian& l, const Mode& mode,
                                   const ScanOptions& opt) {
  const auto ev = nonzero_eigenvalues(l);
  FeasibleRegion region;
  region.method = Method::direct_scan;
  region.rho_max = resolve_rho_max(ev, opt.rho_max);
  auto feasible = [&](double rho) { return max_magnitude(ev, mode, rho) < 1.0; };
  region.intervals = scan_intervals(feasible, opt.grid_step, region.rho_max, true);
  return region;
}

EpsilonRange epsilon_range(const netcore::InteractingLaplacian& l) {
  EpsilonRange out;
  for (const auto& lambda : nonzero_eigenvalues(l)) {
    const double re = lambda.real();
    const double im = lambda.imag();
    const double gap = re * re - im * im;
    if (std::abs(gap) <= 1e-14 * std::norm(lambda)) continue;  // |Re| == |Im|: any eps
    const double bound = re / gap;
    if (gap > 0.0) {
      out.upper = std::min(out.upper, bound);
    } else {
      out.lower = std::max(out.lower, bound);
    }
  }
  out.positive = {std::max(0.0, out.lower), out.upper};
  return out;
}

FeasibleRegion feasible_rho_corollary1(const netcore::InteractingLaplacian& l, double epsilon, double rho_max) {
  const auto range = epsilon_range(l);
  if (!range.contains(epsilon)) {
    std::ostringstream os;
    os << "epsilon " << epsilon << " outside the admissible range (" << range.lower << ", " << range.upper
       << ")";
    throw ValidationError(os.str());
  }
  const auto ev = nonzero_eigenvalues(l);
  FeasibleRegion region;
  region.method = Method::corollary1;
  region.rho_max = resolve_rho_max(ev, rho_max);
  double bound = region.rho_max;
  for (const auto& lambda : ev) {
    const Complex star = lambda - epsilon * lambda * lambda;
    if (star.real() > 0.0) bound = std::min(bound, 2.0 * star.real() / std::norm(star));
  }
  region.intervals.push_back({0.0, bound});
  return region;
}

CubicCoefficients cubic_coefficients(Complex lambda, CubicVariant variant) {
  const double re = lambda.real();
  const double im = lambda.imag();
  const double mod2 = std::norm(lambda);
  if (variant == CubicVariant::corrected) {
    return {mod2 * mod2, -2.0 * re * mod2, 3.0 * re * re - im * im, -2.0 * re};
  }
  const double gap = re * re - im * im;
  return {4.0 * re * re + gap * gap, 2.0 * re * gap - 4.0 * re * im, 3.0 * re * re - im * im, -2.0 * re};
}

FeasibleRegion feasible_rho_cubic(const netcore::InteractingLaplacian& l, CubicVariant variant, double rho_max) {
  const auto ev = nonzero_eigenvalues(l);
  FeasibleRegion region;
  region.method = variant == CubicVariant::corrected ? Method::cubic_corrected : Method::cubic_paper;
  region.rho_max = resolve_rho_max(ev, rho_max);
  region.intervals = {{0.0, region.rho_max}};
  for (const auto& lambda : ev) {
    region.intervals = intersect(region.intervals, cubic_negative_set(cubic_coefficients(lambda, variant),
                                                                      region.rho_max));
  }
  return region;
}

double f_printed(double rho, Complex lambda) {
  const double r = rho * std::abs(lambda);
  const double phi = std::arg(lambda);
  const double c = std::cos(phi);
  return -r * r * r + r * r * c * c - 2.0 * r * std::sin(2.0 * phi) - r + 2.0 * c;
}

double f_corrected(double rho, Complex lambda) {
  const Complex u = rho * lambda;
  const Complex a = u - u * u;
  return 2.0 * a.real() - std::norm(a);
}

StepSizeDiagnostics theorem_hb_check(const netcore::InteractingLaplacian& l, double rho, const HbOptions& opt) {
  if (!(rho > 0.0)) throw ValidationError("rho must be positive");
  if (opt.theta_points < 1) throw ValidationError("theta grid needs at least one point");
  const auto ev = nonzero_eigenvalues(l);

  StepSizeDiagnostics out;
  out.rho = rho;
  bool real_clause = true;
  bool avoids_roots = true;
  bool poly_ok = true;
  for (const auto& lambda : ev) {
    EigenDiagnostics d;
    d.lambda = lambda;
    d.magnitude = std::abs(1.0 - rho * lambda + rho * rho * lambda * lambda);
    d.f_printed = f_printed(rho, lambda);
    d.f_corrected = f_corrected(rho, lambda);
    out.min_f_corrected = std::min(out.min_f_corrected, d.f_corrected);

    const Complex u = rho * lambda;
    const poly::ComplexPoly schur{-1.0 + u - u * u, Complex(1.0, 0.0)};
    poly_ok = poly_ok && poly::hermite_biehler_hurwitz(poly::imaginary_axis_split(poly::bilinear_transform(schur)));

    if (!is_complex(lambda)) {
      real_clause = real_clause && rho * lambda.real() < 1.0 && lambda.real() > 0.0;
      out.eigen.push_back(std::move(d));
      continue;
    }
    out.min_f_printed = std::min(out.min_f_printed, d.f_printed);

    const double mod = std::abs(lambda);
    const double phi = std::arg(lambda);
    const double cphi = std::cos(phi), sphi = std::sin(phi);
    const double c2 = std::cos(2.0 * phi), s2 = std::sin(2.0 * phi);
    bool any_theta_with_roots = false;
    bool every_theta_hit = true;
    for (int j = 0; j < opt.theta_points; ++j) {
      const double theta = 2.0 * std::numbers::pi * j / opt.theta_points;
      bool has_root = false;
      bool hit = false;
      auto record = [&](int which, double value) {
        d.excluded_roots.push_back({theta, which, value});
        has_root = true;
        if (std::abs(rho - value) <= opt.margin) hit = true;
      };
      const double dx = cphi * cphi * (8.0 * std::cos(theta) - 7.0) + 4.0 * (1.0 - std::cos(theta));
      if (dx >= 0.0 && c2 != 0.0) {
        record(1, (cphi + std::sqrt(dx)) / (2.0 * mod * c2));
        record(2, (cphi - std::sqrt(dx)) / (2.0 * mod * c2));
      }
      const double dy = sphi * sphi - 4.0 * s2 * std::sin(theta);
      if (dy >= 0.0 && s2 != 0.0) {
        record(3, (sphi + std::sqrt(dy)) / (2.0 * mod * s2));
        record(4, (sphi - std::sqrt(dy)) / (2.0 * mod * s2));
      }
      if (has_root) {
        any_theta_with_roots = true;
        if (hit) d.excluded_some_theta = true;
        if (!hit) every_theta_hit = false;
      }
    }
    d.excluded_all_theta = any_theta_with_roots && every_theta_hit;
    avoids_roots = avoids_roots && !d.excluded_some_theta;
    out.eigen.push_back(std::move(d));
  }

  out.hb_verdict = real_clause && avoids_roots && (out.min_f_printed > 0.0);
  out.direct_verdict = max_magnitude(ev, EpsEqualsRho{}, rho) < 1.0;
  out.polynomial_verdict = poly_ok;
  return out;
}

FeasibleRegion feasible_rho_hb(const netcore::InteractingLaplacian& l, const ScanOptions& scan,
                               const HbOptions& opt) {
  const auto ev = nonzero_eigenvalues(l);
  FeasibleRegion region;
  region.method = Method::theorem_hb;
  region.rho_max = resolve_rho_max(ev, scan.rho_max);
  auto feasible = [&](double rho) { return theorem_hb_check(l, rho, opt).hb_verdict; };
  region.intervals = scan_intervals(feasible, scan.grid_step, region.rho_max, false);
  return region;
}

std::vector<Interval> intersect(const std::vector<Interval>& a, const std::vector<Interval>& b) {
  std::vector<Interval> out;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double lo = std::max(a[i].lo, b[j].lo);
    const double hi = std::min(a[i].hi, b[j].hi);
    if (lo < hi) out.push_back({lo, hi});
    if (a[i].hi < b[j].hi) {
      ++i;
    } else {
      ++j;
    }
  }
  return out;
}

const char* to_string(Method m) noexcept {
  switch (m) {
    case Method::direct_scan: return "direct_scan";
    case Method::corollary1: return "corollary1";
    case Method::cubic_corrected: return "cubic_corrected";
    case Method::cubic_paper: return "cubic_paper";
    case Method::theorem_hb: break;
  }
  return "theorem_hb";
}

}  // namespace opinion::stepsize
