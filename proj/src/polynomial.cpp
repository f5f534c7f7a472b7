#include "opinion/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace opinion::poly {
namespace {

constexpr double kRealRootTol = 1e-8;
constexpr double kSeparationTol = 1e-9;
constexpr double kCubicTol = 1e-10;

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Ascending coefficients of (z + sign)^n.
RealPoly binomial_poly(int n, double sign) {
  RealPoly p(static_cast<std::size_t>(n + 1));
  for (int i = 0; i <= n; ++i) p[static_cast<std::size_t>(i)] = binom(n, i) * std::pow(sign, n - i);
  return p;
}

struct RealRoots {
  std::vector<double> values;
  bool all_real_and_simple = true;
};

RealRoots real_simple_roots(const RealPoly& p) {
  RealRoots out;
  for (const auto& r : roots(p)) {
    if (std::abs(r.imag()) > kRealRootTol * std::max(1.0, std::abs(r))) {
      out.all_real_and_simple = false;
      return out;
    }
    out.values.push_back(r.real());
  }
  std::sort(out.values.begin(), out.values.end());
  for (std::size_t i = 1; i < out.values.size(); ++i) {
    const double scale = std::max(1.0, std::abs(out.values[i]));
    if (out.values[i] - out.values[i - 1] <= kSeparationTol * scale) {
      out.all_real_and_simple = false;
      return out;
    }
  }
  return out;
}

bool is_zero_poly(const RealPoly& p) {
  return std::all_of(p.begin(), p.end(), [](double c) { return c == 0.0; });
}

double cubic_eval(double a, double b, double c, double d, double x) {
  return ((a * x + b) * x + c) * x + d;
}

double bisect(double a, double b, double c, double d, double lo, double hi) {
  double flo = cubic_eval(a, b, c, d, lo);
  for (int it = 0; it < 200 && hi - lo > kCubicTol * std::max(1.0, std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = cubic_eval(a, b, c, d, mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<double> quadratic_roots(double a, double b, double c) {
  if (a == 0.0) {
    if (b == 0.0) return {};
    return {-c / b};
  }
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return {};
  if (disc == 0.0) return {-b / (2.0 * a)};
  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  std::vector<double> r{q / a, c / q};
  std::sort(r.begin(), r.end());
  return r;
}

// Monotone-segment bisection: split the real line at the critical points and
// bisect every segment whose endpoint values change sign.
std::vector<double> cubic_roots_by_bisection(double a, double b, double c, double d) {
  const double bound = 1.0 + std::max({std::abs(b / a), std::abs(c / a), std::abs(d / a)});
  std::vector<double> cuts{-bound};
  for (double x : quadratic_roots(3.0 * a, 2.0 * b, c)) {
    if (x > -bound && x < bound) cuts.push_back(x);
  }
  cuts.push_back(bound);
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double fl = cubic_eval(a, b, c, d, cuts[i]);
    const double fh = cubic_eval(a, b, c, d, cuts[i + 1]);
    if (fl == 0.0) {
      out.push_back(cuts[i]);
    } else if ((fl < 0.0) != (fh < 0.0)) {
      out.push_back(bisect(a, b, c, d, cuts[i], cuts[i + 1]));
    }
  }
  if (cubic_eval(a, b, c, d, cuts.back()) == 0.0) out.push_back(cuts.back());
  return out;
}

}  // namespace

ComplexPoly bilinear_transform(const ComplexPoly& s) {
  if (s.empty()) throw ValidationError("bilinear_transform: empty polynomial");
  if (s.back() == Complex(0.0, 0.0)) {
    throw ValidationError("bilinear_transform: zero leading coefficient");
  }
  const int d = static_cast<int>(s.size()) - 1;
  ComplexPoly q(static_cast<std::size_t>(d + 1), Complex(0.0, 0.0));
  for (int k = 0; k <= d; ++k) {
    const RealPoly plus = binomial_poly(k, 1.0);
    const RealPoly minus = binomial_poly(d - k, -1.0);
    for (std::size_t i = 0; i < plus.size(); ++i) {
      for (std::size_t j = 0; j < minus.size(); ++j) {
        q[i + j] += s[static_cast<std::size_t>(k)] * (plus[i] * minus[j]);
      }
    }
  }
  return q;
}

PolynomialPair imaginary_axis_split(const ComplexPoly& q) {
  PolynomialPair pair;
  pair.s.resize(q.size());
  pair.q.resize(q.size());
  for (std::size_t k = 0; k < q.size(); ++k) {
    // c * i^k
    Complex term = q[k];
    switch (k % 4) {
      case 1: term = Complex(-q[k].imag(), q[k].real()); break;
      case 2: term = -q[k]; break;
      case 3: term = Complex(q[k].imag(), -q[k].real()); break;
      default: break;
    }
    pair.s[k] = term.real();
    pair.q[k] = term.imag();
  }
  pair.s = trimmed(std::move(pair.s));
  pair.q = trimmed(std::move(pair.q));
  return pair;
}

bool interlaced(const PolynomialPair& pair) {
  if (is_zero_poly(pair.s) || is_zero_poly(pair.q)) return false;
  const RealRoots rs = real_simple_roots(pair.s);
  const RealRoots rq = real_simple_roots(pair.q);
  if (!rs.all_real_and_simple || !rq.all_real_and_simple) return false;
  const auto ls = rs.values.size();
  const auto lq = rq.values.size();
  if ((ls > lq ? ls - lq : lq - ls) > 1) return false;

  // Merge and require strict alternation; the longer list must lead.
  std::vector<std::pair<double, char>> merged;
  for (double v : rs.values) merged.emplace_back(v, 'S');
  for (double v : rq.values) merged.emplace_back(v, 'Q');
  std::sort(merged.begin(), merged.end());
  if (merged.empty()) return true;
  if (ls > lq && merged.front().second != 'S') return false;
  if (lq > ls && merged.front().second != 'Q') return false;
  for (std::size_t i = 1; i < merged.size(); ++i) {
    if (merged[i].second == merged[i - 1].second) return false;
    const double scale = std::max(1.0, std::abs(merged[i].first));
    if (merged[i].first - merged[i - 1].first <= kSeparationTol * scale) return false;
  }
  return true;
}

double origin_wronskian(const PolynomialPair& pair) {
  auto coeff = [](const RealPoly& p, std::size_t k) { return k < p.size() ? p[k] : 0.0; };
  return coeff(pair.s, 0) * coeff(pair.q, 1) - coeff(pair.s, 1) * coeff(pair.q, 0);
}

bool hermite_biehler_hurwitz(const PolynomialPair& pair) {
  return interlaced(pair) && origin_wronskian(pair) > 0.0;
}

RealPoly trimmed(RealPoly p, double rel_tol) {
  double mx = 0.0;
  for (double c : p) mx = std::max(mx, std::abs(c));
  while (!p.empty() && std::abs(p.back()) <= rel_tol * mx) p.pop_back();
  if (p.empty()) p.push_back(0.0);
  return p;
}

double evaluate(const RealPoly& p, double x) {
  double acc = 0.0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Complex evaluate(const ComplexPoly& p, Complex z) {
  Complex acc(0.0, 0.0);
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * z + *it;
  return acc;
}

std::vector<Complex> roots(const RealPoly& p) {
  const RealPoly t = trimmed(p);
  const Index n = static_cast<Index>(t.size()) - 1;
  if (n <= 0) return {};
  Matrix companion = Matrix::Zero(n, n);
  for (Index i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  for (Index i = 0; i < n; ++i) companion(i, n - 1) = -t[static_cast<std::size_t>(i)] / t.back();
  Eigen::EigenSolver<Matrix> solver(companion, false);
  if (solver.info() != Eigen::Success) throw NumericalError("polynomial root finding did not converge");
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

std::vector<double> real_cubic_roots(double a, double b, double c, double d) {
  const double mx = std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
  if (mx == 0.0) return {};
  if (std::abs(a) <= 1e-14 * mx) return quadratic_roots(b, c, d);

  const double bn = b / a, cn = c / a, dn = d / a;
  const double shift = bn / 3.0;
  const double p = cn - bn * bn / 3.0;
  const double q = 2.0 * bn * bn * bn / 27.0 - bn * cn / 3.0 + dn;
  const double disc = 0.25 * q * q + p * p * p / 27.0;

  std::vector<double> ts;
  if (p == 0.0 && q == 0.0) {
    ts = {0.0};
  } else if (disc > 0.0) {
    const double sq = std::sqrt(disc);
    ts = {std::cbrt(-0.5 * q + sq) + std::cbrt(-0.5 * q - sq)};
  } else {
    const double r = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * q / (p * r), -1.0, 1.0);
    const double phi = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k) ts.push_back(r * std::cos(phi - 2.0 * std::numbers::pi * k / 3.0));
  }

  std::vector<double> out;
  bool ok = true;
  for (double t : ts) {
    double x = t - shift;
    for (int it = 0; it < 8; ++it) {
      const double f = cubic_eval(a, b, c, d, x);
      const double df = (3.0 * a * x + 2.0 * b) * x + c;
      if (df == 0.0) break;
      const double step = f / df;
      if (!std::isfinite(step)) break;
      x -= step;
      if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(x))) break;
    }
    const double scale = std::abs(a) * std::pow(std::max(1.0, std::abs(x)), 3) +
                         std::abs(b) * x * x + std::abs(c) * std::abs(x) + std::abs(d);
    if (std::abs(cubic_eval(a, b, c, d, x)) > kCubicTol * scale) ok = false;
    out.push_back(x);
  }
  if (!ok) out = cubic_roots_by_bisection(a, b, c, d);

  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [](double x, double y) {
                          return std::abs(x - y) <= kCubicTol * std::max(1.0, std::abs(x));
                        }),
            out.end());
  return out;
}

}  // namespace opinion::poly
