#pragma once

// Polynomial-stability toolkit: the bilinear (Moebius) map between Schur and
// Hurwitz stability, the imaginary-axis split Q(iw) = S(w) + i*Q(w), and the
// Hermite-Biehler interlacing test. Coefficients are stored in ascending
// degree order.

#include <vector>

#include "opinion/common.hpp"

namespace opinion::poly {

using RealPoly = std::vector<double>;
using ComplexPoly = std::vector<Complex>;

struct PolynomialPair {
  RealPoly s;  // real part of Q(iw)
  RealPoly q;  // imaginary part of Q(iw)
};

/// Q(z) = (z - 1)^d * S((z + 1) / (z - 1)), d = deg S.
/// Throws ValidationError on an empty polynomial or zero leading coefficient.
[[nodiscard]] ComplexPoly bilinear_transform(const ComplexPoly& s);

/// Splits Q(iw) into real polynomials S(w) + i*Q(w).
[[nodiscard]] PolynomialPair imaginary_axis_split(const ComplexPoly& q);

/// Hurwitz stability of the polynomial whose imaginary-axis split is `pair`:
/// both parts have only real, simple, interlaced roots and
/// S(0)Q'(0) - S'(0)Q(0) > 0.
[[nodiscard]] bool hermite_biehler_hurwitz(const PolynomialPair& pair);

/// Interlacing half of the test alone (exposed for diagnostics).
[[nodiscard]] bool interlaced(const PolynomialPair& pair);

/// S(0)Q'(0) - S'(0)Q(0).
[[nodiscard]] double origin_wronskian(const PolynomialPair& pair);

/// Removes trailing coefficients below rel_tol * max|coeff|.
[[nodiscard]] RealPoly trimmed(RealPoly p, double rel_tol = 1e-14);

[[nodiscard]] double evaluate(const RealPoly& p, double x);
[[nodiscard]] Complex evaluate(const ComplexPoly& p, Complex z);

/// All complex roots of a real polynomial (companion matrix eigenvalues),
/// trailing zero coefficients trimmed first.
[[nodiscard]] std::vector<Complex> roots(const RealPoly& p);

/// Real roots of a*x^3 + b*x^2 + c*x + d (lower-degree cases handled),
/// ascending, polished by Newton steps; falls back to bisection on sign
/// changes when polishing leaves a residual. Tolerance 1e-10.
[[nodiscard]] std::vector<double> real_cubic_roots(double a, double b, double c, double d);

}  // namespace opinion::poly
