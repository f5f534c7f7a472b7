#include <gtest/gtest.h>

#include <random>

#include "opinion/polynomial.hpp"
#include "oracles.hpp"

using namespace opinion;
using namespace opinion::poly;

namespace {

// Ascending coefficients of prod (z - r_i) for a conjugate-closed root list.
RealPoly from_roots(const std::vector<Complex>& rs) {
  ComplexPoly p{Complex(1.0, 0.0)};
  for (const auto& r : rs) {
    ComplexPoly next(p.size() + 1, Complex(0.0, 0.0));
    for (std::size_t i = 0; i < p.size(); ++i) {
      next[i + 1] += p[i];
      next[i] -= r * p[i];
    }
    p = next;
  }
  RealPoly out;
  for (const auto& c : p) out.push_back(c.real());
  return out;
}

std::vector<oracle::CLD> oracle_roots(const RealPoly& p) {
  std::vector<long double> c(p.begin(), p.end());
  return oracle::durand_kerner(c);
}

ComplexPoly complexify(const RealPoly& p) { return ComplexPoly(p.begin(), p.end()); }

}  // namespace

TEST(Polynomial, BilinearOfLinear) {
  // S(w) = w - 0.5 -> Q(z) = (z + 1) - 0.5 (z - 1) = 0.5 z + 1.5
  const auto q = bilinear_transform({Complex(-0.5, 0), Complex(1, 0)});
  ASSERT_EQ(q.size(), 2u);
  EXPECT_NEAR(q[0].real(), 1.5, 1e-15);
  EXPECT_NEAR(q[1].real(), 0.5, 1e-15);
  EXPECT_THROW((void)bilinear_transform({}), ValidationError);
  EXPECT_THROW((void)bilinear_transform({Complex(1, 0), Complex(0, 0)}), ValidationError);
}

TEST(Polynomial, ImaginaryAxisSplit) {
  // Q(z) = z^2 + 3z + 2: Q(iw) = (2 - w^2) + i(3w)
  const auto pair = imaginary_axis_split({Complex(2, 0), Complex(3, 0), Complex(1, 0)});
  ASSERT_EQ(pair.s.size(), 3u);
  EXPECT_DOUBLE_EQ(pair.s[0], 2.0);
  EXPECT_DOUBLE_EQ(pair.s[2], -1.0);
  ASSERT_GE(pair.q.size(), 2u);
  EXPECT_DOUBLE_EQ(pair.q[1], 3.0);
  EXPECT_TRUE(hermite_biehler_hurwitz(pair));
  EXPECT_GT(origin_wronskian(pair), 0.0);
}

TEST(Polynomial, KnownHurwitzAndNot) {
  EXPECT_TRUE(hermite_biehler_hurwitz(imaginary_axis_split(complexify(from_roots({-1.0, -2.0, -3.0})))));
  EXPECT_FALSE(hermite_biehler_hurwitz(imaginary_axis_split(complexify(from_roots({-1.0, 2.0})))));
  EXPECT_FALSE(hermite_biehler_hurwitz(
      imaginary_axis_split(complexify(from_roots({Complex(0.1, 1.0), Complex(0.1, -1.0)})))));
  EXPECT_TRUE(hermite_biehler_hurwitz(
      imaginary_axis_split(complexify(from_roots({Complex(-0.1, 1.0), Complex(-0.1, -1.0), -4.0})))));
}

TEST(Polynomial, RootsAgainstDurandKerner) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int t = 0; t < 50; ++t) {
    RealPoly p(5);
    for (auto& c : p) c = u(gen);
    p[4] = 1.0 + std::abs(p[4]);
    const auto ours = roots(p);
    std::vector<Complex> ref;
    for (const auto& z : oracle_roots(p)) ref.emplace_back(double(z.real()), double(z.imag()));
    EXPECT_LT(oracle::spectrum_distance(ours, ref), 1e-7);
  }
}

TEST(Polynomial, RealCubicRoots) {
  auto check = [](double a, double b, double c, double d) {
    const auto ours = real_cubic_roots(a, b, c, d);
    std::vector<double> ref;
    for (const auto& z : oracle_roots({d, c, b, a})) {
      if (std::abs(z.imag()) < 1e-9L) ref.push_back(double(z.real()));
    }
    std::sort(ref.begin(), ref.end());
    ASSERT_EQ(ours.size(), ref.size()) << a << " " << b << " " << c << " " << d;
    for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_NEAR(ours[i], ref[i], 1e-8);
  };
  check(1, -6, 11, -6);      // 1, 2, 3
  check(1, 0, 0, -8);        // 2
  check(2, -3, -11, 6);      // -2, 0.5, 3
  check(0, 1, -3, 2);        // quadratic 1, 2
  check(0, 0, 4, -2);        // linear 0.5
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int t = 0; t < 200; ++t) check(u(gen) + 5.5, u(gen), u(gen), u(gen));
}

TEST(Polynomial, TrimAndEvaluate) {
  const auto p = trimmed({1.0, 2.0, 1e-20});
  EXPECT_EQ(p.size(), 2u);
  EXPECT_DOUBLE_EQ(evaluate(RealPoly{1.0, 2.0, 3.0}, 2.0), 17.0);
  const Complex z = evaluate(ComplexPoly{Complex(0, 0), Complex(1, 0)}, Complex(0, 2));
  EXPECT_DOUBLE_EQ(z.imag(), 2.0);
}
