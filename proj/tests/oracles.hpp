#pragma once

// Independent reference computations for the tests. Nothing here calls into
// the library's numerics; the algorithms are deliberately different (naive
// loops, Faddeev-LeVerrier, Durand-Kerner, Warshall closure, Gaussian
// elimination) so agreement is meaningful.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using LD = long double;
using CLD = std::complex<long double>;
using Mat = std::vector<std::vector<double>>;

inline Mat from_eigen(const Eigen::MatrixXd& m) {
  Mat out(static_cast<std::size_t>(m.rows()), std::vector<double>(static_cast<std::size_t>(m.cols())));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
  }
  return out;
}

inline Mat matmul(const Mat& a, const Mat& b) {
  const std::size_t n = a.size(), k = b.size(), p = b.empty() ? 0 : b[0].size();
  Mat out(n, std::vector<double>(p, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      long double acc = 0.0L;
      for (std::size_t t = 0; t < k; ++t) acc += static_cast<LD>(a[i][t]) * b[t][j];
      out[i][j] = static_cast<double>(acc);
    }
  }
  return out;
}

inline std::vector<double> matvec(const Mat& a, const std::vector<double>& x) {
  std::vector<double> out(a.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    long double acc = 0.0L;
    for (std::size_t j = 0; j < x.size(); ++j) acc += static_cast<LD>(a[i][j]) * x[j];
    out[i] = static_cast<double>(acc);
  }
  return out;
}

inline Mat kron(const Mat& a, const Mat& b) {
  const std::size_t ar = a.size(), ac = a[0].size(), br = b.size(), bc = b[0].size();
  Mat out(ar * br, std::vector<double>(ac * bc));
  for (std::size_t i = 0; i < ar; ++i)
    for (std::size_t j = 0; j < ac; ++j)
      for (std::size_t p = 0; p < br; ++p)
        for (std::size_t q = 0; q < bc; ++q) out[i * br + p][j * bc + q] = a[i][j] * b[p][q];
  return out;
}

/// Characteristic polynomial det(zI - A), ascending coefficients, monic.
inline std::vector<LD> charpoly(const Mat& a) {
  const std::size_t n = a.size();
  std::vector<LD> c(n + 1, 0.0L);
  c[n] = 1.0L;
  std::vector<std::vector<LD>> m(n, std::vector<LD>(n, 0.0L));  // M_0 = 0
  for (std::size_t k = 1; k <= n; ++k) {
    // M_k = A M_{k-1} + c_{n-k+1} I
    std::vector<std::vector<LD>> next(n, std::vector<LD>(n, 0.0L));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        LD acc = 0.0L;
        for (std::size_t t = 0; t < n; ++t) acc += static_cast<LD>(a[i][t]) * m[t][j];
        next[i][j] = acc + (i == j ? c[n - k + 1] : 0.0L);
      }
    }
    m = next;
    LD tr = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t t = 0; t < n; ++t) tr += static_cast<LD>(a[i][t]) * m[t][i];
    }
    c[n - k] = -tr / static_cast<LD>(k);
  }
  return c;
}

/// All roots of a polynomial (ascending coefficients) by Durand-Kerner.
inline std::vector<CLD> durand_kerner(std::vector<LD> coeffs) {
  while (coeffs.size() > 1 && coeffs.back() == 0.0L) coeffs.pop_back();
  const std::size_t n = coeffs.size() - 1;
  if (n == 0) return {};
  const LD lead = coeffs.back();
  for (auto& c : coeffs) c /= lead;
  LD radius = 0.0L;
  for (std::size_t i = 0; i < n; ++i) radius = std::max(radius, std::abs(coeffs[i]));
  radius = 1.0L + radius;
  std::vector<CLD> z(n);
  const CLD seed(0.4L, 0.9L);
  for (std::size_t i = 0; i < n; ++i) z[i] = std::pow(seed, static_cast<int>(i)) * (radius / 2.0L);
  auto eval = [&](CLD x) {
    CLD acc = 0.0L;
    for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * x + coeffs[i];
    return acc;
  };
  for (int it = 0; it < 5000; ++it) {
    LD change = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
      CLD denom = 1.0L;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i) denom *= (z[i] - z[j]);
      }
      if (std::abs(denom) == 0.0L) denom = CLD(1e-30L, 0.0L);
      const CLD step = eval(z[i]) / denom;
      z[i] -= step;
      change = std::max(change, std::abs(step));
    }
    if (change < 1e-30L) break;
  }
  return z;
}

inline std::vector<CLD> eigenvalues(const Mat& a) { return durand_kerner(charpoly(a)); }

/// Reachability closure by Warshall: reach[i][j] = path j -> ... -> i, where
/// an edge j -> i exists when l(i, j) < -tol.
inline bool has_spanning_tree(const Mat& l, double tol = 1e-12) {
  const std::size_t n = l.size();
  std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    reach[i][i] = 1;
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && l[i][j] < -tol) reach[i][j] = 1;
    }
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (reach[i][k] && reach[k][j]) reach[i][j] = 1;
  for (std::size_t r = 0; r < n; ++r) {
    bool all = true;
    for (std::size_t i = 0; i < n && all; ++i) all = reach[i][r];
    if (all) return true;
  }
  return false;
}

/// Rank by Gaussian elimination with partial pivoting.
inline int rank(Mat a, double tol = 1e-9) {
  const std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  int r = 0;
  for (std::size_t c = 0; c < cols && static_cast<std::size_t>(r) < rows; ++c) {
    std::size_t piv = static_cast<std::size_t>(r);
    for (std::size_t i = piv + 1; i < rows; ++i) {
      if (std::abs(a[i][c]) > std::abs(a[piv][c])) piv = i;
    }
    if (std::abs(a[piv][c]) <= tol) continue;
    std::swap(a[piv], a[static_cast<std::size_t>(r)]);
    for (std::size_t i = static_cast<std::size_t>(r) + 1; i < rows; ++i) {
      const double f = a[i][c] / a[static_cast<std::size_t>(r)][c];
      for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[static_cast<std::size_t>(r)][j];
    }
    ++r;
  }
  return r;
}

/// sum_{l=lo}^{hi} C(n, l) e^l (1-e)^(m-l) with binomials built by products.
inline LD binomial_tail(long n, long lo, long hi, long m, LD e) {
  LD total = 0.0L;
  for (long l = lo; l <= hi; ++l) {
    if (l > n || l < 0) continue;
    LD c = 1.0L;
    for (long i = 1; i <= l; ++i) c = c * static_cast<LD>(n - l + i) / static_cast<LD>(i);
    total += c * std::pow(e, static_cast<LD>(l)) * std::pow(1.0L - e, static_cast<LD>(m - l));
  }
  return total;
}

/// Greedy multiset match of two complex spectra; returns max pairing distance.
inline double spectrum_distance(std::vector<std::complex<double>> a, std::vector<std::complex<double>> b) {
  if (a.size() != b.size()) return INFINITY;
  double worst = 0.0;
  for (const auto& x : a) {
    std::size_t best = 0;
    double bd = INFINITY;
    for (std::size_t j = 0; j < b.size(); ++j) {
      const double d = std::abs(x - b[j]);
      if (d < bd) {
        bd = d;
        best = j;
      }
    }
    worst = std::max(worst, bd);
    b.erase(b.begin() + static_cast<std::ptrdiff_t>(best));
  }
  return worst;
}

/// Random Laplacian with a spanning tree: a random rooted tree plus extra
/// random edges, weights in [0.1, 1].
inline Eigen::MatrixXd random_laplacian(std::mt19937_64& gen, int n, double extra = 0.3, bool symmetric = false) {
  std::uniform_real_distribution<double> w(0.1, 1.0), u(0.0, 1.0);
  Eigen::MatrixXd adj = Eigen::MatrixXd::Zero(n, n);  // adj(i, j): edge j -> i
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::shuffle(order.begin(), order.end(), gen);
  for (int k = 1; k < n; ++k) {
    const int child = order[static_cast<std::size_t>(k)];
    const int parent = order[static_cast<std::size_t>(std::uniform_int_distribution<int>(0, k - 1)(gen))];
    adj(child, parent) = w(gen);
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j && adj(i, j) == 0.0 && u(gen) < extra) adj(i, j) = w(gen);
    }
  }
  if (symmetric) adj = (adj + adj.transpose()).eval();
  Eigen::MatrixXd l = -adj;
  for (int i = 0; i < n; ++i) l(i, i) = adj.row(i).sum();
  return l;
}

}  // namespace oracle
