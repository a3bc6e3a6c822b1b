#pragma once

// Independent reference implementations used only by the tests. Nothing here
// calls into the library's numerical code.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

using Matrix = std::vector<std::vector<double>>;

inline Matrix from_rows(std::size_t rows, std::size_t cols, const double* data) {
  Matrix m(rows, std::vector<double>(cols));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m[i][j] = data[i * cols + j];
  return m;
}

// A^T A by triple loop.
inline Matrix gram(const Matrix& a) {
  const std::size_t n = a.empty() ? 0 : a[0].size();
  Matrix g(n, std::vector<double>(n, 0.0));
  for (const auto& row : a)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) g[i][j] += row[i] * row[j];
  return g;
}

// Cyclic Jacobi rotations; returns eigenvalues in descending order.
inline std::vector<double> jacobi_eigenvalues(Matrix s) {
  const std::size_t n = s.size();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += s[p][q] * s[p][q];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (s[p][q] == 0.0) continue;
        const double theta = (s[q][q] - s[p][p]) / (2.0 * s[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double skp = s[k][p], skq = s[k][q];
          s[k][p] = c * skp - sn * skq;
          s[k][q] = sn * skp + c * skq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double spk = s[p][k], sqk = s[q][k];
          s[p][k] = c * spk - sn * sqk;
          s[q][k] = sn * spk + c * sqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = s[i][i];
  std::sort(ev.rbegin(), ev.rend());
  return ev;
}

// Pr(chi^2_n > x) for even n: e^{-x/2} sum_{j < n/2} (x/2)^j / j!.
inline double chi_square_sf_even(std::size_t n, double x) {
  double term = 1.0, sum = 1.0;
  for (std::size_t j = 1; j < n / 2; ++j) {
    term *= (x / 2.0) / static_cast<double>(j);
    sum += term;
  }
  return std::exp(-x / 2.0) * sum;
}

// Standard normal CDF.
inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// DKW half-width at confidence 1 - a for k samples.
inline double dkw(std::size_t k, double a) { return std::sqrt(std::log(2.0 / a) / (2.0 * static_cast<double>(k))); }

// Kolmogorov distance between the empirical CDF of `xs` and `cdf`.
template <class Cdf>
double ks_distance(std::vector<double> xs, Cdf cdf) {
  std::sort(xs.begin(), xs.end());
  const double k = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, static_cast<double>(i + 1) / k - f, f - static_cast<double>(i) / k});
  }
  return d;
}

// Binomial standard error.
inline double std_error(double p, std::size_t trials) {
  return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

}  // namespace oracle
