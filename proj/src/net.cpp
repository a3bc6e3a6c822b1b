#include "jlopt/net.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "jlopt/error.hpp"

namespace jlopt {

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw PreconditionError("alpha must lie in (0, 1)");
}

// Round to nearest integer, exact halves toward zero.
std::int64_t round_ties_toward_zero(double q) {
  const double mag = std::abs(q);
  const double base = std::floor(mag);
  const double r = (mag - base > 0.5) ? base + 1.0 : base;
  return static_cast<std::int64_t>(q < 0 ? -r : r);
}

}  // namespace

NetParams net_params(std::size_t n, double alpha) {
  check_alpha(alpha);
  if (n == 0) throw PreconditionError("n must be >= 1");
  NetParams p;
  p.alpha = alpha;
  p.n = n;
  const double root = std::sqrt(alpha);
  p.grid_step = root / (10.0 * static_cast<double>(n));
  p.max_index = static_cast<std::int64_t>(std::floor(20.0 * static_cast<double>(n) / root));
  return p;
}

LinearMap quantize(const LinearMap& a, double alpha) {
  const NetParams p = net_params(a.cols(), alpha);
  if (a.rows() > a.cols()) {
    throw PreconditionError("quantize covers maps with at most n rows; got " + std::to_string(a.rows()) + " x " +
                            std::to_string(a.cols()));
  }
  const auto& src = a.matrix();
  RowMatrix out(src.rows(), src.cols());
  for (Eigen::Index i = 0; i < src.rows(); ++i) {
    for (Eigen::Index j = 0; j < src.cols(); ++j) {
      const double v = src(i, j);
      if (!(std::abs(v) <= 2.0)) {
        throw PreconditionError("entry (" + std::to_string(i) + ", " + std::to_string(j) +
                                ") = " + std::to_string(v) + " lies outside [-2, 2]");
      }
      const auto idx = std::clamp(round_ties_toward_zero(v / p.grid_step), -p.max_index, p.max_index);
      out(i, j) = static_cast<double>(idx) * p.grid_step;
    }
  }
  return LinearMap(std::move(out));
}

double quantization_error_sq(const LinearMap& a, const LinearMap& quantized) {
  if (a.rows() != quantized.rows() || a.cols() != quantized.cols()) {
    throw DimensionError("quantized map shape differs from the original");
  }
  return (a.matrix() - quantized.matrix()).squaredNorm();
}

NetCardinality log_cardinality(std::size_t n, double alpha) {
  const NetParams p = net_params(n, alpha);
  const double nd = static_cast<double>(n);
  const double log_values = std::log(2.0 * static_cast<double>(p.max_index) + 1.0);

  // log-sum-exp over m of m * n * log_values; the m = n term dominates.
  const double top = nd * nd * log_values;
  double tail = 0.0;
  for (std::size_t m = 1; m <= n; ++m) {
    tail += std::exp(static_cast<double>(m) * nd * log_values - top);
  }
  NetCardinality c;
  c.exact_log = top + std::log(tail);
  c.closed_form_bound_log = std::log(nd) + nd * nd * std::log(40.0 * nd / std::sqrt(alpha));
  return c;
}

CoveringRadius covering_radius_for(std::size_t n, double c) {
  if (n == 0 || !(c > 0.0)) throw PreconditionError("need n >= 1 and C > 0");
  CoveringRadius r;
  r.alpha = 100.0 * std::pow(static_cast<double>(n), -2.0 * c);
  if (r.alpha >= 1.0) {
    r.alpha = std::nextafter(1.0, 0.0);
    r.clamped = true;
    r.note = "alpha = 100 n^(-2C) >= 1; clamped to the largest double below 1";
  }
  return r;
}

}  // namespace jlopt
