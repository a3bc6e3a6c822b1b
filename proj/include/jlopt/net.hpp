#pragma once

#include <cstdint>
#include <string>

#include "jlopt/linear_map.hpp"

namespace jlopt {

// The quantization grid for matrices with n columns: entries i * step with
// step = sqrt(alpha) / (10 n) and |i| <= floor(20 n / sqrt(alpha)).
struct NetParams {
  double alpha = 0.0;
  std::size_t n = 0;
  double grid_step = 0.0;
  std::int64_t max_index = 0;

  // max_index * grid_step >= 2. Fails whenever 20n/sqrt(alpha) is not an
  // integer; quantize then clamps and the per-entry error stays below one step.
  bool covers_box() const { return static_cast<double>(max_index) * grid_step >= 2.0; }
};

NetParams net_params(std::size_t n, double alpha);

// Rounds every entry to the nearest grid point (ties toward zero). Requires
// 0 < alpha < 1, |a_ij| <= 2 and m <= n. Guarantees ||A - quantize(A)||_F^2 <=
// alpha/100, and <= alpha/400 when the grid covers the box.
LinearMap quantize(const LinearMap& a, double alpha);

// Quantization error budget actually achieved: tr(B^T B) for B = A - A-hat.
double quantization_error_sq(const LinearMap& a, const LinearMap& quantized);

struct NetCardinality {
  double exact_log = 0.0;        // ln sum_{m=1..n} (2K + 1)^(m n), K = floor(20n/sqrt(alpha))
  double closed_form_bound_log = 0.0;  // ln n + n^2 ln(40 n / sqrt(alpha))
};

NetCardinality log_cardinality(std::size_t n, double alpha);

struct CoveringRadius {
  double alpha = 0.0;
  bool clamped = false;  // 100 n^(-2C) >= 1 was pulled just below 1
  std::string note;
};

// alpha = 100 n^(-2C), so that quantize guarantees ||A - A-hat||_F <= n^(-C).
CoveringRadius covering_radius_for(std::size_t n, double c);

}  // namespace jlopt
