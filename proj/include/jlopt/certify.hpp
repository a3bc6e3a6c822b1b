#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "jlopt/linear_map.hpp"
#include "jlopt/pointset.hpp"

namespace jlopt {

enum class DistortionMode { norm, pairwise };

std::string_view to_string(DistortionMode mode);
DistortionMode distortion_mode_from_string(std::string_view text);

// One tested item: a point (first == second) or a pair of points (first < second).
struct ItemIndex {
  std::size_t first = 0;
  std::size_t second = 0;
};

struct DistortionReport {
  DistortionMode mode = DistortionMode::norm;
  std::vector<double> ratios;            // ||Ax||^2 / ||x||^2 per evaluated item
  std::vector<ItemIndex> items;          // parallel to ratios
  double eps_max = 0.0;                  // max |ratio - 1|
  std::optional<std::size_t> violating_index;  // position in ratios of the worst item
  std::size_t skipped = 0;               // zero vectors / coincident pairs
  std::vector<std::string> notes;
};

// Worst-case relative squared-norm error of A on X. Norm mode tests every
// nonzero point; pairwise mode every difference x_i - x_j, i < j, x_i != x_j.
DistortionReport distortion(const LinearMap& a, const PointSet& x, DistortionMode mode);

// Eigenvalues below this fraction of the largest count as zero.
inline constexpr double kRelativeEigenCutoff = 1e-10;

struct SpectralCertificate {
  double trace = 0.0;                 // tr(A^T A) = sum_i ||A e_i||^2
  double frob_sq = 0.0;               // ||A^T A||_F^2
  std::vector<double> eigenvalues;    // of A^T A, descending, clamped at 0
  std::size_t rank_lb = 0;            // ceil(trace^2 / frob_sq)
  std::size_t numerical_rank = 0;     // #{lambda_i > kRelativeEigenCutoff * lambda_1}

  double operator_norm() const { return eigenvalues.empty() ? 0.0 : eigenvalues.front(); }
};

SpectralCertificate spectral_certificate(const LinearMap& a);

// ceil(trace^2 / frob_sq), a Cauchy-Schwarz lower bound on rank(A^T A).
// Zero matrix gives 0.
std::size_t rank_lower_bound(const SpectralCertificate& cert);
std::size_t rank_lower_bound(double trace, double frob_sq);

struct Witness {
  std::size_t index = 0;
  Vector point;
  double deviation = 0.0;  // |‖Av‖^2 - tr(A^T A)| / ‖A^T A‖_F
};

// Point of V maximizing the normalized chaos deviation; lowest index on ties.
Witness witness_search(const LinearMap& a, const PointSet& v);

struct AuditReport {
  double eps = 0.0;
  double eps_max = 0.0;
  bool precondition_ok = false;   // eps_max <= eps on X in norm mode
  bool trace_window_ok = false;   // trace within [(1-eps)n, (1+eps)n]
  double trace = 0.0;
  double frob_sq = 0.0;
  std::vector<double> eigenvalues;
  std::size_t rank_lb = 0;
  std::size_t m = 0;
  std::size_t n = 0;
  bool rank_bound_ok = false;     // rank_lb <= m
  std::size_t witness_index = 0;
  double witness_deviation = 0.0;
  // Same chain on the net point A-hat = quantize(A, eps^2 / n^2), when A is admissible.
  std::optional<double> net_alpha;
  std::optional<double> net_frob_error;
  std::optional<std::size_t> rank_lb_quantized;
  std::vector<std::string> notes;

  bool passed() const { return precondition_ok && rank_bound_ok; }
};

// Runs the lower-bound certificate chain for A on X. X must contain every
// standard basis vector e_1..e_n.
AuditReport lower_bound_audit(const LinearMap& a, const PointSet& x, double eps);

nlohmann::ordered_json to_json(const DistortionReport& report);
nlohmann::ordered_json to_json(const SpectralCertificate& cert);
nlohmann::ordered_json to_json(const AuditReport& report);

}  // namespace jlopt
