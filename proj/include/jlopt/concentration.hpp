#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "json.hpp"
#include "jlopt/certify.hpp"
#include "jlopt/linear_map.hpp"
#include "jlopt/rng.hpp"

namespace jlopt {

// Regularized upper incomplete gamma Q(a, x): series for x < a + 1,
// modified-Lentz continued fraction otherwise.
double gamma_q(double a, double x);

// Pr(chi^2_n > x) = Q(n/2, x/2).
double chi_square_sf(std::size_t n, double x);

// Pr(| chi^2_n - n | > threshold).
double chi_square_two_sided_tail(std::size_t n, double threshold);

struct TailEstimate {
  double threshold = 0.0;
  std::size_t trials = 0;
  std::size_t hits = 0;
  double p_hat = 0.0;
  double std_error = 0.0;  // sqrt(p_hat (1 - p_hat) / trials)
};

TailEstimate make_tail_estimate(double threshold, std::size_t trials, std::size_t hits);

// Minimum trial count accepted by the estimators below.
inline constexpr std::size_t kMinTrials = 1000;

// ---- gaussian norm tails ---------------------------------------------------

// ||g_i||^2 for trials i = 0..trials-1, g_i in R^n drawn from child(seed, i).
std::vector<double> norm_sq_samples(std::size_t n, std::size_t trials, Seed seed);

inline double norm_tail_threshold(std::size_t n, double t, double c) {
  return c * std::sqrt(static_cast<double>(n) * t);
}

// Fraction of samples with | s - n | > threshold.
TailEstimate norm_tail_from_samples(std::span<const double> samples, std::size_t n, double threshold);

// Empirical Pr(| ||g||^2 - n | > c sqrt(n t)).
TailEstimate norm_tail_estimate(std::size_t n, double t, double c, std::size_t trials, Seed seed);

// ---- second-order gaussian chaos ------------------------------------------

// ||A g_i||^2 - tr(A^T A) with g_i from child(seed, i); same g_i as norm_sq_samples.
std::vector<double> chaos_samples(const LinearMap& a, std::size_t trials, Seed seed);

// c (sqrt(t) ||A^T A||_F + t ||A^T A||), the operator norm taken as lambda_1.
double chaos_threshold(const SpectralCertificate& cert, double t, double c);

// Fraction of samples with | s | > threshold.
TailEstimate two_sided_from_samples(std::span<const double> centered, double threshold);

// Empirical Pr(| ||Ag||^2 - tr(A^T A) | > c (sqrt(t) ||A^T A||_F + t ||A^T A||)).
TailEstimate chaos_tail_estimate(const LinearMap& a, double t, double c, std::size_t trials, Seed seed);

// Symmetric-input variant: g^T Q g - tr(Q) for a symmetric Q.
std::vector<double> symmetric_chaos_samples(const Eigen::MatrixXd& q, std::size_t trials, Seed seed);

// Threshold c (sqrt(t) ||Q||_F + t ||Q||), ||Q|| = max |eigenvalue|.
TailEstimate symmetric_chaos_tail_estimate(const Eigen::MatrixXd& q, double t, double c, std::size_t trials,
                                           Seed seed);

// ---- joint witness event ---------------------------------------------------

struct JointSamples {
  std::vector<double> chaos;    // ||A g||^2 - tr(A^T A)
  std::vector<double> norm_sq;  // ||g||^2, same g
};

JointSamples joint_samples(const LinearMap& a, std::size_t trials, Seed seed);

// Per-trial event
//   | ||Ag||^2 - sum lambda | >= c1 sqrt(ln(1/delta)) (sum lambda^2)^(1/2)
//   and ||g||^2 <= n + c2 sqrt(n ln(1/delta)).
TailEstimate joint_event_rate(const LinearMap& a, double delta, double c1, double c2, std::size_t trials,
                              Seed seed);

TailEstimate joint_from_samples(const JointSamples& samples, const SpectralCertificate& cert, std::size_t n,
                                double delta, double c1, double c2);

// ---- calibration -----------------------------------------------------------

// Binary-search resolution for every calibrated constant.
inline constexpr double kCalibrationResolution = 1.0 / 1024.0;
inline constexpr double kCalibrationCeiling = 64.0;
// Pass/fail slack, in standard errors.
inline constexpr double kStdErrorSlack = 4.0;

struct CalibrationConstants {
  double c = 0.0;       // chaos lower tail; one c on both sides of min{c, e^-t}
  double c1 = 0.0;      // joint event, chaos conjunct
  double c2 = 0.0;      // joint event, norm conjunct
  double delta0 = 0.0;  // largest delta at which (c1, c2) were verified
  std::vector<double> t_grid;
  std::vector<double> delta_grid;  // e^-t for t in t_grid
  std::size_t trials = 0;
  std::size_t family_size = 0;
};

// Family member j is sampled with child(seed, j), so its estimates equal
// chaos_tail_estimate(A_j, t, c, trials, child(seed, j)). The joint event uses
// delta = e^-t for each t in the grid.
//   c  : largest grid value with p_hat >= min{c, e^-t} - 4 se for all (A, t)
//   c2 : smallest grid value with Pr(| ||g||^2 - n | > c2 sqrt(n ln 1/delta)) <= delta/2
//   c1 : largest grid value with joint p_hat >= delta - 4 se for all (A, delta)
CalibrationConstants calibrate_constants(std::span<const LinearMap> family, std::span<const double> t_grid,
                                         std::size_t trials, Seed seed);

// Checks the chaos lower bound for `a` at constant c over the t grid:
// p_hat >= min{c, e^-t} - 4 se for every t.
bool chaos_lower_bound_holds(const LinearMap& a, std::span<const double> t_grid, double c, std::size_t trials,
                             Seed seed);

nlohmann::ordered_json to_json(const TailEstimate& est);
nlohmann::ordered_json to_json(const CalibrationConstants& consts);

}  // namespace jlopt
