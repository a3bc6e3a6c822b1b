#pragma once

#include <cstddef>
#include <vector>

#include "jlopt/linear_map.hpp"
#include "jlopt/pointset.hpp"
#include "jlopt/rng.hpp"

namespace jlopt {

LinearMap identity_map(std::size_t n);

// Entries iid N(0, 1/m), row i drawn from child(seed, i). E||Ax||^2 = ||x||^2.
LinearMap gaussian_map(std::size_t m, std::size_t n, Seed seed);

struct PcaResult {
  LinearMap map;
  bool degenerate = false;  // X was all zero; rows are an arbitrary orthonormal set
};

// Rows are the top-m right singular directions of the matrix whose rows are
// X's points (equivalently the top-m eigenvectors of X^T X).
PcaResult pca_map(const PointSet& x, std::size_t m);

struct OptimizerOptions {
  int max_iters = 2000;
  double step_init = 0.1;
  double step_shrink = 0.5;
  double tol = 1e-9;
  double smoothing = 0.05;  // initial log-sum-exp temperature
  Seed seed{0};
};

struct OptimizerResult {
  LinearMap map;
  double eps_init = 0.0;        // norm-mode distortion of the starting map
  double eps_final = 0.0;       // norm-mode distortion of the returned map
  int iterations = 0;
  bool hit_iteration_limit = false;
  std::vector<double> objective_history;  // smoothed objective after each accepted step
};

// Local search for a map A (m rows) with small norm-mode distortion on X.
// Starts from pca_map(X, m), or from `warm_start` when that is at least as
// good. Minimizes tau * log sum_x [exp((r_x - 1)/tau) + exp((1 - r_x)/tau)],
// r_x = ||Ax||^2/||x||^2, with accept-only backtracking steps and tau annealed
// downward. The returned map is the best iterate seen, so eps_final <= eps_init.
OptimizerResult optimize_map(const PointSet& x, std::size_t m, const OptimizerOptions& opts,
                             const LinearMap* warm_start = nullptr);

// Appends zero rows to reach `rows` rows; norms of images are unchanged.
LinearMap append_zero_rows(const LinearMap& a, std::size_t rows);

}  // namespace jlopt
