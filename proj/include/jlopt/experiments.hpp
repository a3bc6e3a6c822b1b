#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "jlopt/concentration.hpp"
#include "jlopt/embeddings.hpp"
#include "jlopt/pointset.hpp"
#include "jlopt/rng.hpp"

namespace jlopt {

// Ordered key/value pairs echoed at the top of every output file.
using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

// 17 significant digits, '.' decimal separator.
std::string format_number(double v);

// Comma-separated lists, e.g. "4,8,16" or "1,2.5".
std::vector<std::size_t> parse_size_list(const std::string& text);
std::vector<double> parse_real_list(const std::string& text);

// 1, 2, 4, ... below n, then n.
std::vector<std::size_t> default_m_grid(std::size_t n);

// ---- frontier -------------------------------------------------------------

struct FrontierOptions {
  std::vector<std::size_t> m_grid;  // strictly increasing, within [1, dim]
  std::size_t restarts = 10;        // gaussian maps per m
  Seed seed{0};
  OptimizerOptions optimizer;
  bool timing = false;
};

struct FrontierRow {
  std::size_t m = 0;
  double eps_random_best = 0.0;
  double eps_opt = 0.0;
  double eps_pca = 0.0;
  std::size_t rank_lb_of_best = 0;  // certificate of the best gaussian map
  int opt_iterations = 0;
  bool opt_hit_limit = false;
  double seconds = 0.0;
};

// Gaussian map r at grid value m uses seed child(child(child(seed, 1), m), r);
// the optimizer at m uses child(child(seed, 2), m) and starts from the
// previous row's solution padded with a zero row.
std::vector<FrontierRow> run_frontier(const PointSet& x, const FrontierOptions& opts);

// `seconds` is written only when timing is requested; it is the one column
// that is not reproducible.
void write_frontier_csv(std::ostream& out, const ConfigEcho& config, const std::vector<FrontierRow>& rows,
                        bool timing);

// ---- tail suite ------------------------------------------------------------

struct TailsOptions {
  std::size_t n = 100;
  std::size_t m = 50;
  std::vector<double> t_grid{1.0, 2.0, 3.0};
  double c = 0.5;    // chaos constant
  double c1 = 0.25;  // joint event, chaos conjunct
  double c2 = 4.0;   // joint event, norm conjunct
  std::size_t trials = 100000;
  Seed seed{0};
  bool calibrate = false;  // replace (c, c1, c2) by calibrate_constants on {A}
};

struct TailRow {
  std::string op;  // norm | chaos | joint
  std::size_t n = 0;
  std::size_t m = 0;
  double t_or_delta = 0.0;
  double c = 0.0;
  TailEstimate estimate;
  // norm: exact chi-square two-sided tail; chaos: min{c, e^-t} lower bound;
  // joint: delta.
  double oracle_value = 0.0;
};

struct TailsResult {
  TailsOptions used;  // constants after optional calibration
  std::vector<TailRow> rows;
};

// Norm rows share one sample set drawn with child(seed, 2). The chaos map is
// gaussian_map(m, n, child(seed, 1)); chaos and joint rows share samples drawn
// with child(seed, 3). Joint rows use delta = e^-t.
TailsResult run_tails(const TailsOptions& opts);

void write_tails_csv(std::ostream& out, const ConfigEcho& config, const std::vector<TailRow>& rows);

}  // namespace jlopt
