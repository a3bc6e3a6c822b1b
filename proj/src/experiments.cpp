#include "jlopt/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>

#include "jlopt/certify.hpp"
#include "jlopt/error.hpp"
#include "text_io.hpp"

namespace jlopt {

std::string format_number(double v) { return detail::format_real(v); }

std::vector<std::size_t> parse_size_list(const std::string& text) {
  std::vector<std::size_t> out;
  if (detail::trim(text).empty()) return out;
  for (auto token : detail::split(text, ',')) out.push_back(detail::parse_count(token, 0));
  return out;
}

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  if (detail::trim(text).empty()) return out;
  for (auto token : detail::split(text, ',')) out.push_back(detail::parse_real(token, 0));
  return out;
}

std::vector<std::size_t> default_m_grid(std::size_t n) {
  std::vector<std::size_t> grid;
  for (std::size_t m = 1; m < n; m *= 2) grid.push_back(m);
  grid.push_back(n);
  return grid;
}

namespace {

void write_config(std::ostream& out, const ConfigEcho& config) {
  for (const auto& [key, value] : config) out << "# " << key << '=' << value << '\n';
}

}  // namespace

// ---- frontier -------------------------------------------------------------

std::vector<FrontierRow> run_frontier(const PointSet& x, const FrontierOptions& opts) {
  if (opts.m_grid.empty()) throw PreconditionError("frontier needs a nonempty m grid");
  if (opts.restarts == 0) throw PreconditionError("frontier needs at least one random restart");
  for (std::size_t i = 0; i < opts.m_grid.size(); ++i) {
    const std::size_t m = opts.m_grid[i];
    if (m == 0 || m > x.dim()) throw PreconditionError("m grid values must lie in [1, n]");
    if (i > 0 && m <= opts.m_grid[i - 1]) throw PreconditionError("m grid must be strictly increasing");
  }

  const Seed random_root = child(opts.seed, 1);
  const Seed optimizer_root = child(opts.seed, 2);
  std::vector<FrontierRow> rows;
  std::optional<LinearMap> previous;
  for (const std::size_t m : opts.m_grid) {
    const auto started = std::chrono::steady_clock::now();
    FrontierRow row;
    row.m = m;

    const Seed per_m = child(random_root, m);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < opts.restarts; ++r) {
      const LinearMap a = gaussian_map(m, x.dim(), child(per_m, r));
      const double e = distortion(a, x, DistortionMode::norm).eps_max;
      if (e < best) {
        best = e;
        row.rank_lb_of_best = spectral_certificate(a).rank_lb;
      }
    }
    row.eps_random_best = best;

    OptimizerOptions o = opts.optimizer;
    o.seed = child(optimizer_root, m);
    const auto result = optimize_map(x, m, o, previous ? &*previous : nullptr);
    row.eps_pca = result.eps_init;
    row.eps_opt = result.eps_final;
    row.opt_iterations = result.iterations;
    row.opt_hit_limit = result.hit_iteration_limit;
    previous = result.map;

    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    rows.push_back(row);
  }
  return rows;
}

void write_frontier_csv(std::ostream& out, const ConfigEcho& config, const std::vector<FrontierRow>& rows,
                        bool timing) {
  write_config(out, config);
  out << "m,eps_random_best,eps_opt,eps_pca,rank_lb_of_best,opt_iterations,opt_hit_limit";
  if (timing) out << ",seconds";
  out << '\n';
  for (const auto& r : rows) {
    out << r.m << ',' << format_number(r.eps_random_best) << ',' << format_number(r.eps_opt) << ','
        << format_number(r.eps_pca) << ',' << r.rank_lb_of_best << ',' << r.opt_iterations << ','
        << (r.opt_hit_limit ? 1 : 0);
    if (timing) out << ',' << format_number(r.seconds);
    out << '\n';
  }
}

// ---- tail suite ------------------------------------------------------------

TailsResult run_tails(const TailsOptions& opts) {
  if (opts.n == 0 || opts.m == 0) throw PreconditionError("tails needs n, m >= 1");
  if (opts.trials < kMinTrials) throw PreconditionError("tails needs at least 1000 trials");
  for (double t : opts.t_grid) {
    if (!(t >= 1.0)) throw PreconditionError("tail t values must be >= 1");
  }
  TailsResult result;
  result.used = opts;
  if (opts.t_grid.empty()) return result;

  const LinearMap a = gaussian_map(opts.m, opts.n, child(opts.seed, 1));
  const auto cert = spectral_certificate(a);
  if (opts.calibrate) {
    const std::vector<LinearMap> family{a};
    const auto k = calibrate_constants(family, opts.t_grid, opts.trials, child(opts.seed, 4));
    result.used.c = k.c;
    result.used.c1 = k.c1;
    result.used.c2 = k.c2;
  }
  const auto& used = result.used;

  const auto norm = norm_sq_samples(opts.n, opts.trials, child(opts.seed, 2));
  for (double t : opts.t_grid) {
    const double thr = norm_tail_threshold(opts.n, t, used.c);
    result.rows.push_back(TailRow{"norm", opts.n, 0, t, used.c, norm_tail_from_samples(norm, opts.n, thr),
                                  chi_square_two_sided_tail(opts.n, thr)});
  }

  const auto joint = joint_samples(a, opts.trials, child(opts.seed, 3));
  for (double t : opts.t_grid) {
    result.rows.push_back(TailRow{"chaos", opts.n, opts.m, t, used.c,
                                  two_sided_from_samples(joint.chaos, chaos_threshold(cert, t, used.c)),
                                  std::min(used.c, std::exp(-t))});
  }
  for (double t : opts.t_grid) {
    const double delta = std::exp(-t);
    result.rows.push_back(TailRow{"joint", opts.n, opts.m, delta, used.c1,
                                  joint_from_samples(joint, cert, opts.n, delta, used.c1, used.c2), delta});
  }
  return result;
}

void write_tails_csv(std::ostream& out, const ConfigEcho& config, const std::vector<TailRow>& rows) {
  write_config(out, config);
  out << "op,n,m,t_or_delta,c,threshold,trials,hits,p_hat,stderr,oracle_value\n";
  for (const auto& r : rows) {
    out << r.op << ',' << r.n << ',' << r.m << ',' << format_number(r.t_or_delta) << ',' << format_number(r.c)
        << ',' << format_number(r.estimate.threshold) << ',' << r.estimate.trials << ',' << r.estimate.hits << ','
        << format_number(r.estimate.p_hat) << ',' << format_number(r.estimate.std_error) << ','
        << format_number(r.oracle_value) << '\n';
  }
}

}  // namespace jlopt
