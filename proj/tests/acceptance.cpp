// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (0 when all pass).
//
// Tolerances and budgets are pinned below; none is adjusted per run.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "jlopt/certify.hpp"
#include "jlopt/concentration.hpp"
#include "jlopt/embeddings.hpp"
#include "jlopt/experiments.hpp"
#include "jlopt/net.hpp"
#include "jlopt/pointset.hpp"

using namespace jlopt;

namespace {

constexpr double kSigmas = 4.0;                 // Monte Carlo pass/fail slack, in standard errors
constexpr double kExactZero = 1e-6;             // "reaches zero distortion"
constexpr double kOracleAgreementRate = 0.95;   // fraction of seeded runs within kSigmas
constexpr double kFrontierEps = 0.25;
constexpr double kJointDelta = 0.05;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;  // <= 0: no runtime bound
  std::function<Outcome()> body;
};

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

// ---- 1 ---------------------------------------------------------------------

Outcome certificate_soundness() {
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<std::size_t> dim(1, 50);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::size_t violations = 0;
  constexpr int kMaps = 10000;
  for (int trial = 0; trial < kMaps; ++trial) {
    std::size_t n = dim(rng), m = dim(rng);
    if (m > n) std::swap(m, n);
    RowMatrix a(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
    const bool use_gauss = trial % 2 == 0;
    for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = use_gauss ? gauss(rng) : unif(rng);
    const auto cert = spectral_certificate(LinearMap(std::move(a)));
    violations += rank_lower_bound(cert) > std::min(m, n);
  }
  return {violations == 0, std::to_string(kMaps) + " maps, " + std::to_string(violations) + " violations"};
}

// ---- 2 ---------------------------------------------------------------------

Outcome trace_window() {
  std::size_t violations = 0;
  constexpr std::uint64_t kMaps = 1000;
  for (std::uint64_t s = 0; s < kMaps; ++s) {
    const std::size_t n = 8 + s % 40;
    const std::size_t m = std::max<std::size_t>(1, n / 2 + s % n);
    const auto a = gaussian_map(m, n, child(Seed{2}, s));
    const auto basis = standard_basis(n);
    const double eps = distortion(a, basis, DistortionMode::norm).eps_max;
    violations += !lower_bound_audit(a, basis, eps).trace_window_ok;
  }
  return {violations == 0, std::to_string(kMaps) + " maps, " + std::to_string(violations) + " outside the window"};
}

// ---- 3 ---------------------------------------------------------------------

Outcome quantization_budget() {
  std::mt19937_64 rng(33);
  std::uniform_int_distribution<std::size_t> dim(1, 12);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  std::size_t over = 0, not_idempotent = 0, checked = 0;
  for (double alpha : {1e-4, 1e-2, 0.5}) {
    for (int trial = 0; trial < 1000; ++trial) {
      // Admissible: entries in [-2, 2], at most as many rows as columns.
      const std::size_t n = dim(rng);
      const std::size_t m = std::uniform_int_distribution<std::size_t>(1, n)(rng);
      RowMatrix a(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
      for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = unif(rng);
      const LinearMap map(std::move(a));
      const auto q = quantize(map, alpha);
      over += quantization_error_sq(map, q) > alpha / 100.0;
      not_idempotent += !(quantize(q, alpha) == q);
      ++checked;
    }
  }
  return {over == 0 && not_idempotent == 0,
          std::to_string(checked) + " cases, " + std::to_string(over) + " over budget, " +
              std::to_string(not_idempotent) + " not idempotent"};
}

// ---- 4 ---------------------------------------------------------------------

Outcome norm_tail_oracle() {
  constexpr double kC = 2.0;
  constexpr std::size_t kTrials = 100000;
  constexpr int kRuns = 100;
  const std::vector<std::size_t> ns{10, 100, 1000};
  const std::vector<double> ts{1.0, 2.0, 3.0};
  double worst_rate = 1.0;
  std::string worst;
  for (std::size_t n : ns) {
    std::vector<int> agree(ts.size(), 0);
    for (int run = 0; run < kRuns; ++run) {
      const auto samples = norm_sq_samples(n, kTrials, child(Seed{n}, static_cast<std::uint64_t>(run)));
      for (std::size_t k = 0; k < ts.size(); ++k) {
        const double thr = norm_tail_threshold(n, ts[k], kC);
        const auto e = norm_tail_from_samples(samples, n, thr);
        const double exact = chi_square_two_sided_tail(n, thr);
        const double se = std::sqrt(exact * (1.0 - exact) / kTrials);
        agree[k] += std::abs(e.p_hat - exact) <= kSigmas * se;
      }
    }
    for (std::size_t k = 0; k < ts.size(); ++k) {
      const double rate = agree[k] / static_cast<double>(kRuns);
      if (rate < worst_rate) {
        worst_rate = rate;
        worst = "n=" + std::to_string(n) + " t=" + fmt("%g", ts[k]);
      }
    }
  }
  return {worst_rate >= kOracleAgreementRate,
          "lowest agreement " + fmt("%.2f", worst_rate) + (worst.empty() ? "" : " at " + worst)};
}

// ---- 5, 6 ------------------------------------------------------------------

LinearMap diag_map(const std::vector<double>& d) {
  const auto n = static_cast<Eigen::Index>(d.size());
  RowMatrix a = RowMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) a(i, i) = d[static_cast<std::size_t>(i)];
  return LinearMap(a);
}

std::vector<double> linear_ramp(std::size_t n) {
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = static_cast<double>(i + 1) / static_cast<double>(n);
  return d;
}

std::vector<double> geometric_ramp(std::size_t n) {
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = std::pow(0.8, static_cast<double>(i));
  return d;
}

const std::vector<double> kTGrid{1.0, 2.0, 3.0};
constexpr std::size_t kCalibrationTrials = 100000;

const CalibrationConstants& calibrated() {
  static const CalibrationConstants k = [] {
    const std::vector<LinearMap> family{
        identity_map(16),         diag_map(linear_ramp(16)),          diag_map(geometric_ramp(16)),
        gaussian_map(2, 16, Seed{501}), gaussian_map(4, 16, Seed{502}), gaussian_map(8, 16, Seed{503})};
    return calibrate_constants(family, kTGrid, kCalibrationTrials, Seed{5000});
  }();
  return k;
}

Outcome chaos_lower_tail() {
  const auto& k = calibrated();
  const std::vector<LinearMap> held_out{gaussian_map(16, 16, Seed{601}), gaussian_map(12, 16, Seed{602}),
                                        gaussian_map(8, 32, Seed{603}), diag_map(linear_ramp(24)),
                                        identity_map(32)};
  std::size_t failures = 0;
  for (std::size_t j = 0; j < held_out.size(); ++j) {
    failures += !chaos_lower_bound_holds(held_out[j], kTGrid, k.c, kCalibrationTrials, child(Seed{6000}, j));
  }
  const bool ok = k.c >= kCalibrationResolution && failures == 0;
  return {ok, "c=" + fmt("%.6g", k.c) + ", held-out failures " + std::to_string(failures) + "/5"};
}

Outcome joint_event() {
  const auto& k = calibrated();
  double worst_margin = std::numeric_limits<double>::infinity();
  std::size_t failures = 0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto a = gaussian_map(32, 64, child(Seed{7000}, s));
    const auto e = joint_event_rate(a, kJointDelta, k.c1, k.c2, 100000, child(Seed{7100}, s));
    const double margin = (e.p_hat - (kJointDelta - kSigmas * e.std_error));
    worst_margin = std::min(worst_margin, margin);
    failures += margin <= 0.0;
  }
  return {failures == 0, "c1=" + fmt("%.6g", k.c1) + " c2=" + fmt("%.6g", k.c2) + ", lowest p_hat - (delta - 4se) = " +
                             fmt("%.4g", worst_margin)};
}

// ---- 7 ---------------------------------------------------------------------

std::size_t first_m(const std::vector<FrontierRow>& rows, const std::function<double(const FrontierRow&)>& eps,
                    std::size_t never) {
  for (const auto& r : rows) {
    if (eps(r) <= kFrontierEps) return r.m;
  }
  return never;
}

std::string m_text(std::size_t m, std::size_t never) { return m == never ? "none" : std::to_string(m); }

Outcome frontier_sanity() {
  constexpr std::size_t n = 64;
  constexpr std::size_t never = n + 1;
  FrontierOptions opts;
  opts.m_grid = {4, 8, 12, 16, 24, 32, 40, 48, 56, 64};
  opts.restarts = 10;
  opts.seed = Seed{77};

  const auto hard = run_frontier(hard_instance(n, 4096, child(Seed{77}, 0)), opts);
  const auto easy = run_frontier(subspace_gaussian(n, 8, 4160, child(Seed{78}, 0)), opts);

  const bool top_exact = hard.back().m == n && hard.back().eps_opt <= kExactZero;
  bool monotone = true;
  for (std::size_t i = 1; i < hard.size(); ++i) monotone &= hard[i].eps_opt <= hard[i - 1].eps_opt;
  for (std::size_t i = 1; i < easy.size(); ++i) monotone &= easy[i].eps_opt <= easy[i - 1].eps_opt;

  const auto random_eps = [](const FrontierRow& r) { return r.eps_random_best; };
  const auto any_eps = [](const FrontierRow& r) { return std::min({r.eps_random_best, r.eps_opt, r.eps_pca}); };
  const std::size_t hard_random = first_m(hard, random_eps, never);
  const std::size_t hard_any = first_m(hard, any_eps, never);
  const std::size_t easy_any = first_m(easy, any_eps, never);
  const std::size_t easy_random = first_m(easy, random_eps, never);
  const bool separated = hard_random > easy_any;

  std::string detail = "m=64 eps_opt " + fmt("%.3g", hard.back().eps_opt) + (monotone ? ", monotone" : ", NOT monotone") +
                       "; hard m*: random " + m_text(hard_random, never) + ", any method " +
                       m_text(hard_any, never) + "; easy m*: any method " + m_text(easy_any, never) + ", random " +
                       m_text(easy_random, never);
  return {top_exact && monotone && separated, detail};
}

// ---- 8 ---------------------------------------------------------------------

Outcome determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("jlopt_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const auto p = [&](const char* name) { return (dir / name).string(); };
  const std::string cli = JLOPT_CLI_PATH;

  const std::vector<std::pair<std::string, std::string>> commands{
      {"gen --kind hard --n 16 --k 256 --seed 11", p("hard.jlps")},
      {"gen --kind subspace --n 16 --d 4 --k 100 --seed 11 --format binary", p("sub.bin")},
      {"embed --method identity --n 16", p("id.jlmap")},
      {"embed --method gaussian --n 16 --m 12 --seed 3", p("g.jlmap")},
      {"embed --method pca --set " + p("hard.jlps") + " --m 6", p("pca.jlmap")},
      {"embed --method opt --set " + p("hard.jlps") + " --m 6 --max-iters 200 --seed 2", p("opt.jlmap")},
      {"certify --map " + p("g.jlmap") + " --set " + p("hard.jlps") + " --mode pairwise", p("cert.json")},
      {"audit --map " + p("id.jlmap") + " --set " + p("hard.jlps") + " --eps 0.1", p("audit.json")},
      {"tails --n 30 --trials 5000 --t-grid 1,2,3 --seed 5 --calibrate", p("tails.csv")},
      {"frontier --set " + p("hard.jlps") + " --m-grid 2,4,8,16 --restarts 4 --max-iters 300 --seed 8",
       p("front.csv")},
      {"net --map " + p("g.jlmap") + " --alpha 0.01 --C 2 --map-out " + p("q.jlmap"), p("net.json")},
  };
  const auto read = [](const std::string& file) {
    std::ifstream in(file, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  std::size_t differ = 0, errors = 0;
  for (const auto& [args, out] : commands) {
    const std::string cmd = cli + " " + args + " --out " + out + " 2>/dev/null";
    std::string first;
    for (int round = 0; round < 2; ++round) {
      const int status = std::system(cmd.c_str());
      if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) ++errors;
      const std::string bytes = read(out);
      if (round == 0) first = bytes;
      else differ += bytes != first || bytes.empty();
    }
  }
  fs::remove_all(dir);
  return {differ == 0 && errors == 0, std::to_string(commands.size()) + " commands, " + std::to_string(differ) +
                                          " differed, " + std::to_string(errors) + " nonzero exits"};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "certificate soundness", 30, certificate_soundness},
      {2, "trace-window exactness", 10, trace_window},
      {3, "quantization budget", 10, quantization_budget},
      {4, "norm-tail oracle agreement", 120, norm_tail_oracle},
      {5, "chaos lower tail", 300, chaos_lower_tail},
      {6, "joint-event rate", 300, joint_event},
      {7, "frontier sanity", 600, frontier_sanity},
      {8, "determinism", 0, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = c.budget_seconds <= 0 || secs < c.budget_seconds;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::printf("criterion %d %s: %s; %s; %.1fs%s\n", c.id, pass ? "PASS" : "FAIL", c.name.c_str(),
                o.detail.c_str(), secs,
                in_time ? "" : (" (over the " + fmt("%.0f", c.budget_seconds) + "s budget)").c_str());
    std::fflush(stdout);
  }
  return failed;
}
