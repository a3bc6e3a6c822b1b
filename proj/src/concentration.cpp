#include "jlopt/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "jlopt/error.hpp"

namespace jlopt {

// ---- regularized incomplete gamma ------------------------------------------

namespace {

constexpr int kMaxGammaIterations = 100000;
constexpr double kGammaEps = 1e-16;

// P(a, x) by its power series; valid and fast for x < a + 1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double del = 1.0 / a;
  double sum = del;
  for (int i = 0; i < kMaxGammaIterations; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * kGammaEps) {
      return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
  }
  throw NumericalError("incomplete gamma series did not converge");
}

// Q(a, x) by Legendre's continued fraction (modified Lentz); x >= a + 1.
double gamma_q_fraction(double a, double x) {
  constexpr double tiny = std::numeric_limits<double>::min() / kGammaEps;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxGammaIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kGammaEps) {
      return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
    }
  }
  throw NumericalError("incomplete gamma continued fraction did not converge");
}

}  // namespace

double gamma_q(double a, double x) {
  if (!(a > 0.0)) throw PreconditionError("gamma_q needs a > 0");
  if (x <= 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return std::clamp(1.0 - gamma_p_series(a, x), 0.0, 1.0);
  return std::clamp(gamma_q_fraction(a, x), 0.0, 1.0);
}

double chi_square_sf(std::size_t n, double x) {
  if (n == 0) throw PreconditionError("chi-square needs n >= 1 degrees of freedom");
  return gamma_q(0.5 * static_cast<double>(n), 0.5 * x);
}

double chi_square_two_sided_tail(std::size_t n, double threshold) {
  const double nd = static_cast<double>(n);
  const double upper = chi_square_sf(n, nd + threshold);
  const double lower_edge = nd - threshold;
  const double lower = lower_edge > 0.0 ? 1.0 - chi_square_sf(n, lower_edge) : 0.0;
  return upper + lower;
}

// ---- estimates ---------------------------------------------------------------

TailEstimate make_tail_estimate(double threshold, std::size_t trials, std::size_t hits) {
  if (trials == 0) throw PreconditionError("tail estimate needs trials >= 1");
  if (hits > trials) throw PreconditionError("hits exceed trials");
  TailEstimate e;
  e.threshold = threshold;
  e.trials = trials;
  e.hits = hits;
  e.p_hat = static_cast<double>(hits) / static_cast<double>(trials);
  e.std_error = std::sqrt(e.p_hat * (1.0 - e.p_hat) / static_cast<double>(trials));
  return e;
}

namespace {

void check_trials(std::size_t trials) {
  if (trials < kMinTrials) {
    throw PreconditionError("Monte Carlo estimates need at least " + std::to_string(kMinTrials) + " trials");
  }
}

double sum_sq(const double* v, std::size_t len) {
  double acc = 0.0;
  for (std::size_t i = 0; i < len; ++i) acc += v[i] * v[i];
  return acc;
}

// Calls body(i, g) for every trial with g drawn from child(seed, i).
void for_each_gaussian(std::size_t n, std::size_t trials, Seed seed,
                       const std::function<void(std::size_t, const Eigen::VectorXd&)>& body) {
  Eigen::VectorXd g(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < trials; ++i) {
    NormalSampler normal(child(seed, i));
    normal.fill(std::span<double>(g.data(), n));
    body(i, g);
  }
}

double log_inv(double delta) { return std::log(1.0 / delta); }

}  // namespace

std::vector<double> norm_sq_samples(std::size_t n, std::size_t trials, Seed seed) {
  if (n == 0) throw PreconditionError("n must be >= 1");
  std::vector<double> out(trials);
  for (std::size_t i = 0; i < trials; ++i) {
    NormalSampler normal(child(seed, i));
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double z = normal();
      acc += z * z;
    }
    out[i] = acc;
  }
  return out;
}

TailEstimate norm_tail_from_samples(std::span<const double> samples, std::size_t n, double threshold) {
  const double nd = static_cast<double>(n);
  const auto hits = static_cast<std::size_t>(
      std::count_if(samples.begin(), samples.end(), [&](double s) { return std::abs(s - nd) > threshold; }));
  return make_tail_estimate(threshold, samples.size(), hits);
}

TailEstimate norm_tail_estimate(std::size_t n, double t, double c, std::size_t trials, Seed seed) {
  check_trials(trials);
  if (!(t > 0.0) || !(c > 0.0)) throw PreconditionError("norm tail needs t > 0 and c > 0");
  const auto samples = norm_sq_samples(n, trials, seed);
  return norm_tail_from_samples(samples, n, norm_tail_threshold(n, t, c));
}

JointSamples joint_samples(const LinearMap& a, std::size_t trials, Seed seed) {
  const double trace = a.matrix().colwise().squaredNorm().sum();
  JointSamples out;
  out.chaos.resize(trials);
  out.norm_sq.resize(trials);
  Eigen::VectorXd y(static_cast<Eigen::Index>(a.rows()));
  for_each_gaussian(a.cols(), trials, seed, [&](std::size_t i, const Eigen::VectorXd& g) {
    y.noalias() = a.matrix() * g;
    out.chaos[i] = sum_sq(y.data(), a.rows()) - trace;
    out.norm_sq[i] = sum_sq(g.data(), a.cols());
  });
  return out;
}

std::vector<double> chaos_samples(const LinearMap& a, std::size_t trials, Seed seed) {
  return joint_samples(a, trials, seed).chaos;
}

double chaos_threshold(const SpectralCertificate& cert, double t, double c) {
  return c * (std::sqrt(t) * std::sqrt(cert.frob_sq) + t * cert.operator_norm());
}

TailEstimate two_sided_from_samples(std::span<const double> centered, double threshold) {
  const auto hits = static_cast<std::size_t>(
      std::count_if(centered.begin(), centered.end(), [&](double s) { return std::abs(s) > threshold; }));
  return make_tail_estimate(threshold, centered.size(), hits);
}

TailEstimate chaos_tail_estimate(const LinearMap& a, double t, double c, std::size_t trials, Seed seed) {
  check_trials(trials);
  if (!(t >= 1.0) || !(c > 0.0)) throw PreconditionError("chaos tail needs t >= 1 and c > 0");
  const auto cert = spectral_certificate(a);
  if (cert.frob_sq == 0.0) throw PreconditionError("chaos tail of the zero map");
  const auto samples = chaos_samples(a, trials, seed);
  return two_sided_from_samples(samples, chaos_threshold(cert, t, c));
}

std::vector<double> symmetric_chaos_samples(const Eigen::MatrixXd& q, std::size_t trials, Seed seed) {
  if (q.rows() != q.cols() || q.rows() == 0) throw DimensionError("quadratic form must be square");
  if (!q.isApprox(q.transpose(), 0.0) && q != q.transpose()) throw PreconditionError("quadratic form must be symmetric");
  const double trace = q.trace();
  std::vector<double> out(trials);
  for_each_gaussian(static_cast<std::size_t>(q.rows()), trials, seed,
                    [&](std::size_t i, const Eigen::VectorXd& g) { out[i] = g.dot(q * g) - trace; });
  return out;
}

TailEstimate symmetric_chaos_tail_estimate(const Eigen::MatrixXd& q, double t, double c, std::size_t trials,
                                           Seed seed) {
  check_trials(trials);
  if (!(t >= 1.0) || !(c > 0.0)) throw PreconditionError("chaos tail needs t >= 1 and c > 0");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(q, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("eigen-solver failed on quadratic form");
  const double op = solver.eigenvalues().cwiseAbs().maxCoeff();
  const double frob = q.norm();
  if (frob == 0.0) throw PreconditionError("chaos tail of the zero form");
  const auto samples = symmetric_chaos_samples(q, trials, seed);
  return two_sided_from_samples(samples, c * (std::sqrt(t) * frob + t * op));
}

TailEstimate joint_from_samples(const JointSamples& samples, const SpectralCertificate& cert, std::size_t n,
                                double delta, double c1, double c2) {
  const double nd = static_cast<double>(n);
  const double chaos_bar = c1 * std::sqrt(log_inv(delta)) * std::sqrt(cert.frob_sq);
  const double norm_bar = nd + c2 * std::sqrt(nd * log_inv(delta));
  std::size_t hits = 0;
  for (std::size_t i = 0; i < samples.chaos.size(); ++i) {
    if (std::abs(samples.chaos[i]) >= chaos_bar && samples.norm_sq[i] <= norm_bar) ++hits;
  }
  return make_tail_estimate(chaos_bar, samples.chaos.size(), hits);
}

TailEstimate joint_event_rate(const LinearMap& a, double delta, double c1, double c2, std::size_t trials,
                              Seed seed) {
  check_trials(trials);
  if (!(delta > 0.0 && delta < 0.5)) throw PreconditionError("joint event needs 0 < delta < 1/2");
  if (!(c1 >= 0.0) || !(c2 >= 0.0)) throw PreconditionError("joint event constants must be nonnegative");
  const auto cert = spectral_certificate(a);
  return joint_from_samples(joint_samples(a, trials, seed), cert, a.cols(), delta, c1, c2);
}

// ---- calibration -------------------------------------------------------------

namespace {

// Largest k in [1, k_max] with pred(k) true, assuming pred is monotone
// (true then false). Returns 0 when pred(1) fails.
std::int64_t largest_feasible(std::int64_t k_max, const std::function<bool(std::int64_t)>& pred) {
  if (!pred(1)) return 0;
  std::int64_t lo = 1;
  std::int64_t hi = k_max + 1;  // first infeasible, exclusive bound
  if (pred(k_max)) return k_max;
  hi = k_max;
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    (pred(mid) ? lo : hi) = mid;
  }
  return lo;
}

bool lower_bound_ok(const TailEstimate& e, double target) {
  return e.p_hat >= target - kStdErrorSlack * e.std_error;
}

}  // namespace

bool chaos_lower_bound_holds(const LinearMap& a, std::span<const double> t_grid, double c, std::size_t trials,
                             Seed seed) {
  check_trials(trials);
  const auto cert = spectral_certificate(a);
  if (cert.frob_sq == 0.0) throw PreconditionError("chaos tail of the zero map");
  const auto samples = chaos_samples(a, trials, seed);
  for (double t : t_grid) {
    const auto e = two_sided_from_samples(samples, chaos_threshold(cert, t, c));
    if (!lower_bound_ok(e, std::min(c, std::exp(-t)))) return false;
  }
  return true;
}

CalibrationConstants calibrate_constants(std::span<const LinearMap> family, std::span<const double> t_grid,
                                         std::size_t trials, Seed seed) {
  if (family.empty() || t_grid.empty()) throw PreconditionError("calibration needs a nonempty family and t grid");
  check_trials(trials);
  for (double t : t_grid) {
    if (!(t >= 1.0)) throw PreconditionError("calibration t values must be >= 1");
  }

  struct Member {
    SpectralCertificate cert;
    JointSamples samples;
    std::size_t n;
  };
  std::vector<Member> members;
  members.reserve(family.size());
  for (std::size_t j = 0; j < family.size(); ++j) {
    auto cert = spectral_certificate(family[j]);
    if (cert.frob_sq == 0.0) throw PreconditionError("calibration family contains the zero map");
    members.push_back({std::move(cert), joint_samples(family[j], trials, child(seed, j)), family[j].cols()});
  }

  CalibrationConstants out;
  out.t_grid.assign(t_grid.begin(), t_grid.end());
  for (double t : t_grid) out.delta_grid.push_back(std::exp(-t));
  out.trials = trials;
  out.family_size = family.size();
  const auto k_max = static_cast<std::int64_t>(kCalibrationCeiling / kCalibrationResolution);
  const auto value = [](std::int64_t k) { return static_cast<double>(k) * kCalibrationResolution; };

  // c: chaos lower tail.
  const auto k_c = largest_feasible(k_max, [&](std::int64_t k) {
    const double c = value(k);
    for (const auto& mem : members) {
      for (double t : t_grid) {
        const auto e = two_sided_from_samples(mem.samples.chaos, chaos_threshold(mem.cert, t, c));
        if (!lower_bound_ok(e, std::min(c, std::exp(-t)))) return false;
      }
    }
    return true;
  });
  if (k_c == 0) throw NumericalError("no feasible chaos constant c >= 2^-10");
  out.c = value(k_c);

  // c2: smallest value whose two-sided norm failure rate is at most delta/2.
  const auto norm_ok = [&](std::int64_t k) {
    const double c2 = value(k);
    for (const auto& mem : members) {
      for (double delta : out.delta_grid) {
        const double nd = static_cast<double>(mem.n);
        const auto e = norm_tail_from_samples(mem.samples.norm_sq, mem.n, c2 * std::sqrt(nd * log_inv(delta)));
        if (e.p_hat > delta / 2.0) return false;
      }
    }
    return true;
  };
  if (!norm_ok(k_max)) throw NumericalError("no norm constant c2 <= 64 meets the delta/2 failure budget");
  std::int64_t lo = 0;  // infeasible (c2 = 0 fails for any delta < 1)
  std::int64_t hi = k_max;
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    (norm_ok(mid) ? hi : lo) = mid;
  }
  out.c2 = value(hi);

  // c1: joint event at rate >= delta.
  const auto k_c1 = largest_feasible(k_max, [&](std::int64_t k) {
    for (const auto& mem : members) {
      for (double delta : out.delta_grid) {
        const auto e = joint_from_samples(mem.samples, mem.cert, mem.n, delta, value(k), out.c2);
        if (!lower_bound_ok(e, delta)) return false;
      }
    }
    return true;
  });
  if (k_c1 == 0) throw NumericalError("no feasible joint constant c1 >= 2^-10");
  out.c1 = value(k_c1);
  out.delta0 = *std::max_element(out.delta_grid.begin(), out.delta_grid.end());
  return out;
}

nlohmann::ordered_json to_json(const TailEstimate& est) {
  nlohmann::ordered_json j;
  j["threshold"] = est.threshold;
  j["trials"] = est.trials;
  j["hits"] = est.hits;
  j["p_hat"] = est.p_hat;
  j["stderr"] = est.std_error;
  return j;
}

nlohmann::ordered_json to_json(const CalibrationConstants& k) {
  nlohmann::ordered_json j;
  j["c"] = k.c;
  j["c1"] = k.c1;
  j["c2"] = k.c2;
  j["delta0"] = k.delta0;
  j["t_grid"] = k.t_grid;
  j["delta_grid"] = k.delta_grid;
  j["trials"] = k.trials;
  j["family_size"] = k.family_size;
  j["resolution"] = kCalibrationResolution;
  j["stderr_slack"] = kStdErrorSlack;
  return j;
}

}  // namespace jlopt
