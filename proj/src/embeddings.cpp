#include "jlopt/embeddings.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "jlopt/certify.hpp"
#include "jlopt/error.hpp"

namespace jlopt {

LinearMap identity_map(std::size_t n) {
  if (n == 0) throw PreconditionError("identity map needs n >= 1");
  const auto dim = static_cast<Eigen::Index>(n);
  return LinearMap(RowMatrix::Identity(dim, dim));
}

LinearMap gaussian_map(std::size_t m, std::size_t n, Seed seed) {
  if (m == 0 || n == 0) throw PreconditionError("gaussian map needs m, n >= 1");
  if (n > kMaxCoordinates / m) throw SizeError("gaussian map exceeds size limit");
  RowMatrix a(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    NormalSampler normal(child(seed, static_cast<std::uint64_t>(i)));
    for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = normal() * scale;
  }
  return LinearMap(std::move(a));
}

PcaResult pca_map(const PointSet& x, std::size_t m) {
  if (m == 0 || m > x.dim()) throw PreconditionError("pca_map needs 1 <= m <= dim");
  const Eigen::MatrixXd gram = x.points().transpose() * x.points();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
  if (solver.info() != Eigen::Success) throw NumericalError("eigen-solver failed in pca_map");

  const auto n = static_cast<Eigen::Index>(x.dim());
  const auto rows = static_cast<Eigen::Index>(m);
  RowMatrix a(rows, n);
  for (Eigen::Index i = 0; i < rows; ++i) {
    Eigen::VectorXd v = solver.eigenvectors().col(n - 1 - i);
    // Fix the sign: largest-magnitude component positive.
    Eigen::Index pivot = 0;
    v.cwiseAbs().maxCoeff(&pivot);
    if (v(pivot) < 0) v = -v;
    a.row(i) = v.transpose();
  }
  return PcaResult{LinearMap(std::move(a)), gram.isZero(0.0)};
}

LinearMap append_zero_rows(const LinearMap& a, std::size_t rows) {
  if (rows < a.rows()) throw PreconditionError("append_zero_rows cannot shrink a map");
  RowMatrix out = RowMatrix::Zero(static_cast<Eigen::Index>(rows), a.matrix().cols());
  out.topRows(a.matrix().rows()) = a.matrix();
  return LinearMap(std::move(out));
}

namespace {

// Unit directions of X and the smoothed-max objective on them.
class SmoothedMaxObjective {
 public:
  explicit SmoothedMaxObjective(const PointSet& x) : dirs_(x.points()) {
    for (Eigen::Index i = 0; i < dirs_.rows(); ++i) {
      const double norm = dirs_.row(i).norm();
      if (norm == 0.0) throw PreconditionError("optimize_map: point " + std::to_string(i) + " is zero");
      dirs_.row(i) /= norm;
    }
  }

  Eigen::VectorXd ratios(const RowMatrix& a) const {
    return (dirs_ * a.transpose()).rowwise().squaredNorm();
  }

  static double hard_max(const Eigen::VectorXd& r) { return (r.array() - 1.0).abs().maxCoeff(); }

  // tau * log sum_i [exp((r_i - 1)/tau) + exp((1 - r_i)/tau)], shifted for stability.
  static double smoothed(const Eigen::VectorXd& r, double tau) {
    const double top = hard_max(r);
    const Eigen::ArrayXd dev = r.array() - 1.0;
    const double sum = ((dev - top) / tau).exp().sum() + ((-dev - top) / tau).exp().sum();
    return top + tau * std::log(sum);
  }

  // Gradient with respect to A of the smoothed objective.
  RowMatrix gradient(const RowMatrix& a, double tau) const {
    const RowMatrix images = dirs_ * a.transpose();
    const Eigen::ArrayXd r = images.rowwise().squaredNorm().array();
    const double top = (r - 1.0).abs().maxCoeff();
    const Eigen::ArrayXd up = ((r - 1.0 - top) / tau).exp();
    const Eigen::ArrayXd down = ((1.0 - r - top) / tau).exp();
    const Eigen::VectorXd weight = ((up - down) / (up.sum() + down.sum())).matrix();
    return 2.0 * (images.array().colwise() * weight.array()).matrix().transpose() * dirs_;
  }

 private:
  RowMatrix dirs_;
};

// Best uniform rescaling s * A: minimizes max |s r_i - 1| at s = 2 / (r_min + r_max).
RowMatrix rescaled(const RowMatrix& a, const Eigen::VectorXd& r) {
  const double lo = r.minCoeff();
  const double hi = r.maxCoeff();
  if (!(hi > 0.0)) return a;
  return a * std::sqrt(2.0 / (lo + hi));
}

}  // namespace

OptimizerResult optimize_map(const PointSet& x, std::size_t m, const OptimizerOptions& opts,
                             const LinearMap* warm_start) {
  if (x.empty()) throw PreconditionError("optimize_map needs a nonempty point set");
  if (m == 0 || m > x.dim()) throw PreconditionError("optimize_map needs 1 <= m <= dim");
  if (opts.max_iters <= 0 || !(opts.step_init > 0) || !(opts.step_shrink > 0 && opts.step_shrink < 1) ||
      !(opts.tol > 0) || !(opts.smoothing > 0)) {
    throw PreconditionError("optimizer options must be positive with step_shrink in (0, 1)");
  }
  const SmoothedMaxObjective objective(x);

  auto report_eps = [&](const RowMatrix& cand) {
    return distortion(LinearMap(cand), x, DistortionMode::norm).eps_max;
  };

  // Candidate starts: PCA, its best uniform rescaling, and the warm start.
  std::vector<RowMatrix> candidates;
  candidates.push_back(pca_map(x, m).map.matrix());
  candidates.push_back(rescaled(candidates.front(), objective.ratios(candidates.front())));
  if (warm_start) {
    if (warm_start->cols() != x.dim() || warm_start->rows() > m) {
      throw DimensionError("warm start shape incompatible with (m, dim)");
    }
    candidates.push_back(append_zero_rows(*warm_start, m).matrix());
  }
  std::vector<double> candidate_eps;
  for (const auto& c : candidates) candidate_eps.push_back(report_eps(c));
  const auto start_at = static_cast<std::size_t>(
      std::min_element(candidate_eps.begin(), candidate_eps.end()) - candidate_eps.begin());

  OptimizerResult result{LinearMap(candidates[start_at]), candidate_eps.front(), candidate_eps[start_at], 0,
                         false, {}};
  RowMatrix best = candidates[start_at];
  double best_eps = SmoothedMaxObjective::hard_max(objective.ratios(best));

  // Zero rows have zero gradient; seed them with a tiny random direction.
  RowMatrix current = best;
  NormalSampler normal(opts.seed);
  const double jitter = 1e-3 / std::sqrt(static_cast<double>(x.dim()));
  for (Eigen::Index i = 0; i < current.rows(); ++i) {
    if (current.row(i).isZero(0.0)) {
      for (Eigen::Index j = 0; j < current.cols(); ++j) current(i, j) = jitter * normal();
    }
  }

  double tau = opts.smoothing;
  double step = opts.step_init;
  Eigen::VectorXd r = objective.ratios(current);
  double value = SmoothedMaxObjective::smoothed(r, tau);
  result.objective_history.push_back(value);

  auto track_best = [&](const RowMatrix& a, const Eigen::VectorXd& ratios) {
    const double e = SmoothedMaxObjective::hard_max(ratios);
    if (e < best_eps) {
      best_eps = e;
      best = a;
    }
  };
  track_best(current, r);

  // Below this the map is exact up to rounding; further steps only burn time.
  constexpr double exact_enough = 1e-13;
  int iter = 0;
  while (iter < opts.max_iters && best_eps > exact_enough) {
    const RowMatrix grad = objective.gradient(current, tau);
    const double gnorm = grad.norm();
    bool stage_done = gnorm == 0.0;
    while (!stage_done && iter < opts.max_iters) {
      ++iter;
      RowMatrix trial = current - (step / gnorm) * grad;
      const Eigen::VectorXd trial_r = objective.ratios(trial);
      const double trial_value = SmoothedMaxObjective::smoothed(trial_r, tau);
      if (trial_value < value) {
        const double gain = value - trial_value;
        current = std::move(trial);
        r = trial_r;
        value = trial_value;
        result.objective_history.push_back(value);
        track_best(current, r);
        step = std::min(step * 1.5, 1.0);
        if (gain < opts.tol * tau) stage_done = true;
        break;
      }
      step *= opts.step_shrink;
      if (step < 1e-15) stage_done = true;
    }
    if (stage_done) {
      // Anneal: the smoothed maximum is non-decreasing in tau, so lowering tau
      // cannot raise the recorded objective.
      const double tau_floor = std::max(1e-12, 1e-3 * best_eps);
      if (tau <= tau_floor) break;
      tau = std::max(tau * 0.5, tau_floor);
      step = opts.step_init;
      value = SmoothedMaxObjective::smoothed(r, tau);
      result.objective_history.push_back(value);
    }
  }

  result.iterations = iter;
  result.hit_iteration_limit = iter >= opts.max_iters;

  // Final pick by report-mode distortion, so eps_final never exceeds any start.
  const double best_report = report_eps(best);
  if (best_report < candidate_eps[start_at]) {
    result.map = LinearMap(std::move(best));
    result.eps_final = best_report;
  }
  return result;
}

}  // namespace jlopt
