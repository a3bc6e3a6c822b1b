#include "jlopt/certify.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>

#include "jlopt/error.hpp"
#include "jlopt/net.hpp"

namespace jlopt {

std::string_view to_string(DistortionMode mode) {
  return mode == DistortionMode::norm ? "norm" : "pairwise";
}

DistortionMode distortion_mode_from_string(std::string_view text) {
  if (text == "norm") return DistortionMode::norm;
  if (text == "pairwise") return DistortionMode::pairwise;
  throw PreconditionError("unknown distortion mode '" + std::string(text) + "'");
}

namespace {

void record(DistortionReport& report, double ratio, ItemIndex item) {
  const double err = std::abs(ratio - 1.0);
  if (!report.violating_index || err > report.eps_max) {
    report.eps_max = err;
    report.violating_index = report.ratios.size();
  }
  report.ratios.push_back(ratio);
  report.items.push_back(item);
}

}  // namespace

DistortionReport distortion(const LinearMap& a, const PointSet& x, DistortionMode mode) {
  if (a.cols() != x.dim()) {
    throw DimensionError("map has " + std::to_string(a.cols()) + " columns but points have dimension " +
                         std::to_string(x.dim()));
  }
  DistortionReport report;
  report.mode = mode;
  if (a.wider_than_tall()) report.notes.emplace_back("map has more rows than columns");

  // Plain sequential sums: bit-identical results when zero rows are appended to A.
  const auto& am = a.matrix();
  const auto& pts = x.points();
  const auto m = am.rows();
  const auto n = am.cols();
  const auto count = pts.rows();
  RowMatrix images(count, m);
  for (Eigen::Index i = 0; i < count; ++i) {
    for (Eigen::Index r = 0; r < m; ++r) {
      double acc = 0.0;
      for (Eigen::Index k = 0; k < n; ++k) acc += am(r, k) * pts(i, k);
      images(i, r) = acc;
    }
  }
  auto sq = [](const auto& row) {
    double acc = 0.0;
    for (Eigen::Index k = 0; k < row.size(); ++k) acc += row(k) * row(k);
    return acc;
  };

  if (mode == DistortionMode::norm) {
    report.ratios.reserve(x.size());
    for (Eigen::Index i = 0; i < count; ++i) {
      const double denom = sq(pts.row(i));
      if (denom == 0.0) {
        ++report.skipped;
        continue;
      }
      const auto idx = static_cast<std::size_t>(i);
      record(report, sq(images.row(i)) / denom, {idx, idx});
    }
  } else {
    for (Eigen::Index i = 0; i < count; ++i) {
      for (Eigen::Index j = i + 1; j < count; ++j) {
        const double denom = sq(pts.row(i) - pts.row(j));
        if (denom == 0.0) {
          ++report.skipped;
          continue;
        }
        const double num = sq(images.row(i) - images.row(j));
        record(report, num / denom, {static_cast<std::size_t>(i), static_cast<std::size_t>(j)});
      }
    }
  }
  if (report.skipped) {
    report.notes.push_back("skipped " + std::to_string(report.skipped) +
                           (mode == DistortionMode::norm ? " zero vector(s)" : " coincident pair(s)"));
  }
  return report;
}

std::size_t rank_lower_bound(double trace, double frob_sq) {
  if (frob_sq <= 0.0 || trace == 0.0) return 0;
  const double ratio = trace * trace / frob_sq;
  // Shave a few ulps so an exact integer ratio cannot round up past the rank.
  return static_cast<std::size_t>(std::ceil(ratio * (1.0 - 64 * DBL_EPSILON)));
}

std::size_t rank_lower_bound(const SpectralCertificate& cert) {
  return rank_lower_bound(cert.trace, cert.frob_sq);
}

SpectralCertificate spectral_certificate(const LinearMap& a) {
  const Eigen::MatrixXd gram = a.matrix().transpose() * a.matrix();
  SpectralCertificate cert;
  cert.trace = a.matrix().colwise().squaredNorm().sum();
  cert.frob_sq = gram.squaredNorm();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("symmetric eigen-solver did not converge on A^T A");
  }
  const auto& ev = solver.eigenvalues();
  cert.eigenvalues.resize(static_cast<std::size_t>(ev.size()));
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    cert.eigenvalues[static_cast<std::size_t>(i)] = std::max(0.0, ev(ev.size() - 1 - i));
  }

  double spec_trace = 0.0;
  double spec_frob = 0.0;
  for (double l : cert.eigenvalues) {
    spec_trace += l;
    spec_frob += l * l;
  }
  if (std::abs(spec_trace - cert.trace) > 1e-8 * cert.trace ||
      std::abs(spec_frob - cert.frob_sq) > 1e-8 * cert.frob_sq) {
    throw NumericalError("eigenvalue sums disagree with direct trace/Frobenius computation");
  }

  const double cutoff = kRelativeEigenCutoff * cert.operator_norm();
  cert.numerical_rank = static_cast<std::size_t>(
      std::count_if(cert.eigenvalues.begin(), cert.eigenvalues.end(), [&](double l) { return l > cutoff; }));
  cert.rank_lb = rank_lower_bound(cert);
  return cert;
}

Witness witness_search(const LinearMap& a, const PointSet& v) {
  if (v.empty()) throw PreconditionError("witness search needs a nonempty point set");
  if (a.cols() != v.dim()) throw DimensionError("map columns do not match point dimension");
  const double trace = a.matrix().colwise().squaredNorm().sum();
  const double frob = std::sqrt((a.matrix().transpose() * a.matrix()).squaredNorm());
  if (frob == 0.0) throw PreconditionError("witness search on the zero map");

  const RowMatrix images = v.points() * a.matrix().transpose();
  Witness best;
  best.deviation = -1.0;
  for (Eigen::Index i = 0; i < images.rows(); ++i) {
    const double dev = std::abs(images.row(i).squaredNorm() - trace) / frob;
    if (dev > best.deviation) {
      best.deviation = dev;
      best.index = static_cast<std::size_t>(i);
    }
  }
  best.point = v.point(best.index);
  return best;
}

AuditReport lower_bound_audit(const LinearMap& a, const PointSet& x, double eps) {
  if (!(eps > 0.0)) throw PreconditionError("audit eps must be positive");
  if (a.cols() != x.dim()) throw DimensionError("map columns do not match point dimension");
  const std::size_t n = x.dim();

  // Locate e_1..e_n among the points.
  std::vector<bool> seen(n, false);
  const auto& pts = x.points();
  for (Eigen::Index i = 0; i < pts.rows(); ++i) {
    const auto row = pts.row(i);
    Eigen::Index hot = 0;
    if (row.maxCoeff(&hot) == 1.0 && row.cwiseAbs().sum() == 1.0) seen[static_cast<std::size_t>(hot)] = true;
  }
  const auto missing = std::find(seen.begin(), seen.end(), false);
  if (missing != seen.end()) {
    throw PreconditionError("audit refused: point set lacks basis vector e_" +
                            std::to_string(missing - seen.begin() + 1));
  }

  AuditReport report;
  report.eps = eps;
  report.m = a.rows();
  report.n = n;

  const auto dist = distortion(a, x, DistortionMode::norm);
  report.eps_max = dist.eps_max;
  report.precondition_ok = dist.eps_max <= eps;
  if (!report.precondition_ok) {
    report.notes.push_back("precondition failed: measured distortion exceeds eps");
  }

  const auto cert = spectral_certificate(a);
  report.trace = cert.trace;
  report.frob_sq = cert.frob_sq;
  report.eigenvalues = cert.eigenvalues;
  report.rank_lb = cert.rank_lb;
  report.rank_bound_ok = cert.rank_lb <= report.m;
  if (!report.rank_bound_ok) report.notes.push_back("rank lower bound exceeds m");

  // tr(A^T A) = sum ||A e_i||^2 exactly; the slack only absorbs summation rounding.
  const double nd = static_cast<double>(n);
  const double slack = 4.0 * nd * DBL_EPSILON;
  report.trace_window_ok = cert.trace >= (1.0 - eps) * nd * (1.0 - slack) &&
                           cert.trace <= (1.0 + eps) * nd * (1.0 + slack);

  if (cert.frob_sq > 0.0) {
    const auto w = witness_search(a, x);
    report.witness_index = w.index;
    report.witness_deviation = w.deviation;
  } else {
    report.notes.push_back("zero map: no witness deviation");
  }

  const double alpha = eps * eps / (nd * nd);
  if (alpha < 1.0 && report.m <= n && a.matrix().cwiseAbs().maxCoeff() <= 2.0) {
    const LinearMap quantized = quantize(a, alpha);
    report.net_alpha = alpha;
    report.net_frob_error = (a.matrix() - quantized.matrix()).norm();
    const Eigen::MatrixXd qgram = quantized.matrix().transpose() * quantized.matrix();
    report.rank_lb_quantized =
        rank_lower_bound(quantized.matrix().colwise().squaredNorm().sum(), qgram.squaredNorm());
  } else {
    report.notes.push_back("map not admissible for the quantization net (needs m <= n, alpha < 1, entries in [-2, 2])");
  }
  return report;
}

nlohmann::ordered_json to_json(const DistortionReport& report) {
  nlohmann::ordered_json j;
  j["mode"] = to_string(report.mode);
  j["eps_max"] = report.eps_max;
  if (report.violating_index) {
    const auto& item = report.items[*report.violating_index];
    j["violating_index"] = *report.violating_index;
    j["violating_item"] = {item.first, item.second};
  } else {
    j["violating_index"] = nullptr;
  }
  j["evaluated"] = report.ratios.size();
  j["skipped"] = report.skipped;
  j["ratios"] = report.ratios;
  j["notes"] = report.notes;
  return j;
}

nlohmann::ordered_json to_json(const SpectralCertificate& cert) {
  nlohmann::ordered_json j;
  j["trace"] = cert.trace;
  j["frob_sq"] = cert.frob_sq;
  j["eigenvalues"] = cert.eigenvalues;
  j["rank_lb"] = cert.rank_lb;
  j["numerical_rank"] = cert.numerical_rank;
  j["eigen_cutoff_relative"] = kRelativeEigenCutoff;
  return j;
}

nlohmann::ordered_json to_json(const AuditReport& r) {
  nlohmann::ordered_json j;
  j["mode"] = "norm";
  j["eps"] = r.eps;
  j["eps_max"] = r.eps_max;
  j["precondition_ok"] = r.precondition_ok;
  j["trace_window_ok"] = r.trace_window_ok;
  j["trace"] = r.trace;
  j["frob_sq"] = r.frob_sq;
  j["eigenvalues"] = r.eigenvalues;
  j["rank_lb"] = r.rank_lb;
  j["m"] = r.m;
  j["n"] = r.n;
  j["rank_bound_ok"] = r.rank_bound_ok;
  j["witness_index"] = r.witness_index;
  j["witness_deviation"] = r.witness_deviation;
  j["net_alpha"] = r.net_alpha ? nlohmann::ordered_json(*r.net_alpha) : nlohmann::ordered_json();
  j["net_frob_error"] = r.net_frob_error ? nlohmann::ordered_json(*r.net_frob_error) : nlohmann::ordered_json();
  j["rank_lb_quantized"] =
      r.rank_lb_quantized ? nlohmann::ordered_json(*r.rank_lb_quantized) : nlohmann::ordered_json();
  j["notes"] = r.notes;
  return j;
}

}  // namespace jlopt
