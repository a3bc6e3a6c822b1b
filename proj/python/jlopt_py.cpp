#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

#include "jlopt/certify.hpp"
#include "jlopt/concentration.hpp"
#include "jlopt/embeddings.hpp"
#include "jlopt/error.hpp"
#include "jlopt/experiments.hpp"
#include "jlopt/net.hpp"
#include "jlopt/pointset.hpp"

namespace py = pybind11;
using namespace jlopt;

namespace {

// Reports are already serialized for the CLI; reuse that shape as plain dicts.
py::object to_python(const nlohmann::ordered_json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

PointSet make_set(const RowMatrix& points, const std::vector<std::string>& roles) {
  std::vector<Role> tags;
  tags.reserve(roles.size());
  for (const auto& r : roles) tags.push_back(role_from_string(r));
  return PointSet(static_cast<std::size_t>(points.cols()), points, std::move(tags));
}

std::vector<std::string> role_names(const PointSet& x) {
  std::vector<std::string> out;
  out.reserve(x.size());
  for (Role r : x.roles()) out.emplace_back(to_string(r));
  return out;
}

}  // namespace

PYBIND11_MODULE(_jlopt, m) {
  m.doc() = "Distortion certificates and concentration experiments for linear embeddings";

  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  py::class_<PointSet>(m, "PointSet")
      .def(py::init(&make_set), py::arg("points"), py::arg("roles"))
      .def_property_readonly("dim", &PointSet::dim)
      .def_property_readonly("points", [](const PointSet& x) { return Eigen::MatrixXd(x.points()); })
      .def_property_readonly("roles", &role_names)
      .def("__len__", &PointSet::size)
      .def("__eq__", &PointSet::operator==);

  py::class_<LinearMap>(m, "LinearMap")
      .def(py::init<RowMatrix>(), py::arg("matrix"))
      .def_property_readonly("rows", &LinearMap::rows)
      .def_property_readonly("cols", &LinearMap::cols)
      .def_property_readonly("matrix", [](const LinearMap& a) { return Eigen::MatrixXd(a.matrix()); })
      .def("__eq__", &LinearMap::operator==);

  m.def("standard_basis", &standard_basis, py::arg("n"));
  m.def("simplex", &simplex, py::arg("n"));
  m.def(
      "gaussian_vectors",
      [](std::size_t n, std::size_t k, std::uint64_t seed) { return gaussian_vectors(n, k, Seed{seed}); },
      py::arg("n"), py::arg("k"), py::arg("seed") = 0);
  m.def(
      "hard_instance",
      [](std::size_t n, std::size_t k, std::uint64_t seed) { return hard_instance(n, k, Seed{seed}); },
      py::arg("n"), py::arg("k"), py::arg("seed") = 0);
  m.def(
      "subspace_gaussian",
      [](std::size_t n, std::size_t d, std::size_t k, std::uint64_t seed) {
        return subspace_gaussian(n, d, k, Seed{seed});
      },
      py::arg("n"), py::arg("d"), py::arg("k"), py::arg("seed") = 0);
  m.def("load_point_set", &load_point_set, py::arg("path"));
  m.def("load_linear_map", &load_linear_map, py::arg("path"));

  m.def("identity_map", &identity_map, py::arg("n"));
  m.def(
      "gaussian_map", [](std::size_t rows, std::size_t n, std::uint64_t seed) { return gaussian_map(rows, n, Seed{seed}); },
      py::arg("m"), py::arg("n"), py::arg("seed") = 0);
  m.def(
      "pca_map", [](const PointSet& x, std::size_t rows) { return pca_map(x, rows).map; }, py::arg("x"),
      py::arg("m"));
  m.def(
      "optimize_map",
      [](const PointSet& x, std::size_t rows, int max_iters) {
        OptimizerOptions opts;
        opts.max_iters = max_iters;
        auto r = optimize_map(x, rows, opts);
        py::dict out;
        out["map"] = r.map;
        out["eps_init"] = r.eps_init;
        out["eps_final"] = r.eps_final;
        out["iterations"] = r.iterations;
        out["hit_iteration_limit"] = r.hit_iteration_limit;
        return out;
      },
      py::arg("x"), py::arg("m"), py::arg("max_iters") = OptimizerOptions{}.max_iters);

  m.def(
      "distortion",
      [](const LinearMap& a, const PointSet& x, const std::string& mode) {
        return to_python(to_json(distortion(a, x, distortion_mode_from_string(mode))));
      },
      py::arg("a"), py::arg("x"), py::arg("mode") = "norm");
  m.def(
      "spectral_certificate", [](const LinearMap& a) { return to_python(to_json(spectral_certificate(a))); },
      py::arg("a"));
  m.def(
      "lower_bound_audit",
      [](const LinearMap& a, const PointSet& x, double eps) { return to_python(to_json(lower_bound_audit(a, x, eps))); },
      py::arg("a"), py::arg("x"), py::arg("eps"));

  m.def("quantize", &quantize, py::arg("a"), py::arg("alpha"));
  m.def("quantization_error_sq", &quantization_error_sq, py::arg("a"), py::arg("quantized"));
  m.def(
      "log_cardinality",
      [](std::size_t n, double alpha) {
        const auto c = log_cardinality(n, alpha);
        return py::make_tuple(c.exact_log, c.closed_form_bound_log);
      },
      py::arg("n"), py::arg("alpha"));

  m.def("chi_square_sf", &chi_square_sf, py::arg("n"), py::arg("x"));
  m.def("chi_square_two_sided_tail", &chi_square_two_sided_tail, py::arg("n"), py::arg("threshold"));
  m.def(
      "norm_tail_estimate",
      [](std::size_t n, double t, double c, std::size_t trials, std::uint64_t seed) {
        return to_python(to_json(norm_tail_estimate(n, t, c, trials, Seed{seed})));
      },
      py::arg("n"), py::arg("t"), py::arg("c"), py::arg("trials"), py::arg("seed") = 0);
  m.def(
      "chaos_tail_estimate",
      [](const LinearMap& a, double t, double c, std::size_t trials, std::uint64_t seed) {
        return to_python(to_json(chaos_tail_estimate(a, t, c, trials, Seed{seed})));
      },
      py::arg("a"), py::arg("t"), py::arg("c"), py::arg("trials"), py::arg("seed") = 0);

  m.def(
      "run_frontier",
      [](const PointSet& x, const std::vector<std::size_t>& m_grid, std::size_t restarts, std::uint64_t seed,
         int max_iters) {
        FrontierOptions opts;
        opts.m_grid = m_grid.empty() ? default_m_grid(x.dim()) : m_grid;
        opts.restarts = restarts;
        opts.seed = Seed{seed};
        opts.optimizer.max_iters = max_iters;
        py::list rows;
        for (const auto& r : run_frontier(x, opts)) {
          py::dict row;
          row["m"] = r.m;
          row["eps_random_best"] = r.eps_random_best;
          row["eps_opt"] = r.eps_opt;
          row["eps_pca"] = r.eps_pca;
          row["rank_lb_of_best"] = r.rank_lb_of_best;
          row["opt_iterations"] = r.opt_iterations;
          row["opt_hit_limit"] = r.opt_hit_limit;
          rows.append(row);
        }
        return rows;
      },
      py::arg("x"), py::arg("m_grid") = std::vector<std::size_t>{}, py::arg("restarts") = 10, py::arg("seed") = 0,
      py::arg("max_iters") = OptimizerOptions{}.max_iters);
}
