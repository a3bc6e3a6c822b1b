// jlopt command-line harness.
//
// Exit codes: 0 success, 1 usage/config error, 2 precondition or audit
// failure, 3 internal numerical failure.

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "jlopt/certify.hpp"
#include "jlopt/concentration.hpp"
#include "jlopt/embeddings.hpp"
#include "jlopt/error.hpp"
#include "jlopt/experiments.hpp"
#include "jlopt/net.hpp"
#include "jlopt/pointset.hpp"

using namespace jlopt;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitPrecondition = 2;
constexpr int kExitNumerical = 3;

// Every option of the subcommand with its effective value, in declaration order.
ConfigEcho echo_config(const CLI::App& sub) {
  ConfigEcho echo{{"command", sub.get_name()}};
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt->get_lnames().empty() || opt->get_lnames().front() == "help") continue;
    std::string value;
    if (opt->get_expected_min() == 0) {
      value = opt->count() ? "true" : "false";
    } else if (opt->count()) {
      for (const auto& r : opt->results()) value += (value.empty() ? "" : ",") + r;
    } else {
      value = opt->get_default_str();
    }
    echo.emplace_back(opt->get_lnames().front(), value);
  }
  return echo;
}

json config_json(const ConfigEcho& echo) {
  json j;
  for (const auto& [key, value] : echo) j[key] = value;
  return j;
}

// Header tokens for jlps/jlmap files; prefixed so they never collide with n, N, m.
HeaderFields config_fields(const ConfigEcho& echo) {
  HeaderFields fields;
  for (const auto& [key, value] : echo) {
    fields["cfg." + key] = value.empty() ? "-" : value;
  }
  return fields;
}

void write_output(const std::string& path, const std::function<void(std::ostream&)>& body) {
  if (path.empty() || path == "-") {
    body(std::cout);
    std::cout.flush();
    return;
  }
  std::ostringstream buffer;
  body(buffer);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open output file '" + path + "'");
  out << buffer.str();
  if (!out.flush()) throw Error("failed writing output file '" + path + "'");
}

void write_json(const std::string& path, const json& j) {
  write_output(path, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
}

std::size_t resolve_k(std::size_t k, bool given, std::size_t n, double gamma) {
  return given ? k : default_gaussian_count(n, gamma);
}

struct SetRecipe {
  std::string path;
  std::string kind = "hard";
  std::size_t n = 16;
  std::size_t k = 0;
  std::size_t d = 8;
  double gamma = 0.0;
  std::uint64_t seed = 0;
};

PointSet make_point_set(const SetRecipe& s, bool k_given, Seed seed) {
  if (s.n == 0) throw PreconditionError("--n must be >= 1");
  const std::size_t k = resolve_k(s.k, k_given, s.n, s.gamma);
  if (s.kind == "basis") return standard_basis(s.n);
  if (s.kind == "simplex") return simplex(s.n);
  if (s.kind == "gaussian") return gaussian_vectors(s.n, k, seed);
  if (s.kind == "hard") return hard_instance(s.n, k, seed);
  if (s.kind == "subspace") return subspace_gaussian(s.n, s.d, k, seed);
  throw PreconditionError("unknown point-set kind '" + s.kind + "'");
}

void set_echo(ConfigEcho& echo, const std::string& key, const std::string& value) {
  for (auto& entry : echo) {
    if (entry.first == key) entry.second = value;
  }
}

const std::vector<std::string> kKinds{"basis", "simplex", "gaussian", "hard", "subspace"};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"jlopt: JL lower-bound laboratory"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);

  std::string out_path;

  // gen
  SetRecipe gen;
  std::string gen_format = "text";
  auto* gen_cmd = app.add_subcommand("gen", "generate a point set");
  gen_cmd->add_option("--kind", gen.kind, "point-set kind")->check(CLI::IsMember(kKinds));
  gen_cmd->add_option("--n", gen.n, "dimension")->required();
  auto* gen_k = gen_cmd->add_option("--k", gen.k, "gaussian points (default round(n^(2+gamma)))");
  gen_cmd->add_option("--gamma", gen.gamma, "exponent slack for the default k");
  gen_cmd->add_option("--d", gen.d, "subspace dimension (kind=subspace)");
  gen_cmd->add_option("--seed", gen.seed, "random seed");
  gen_cmd->add_option("--format", gen_format, "text or binary")->check(CLI::IsMember({"text", "binary"}));
  gen_cmd->add_option("--out", out_path, "output path (default stdout)");

  // embed
  std::string embed_method = "gaussian";
  std::size_t embed_n = 0;
  std::size_t embed_m = 1;
  std::uint64_t embed_seed = 0;
  std::string embed_set;
  int embed_iters = OptimizerOptions{}.max_iters;
  auto* embed_cmd = app.add_subcommand("embed", "produce a linear map");
  embed_cmd->add_option("--method", embed_method, "identity, gaussian, pca or opt")
      ->check(CLI::IsMember({"identity", "gaussian", "pca", "opt"}));
  embed_cmd->add_option("--n", embed_n, "input dimension (identity/gaussian without --set)");
  embed_cmd->add_option("--m", embed_m, "target dimension");
  embed_cmd->add_option("--seed", embed_seed, "random seed");
  embed_cmd->add_option("--set", embed_set, "point set file (required for pca/opt)");
  embed_cmd->add_option("--max-iters", embed_iters, "optimizer iteration cap");
  embed_cmd->add_option("--out", out_path, "output path (default stdout)");

  // certify
  std::string cert_map;
  std::string cert_set;
  std::string cert_mode = "norm";
  auto* cert_cmd = app.add_subcommand("certify", "distortion report and spectral certificate");
  cert_cmd->add_option("--map", cert_map, "linear map file")->required();
  cert_cmd->add_option("--set", cert_set, "point set file (optional)");
  cert_cmd->add_option("--mode", cert_mode, "norm or pairwise")->check(CLI::IsMember({"norm", "pairwise"}));
  cert_cmd->add_option("--out", out_path, "output path (default stdout)");

  // audit
  std::string audit_map;
  std::string audit_set;
  double audit_eps = 0.25;
  auto* audit_cmd = app.add_subcommand("audit", "lower-bound audit of a map on a point set");
  audit_cmd->add_option("--map", audit_map, "linear map file")->required();
  audit_cmd->add_option("--set", audit_set, "point set file")->required();
  audit_cmd->add_option("--eps", audit_eps, "distortion budget");
  audit_cmd->add_option("--out", out_path, "output path (default stdout)");

  // tails
  TailsOptions tails;
  std::string tails_grid = "1,2,3";
  std::uint64_t tails_seed = 0;
  auto* tails_cmd = app.add_subcommand("tails", "Monte Carlo tail suite");
  tails_cmd->add_option("--n", tails.n, "gaussian dimension");
  auto* tails_m = tails_cmd->add_option("--m", tails.m, "rows of the chaos map (default n/2)");
  tails_cmd->add_option("--t-grid", tails_grid, "comma-separated t values (t >= 1)");
  tails_cmd->add_option("--c", tails.c, "chaos constant");
  tails_cmd->add_option("--c1", tails.c1, "joint event chaos constant");
  tails_cmd->add_option("--c2", tails.c2, "joint event norm constant");
  tails_cmd->add_option("--trials", tails.trials, "Monte Carlo trials");
  tails_cmd->add_option("--seed", tails_seed, "random seed");
  tails_cmd->add_flag("--calibrate", tails.calibrate, "calibrate c, c1, c2 on the chaos map first");
  tails_cmd->add_option("--out", out_path, "output path (default stdout)");

  // frontier
  SetRecipe front;
  front.n = 64;
  std::string front_grid;
  std::size_t restarts = 10;
  double front_eps = 0.25;
  int front_iters = OptimizerOptions{}.max_iters;
  bool timing = false;
  auto* front_cmd = app.add_subcommand("frontier", "distortion versus target dimension sweep");
  front_cmd->add_option("--set", front.path, "point set file (otherwise generated)");
  front_cmd->add_option("--kind", front.kind, "generated kind")->check(CLI::IsMember(kKinds));
  front_cmd->add_option("--n", front.n, "dimension");
  auto* front_k = front_cmd->add_option("--k", front.k, "gaussian points (default round(n^(2+gamma)))");
  front_cmd->add_option("--gamma", front.gamma, "exponent slack for the default k");
  front_cmd->add_option("--d", front.d, "subspace dimension (kind=subspace)");
  front_cmd->add_option("--seed", front.seed, "random seed");
  front_cmd->add_option("--eps", front_eps, "target distortion for the summary");
  front_cmd->add_option("--m-grid", front_grid, "comma-separated increasing m values (default 1,2,4,...,n)");
  front_cmd->add_option("--restarts", restarts, "gaussian maps per m");
  front_cmd->add_option("--max-iters", front_iters, "optimizer iteration cap");
  front_cmd->add_flag("--timing", timing, "add a wall-clock seconds column (not reproducible)");
  front_cmd->add_option("--out", out_path, "output path (default stdout)");

  // net
  std::size_t net_n = 2;
  double net_alpha = 0.01;
  std::string net_map;
  std::string net_map_out;
  double net_exponent = 0.0;
  auto* net_cmd = app.add_subcommand("net", "quantization net parameters, cardinality and projection");
  net_cmd->add_option("--n", net_n, "matrix column count");
  net_cmd->add_option("--alpha", net_alpha, "net parameter in (0, 1)");
  net_cmd->add_option("--map", net_map, "map to quantize (its column count overrides --n)");
  net_cmd->add_option("--map-out", net_map_out, "where to write the quantized map");
  auto* net_c = net_cmd->add_option("--C", net_exponent, "report alpha = 100 n^(-2C) for this exponent");
  net_cmd->add_option("--out", out_path, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*gen_cmd) {
      auto echo = echo_config(*gen_cmd);
      set_echo(echo, "k", std::to_string(resolve_k(gen.k, gen_k->count() > 0, gen.n, gen.gamma)));
      const PointSet set = make_point_set(gen, gen_k->count() > 0, Seed{gen.seed});
      if (gen_format == "binary") {
        if (out_path.empty() || out_path == "-") throw Error("binary output needs --out");
        save_point_set(out_path, set, true);
      } else {
        auto extra = config_fields(echo);
        extra["gaussian"] = kGaussianMethod;
        write_output(out_path, [&](std::ostream& os) { write_text(os, set, extra); });
      }
    } else if (*embed_cmd) {
      const auto echo = echo_config(*embed_cmd);
      auto extra = config_fields(echo);
      std::optional<PointSet> set;
      if (!embed_set.empty()) set = load_point_set(embed_set);
      const std::size_t n = set ? set->dim() : embed_n;
      if (n == 0) throw PreconditionError("embed needs --n or --set");
      std::optional<LinearMap> map;
      if (embed_method == "identity") {
        map = identity_map(n);
      } else if (embed_method == "gaussian") {
        map = gaussian_map(embed_m, n, Seed{embed_seed});
        extra["gaussian"] = kGaussianMethod;
      } else {
        if (!set) throw PreconditionError("--method " + embed_method + " needs --set");
        if (embed_method == "pca") {
          auto pca = pca_map(*set, embed_m);
          if (pca.degenerate) extra["note"] = "degenerate-point-set";
          map = std::move(pca.map);
        } else {
          OptimizerOptions opts;
          opts.max_iters = embed_iters;
          opts.seed = Seed{embed_seed};
          auto result = optimize_map(*set, embed_m, opts);
          extra["eps_init"] = format_number(result.eps_init);
          extra["eps_final"] = format_number(result.eps_final);
          extra["iterations"] = std::to_string(result.iterations);
          extra["hit_iteration_limit"] = result.hit_iteration_limit ? "true" : "false";
          map = std::move(result.map);
        }
      }
      write_output(out_path, [&](std::ostream& os) { write_text(os, *map, extra); });
    } else if (*cert_cmd) {
      const auto echo = echo_config(*cert_cmd);
      const LinearMap map = load_linear_map(cert_map);
      json j;
      j["config"] = config_json(echo);
      j["m"] = map.rows();
      j["n"] = map.cols();
      if (!cert_set.empty()) {
        const PointSet set = load_point_set(cert_set);
        const json report = to_json(distortion(map, set, distortion_mode_from_string(cert_mode)));
        for (const auto& [key, value] : report.items()) j[key] = value;
        const auto cert = spectral_certificate(map);
        if (cert.frob_sq > 0.0 && !set.empty()) {
          const auto w = witness_search(map, set);
          j["witness_index"] = w.index;
          j["witness_deviation"] = w.deviation;
        }
      }
      const json cert = to_json(spectral_certificate(map));
      for (const auto& [key, value] : cert.items()) j[key] = value;
      write_json(out_path, j);
    } else if (*audit_cmd) {
      const auto echo = echo_config(*audit_cmd);
      const LinearMap map = load_linear_map(audit_map);
      const PointSet set = load_point_set(audit_set);
      const AuditReport report = lower_bound_audit(map, set, audit_eps);
      json j;
      j["config"] = config_json(echo);
      const json body = to_json(report);
      for (const auto& [key, value] : body.items()) j[key] = value;
      j["passed"] = report.passed();
      write_json(out_path, j);
      if (!report.passed()) return kExitPrecondition;
    } else if (*tails_cmd) {
      auto echo = echo_config(*tails_cmd);
      tails.t_grid = parse_real_list(tails_grid);
      tails.seed = Seed{tails_seed};
      if (!tails_m->count()) tails.m = std::max<std::size_t>(1, tails.n / 2);
      set_echo(echo, "m", std::to_string(tails.m));
      const auto result = run_tails(tails);
      if (tails.calibrate) {
        echo.emplace_back("calibrated_c", format_number(result.used.c));
        echo.emplace_back("calibrated_c1", format_number(result.used.c1));
        echo.emplace_back("calibrated_c2", format_number(result.used.c2));
      }
      write_output(out_path, [&](std::ostream& os) { write_tails_csv(os, echo, result.rows); });
    } else if (*front_cmd) {
      auto echo = echo_config(*front_cmd);
      const PointSet set = front.path.empty() ? make_point_set(front, front_k->count() > 0, child(Seed{front.seed}, 0))
                                              : load_point_set(front.path);
      if (front.path.empty()) {
        set_echo(echo, "k", std::to_string(resolve_k(front.k, front_k->count() > 0, front.n, front.gamma)));
      }
      FrontierOptions opts;
      opts.m_grid = front_grid.empty() ? default_m_grid(set.dim()) : parse_size_list(front_grid);
      opts.restarts = restarts;
      opts.seed = Seed{front.seed};
      opts.optimizer.max_iters = front_iters;
      opts.timing = timing;
      echo.emplace_back("points", std::to_string(set.size()));
      echo.emplace_back("gaussian", kGaussianMethod);
      const auto rows = run_frontier(set, opts);
      write_output(out_path, [&](std::ostream& os) { write_frontier_csv(os, echo, rows, timing); });

      auto first_at_most = [&](auto field) -> std::string {
        for (const auto& r : rows) {
          if (field(r) <= front_eps) return std::to_string(r.m);
        }
        return "none";
      };
      std::cerr << "smallest m with eps <= " << front_eps
                << ": random=" << first_at_most([](const FrontierRow& r) { return r.eps_random_best; })
                << " optimizer=" << first_at_most([](const FrontierRow& r) { return r.eps_opt; }) << '\n';
    } else if (*net_cmd) {
      const auto echo = echo_config(*net_cmd);
      std::optional<LinearMap> map;
      if (!net_map.empty()) {
        map = load_linear_map(net_map);
        net_n = map->cols();
      }
      const NetParams p = net_params(net_n, net_alpha);
      const NetCardinality card = log_cardinality(net_n, net_alpha);
      json j;
      j["config"] = config_json(echo);
      j["n"] = p.n;
      j["alpha"] = p.alpha;
      j["grid_step"] = p.grid_step;
      j["max_index"] = p.max_index;
      j["covers_box"] = p.covers_box();
      j["exact_log"] = card.exact_log;
      j["closed_form_bound_log"] = card.closed_form_bound_log;
      if (map) {
        const LinearMap q = quantize(*map, net_alpha);
        const double err = quantization_error_sq(*map, q);
        j["error_sq"] = err;
        j["budget"] = net_alpha / 100.0;
        j["budget_ok"] = err <= net_alpha / 100.0;
        if (!net_map_out.empty()) save_linear_map(net_map_out, q, config_fields(echo));
      }
      if (net_c->count()) {
        const CoveringRadius cr = covering_radius_for(net_n, net_exponent);
        j["covering_alpha"] = cr.alpha;
        j["covering_clamped"] = cr.clamped;
        j["covering_note"] = cr.note;
      }
      write_json(out_path, j);
    }
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition failed: " << e.what() << '\n';
    return kExitPrecondition;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return 0;
}
