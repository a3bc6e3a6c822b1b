#include "doctest.h"

#include <cmath>
#include <random>

#include "jlopt/error.hpp"
#include "jlopt/net.hpp"

using namespace jlopt;

namespace {

RowMatrix uniform_box(std::size_t m, std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  RowMatrix a(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = u(rng);
  return a;
}

}  // namespace

TEST_CASE("grid parameters") {
  const auto p = net_params(2, 0.01);
  CHECK(p.grid_step == doctest::Approx(0.005).epsilon(1e-15));
  CHECK(p.max_index >= 399);
  CHECK_THROWS_AS(net_params(2, 1.0), PreconditionError);
  CHECK_THROWS_AS(net_params(2, 0.0), PreconditionError);
  // 20 n / sqrt(alpha) = 40 / 0.5 exactly: the box is covered.
  CHECK(net_params(2, 0.25).covers_box());
  // Just below alpha = 1 the floor drops the last step and coverage fails.
  CHECK_FALSE(net_params(1, 1.0 - 1e-9).covers_box());
}

TEST_CASE("quantize: hand-computed rounding") {
  RowMatrix a(1, 2);
  a << 0.0127, -0.0127;
  const auto q = quantize(LinearMap(a), 0.01);
  CHECK(q.matrix()(0, 0) == 3 * net_params(2, 0.01).grid_step);
  CHECK(q.matrix()(0, 1) == -3 * net_params(2, 0.01).grid_step);
}

TEST_CASE("quantize: exact ties round toward zero") {
  // n = 5, sqrt(alpha) = 0.78125: step = 2^-6 exactly.
  const double alpha = 0.78125 * 0.78125;
  const double step = net_params(5, alpha).grid_step;
  REQUIRE(step == 0x1p-6);
  RowMatrix a = RowMatrix::Zero(1, 5);
  a(0, 0) = 2.5 * step;
  a(0, 1) = -2.5 * step;
  a(0, 2) = 0.5 * step;
  a(0, 3) = 2.5000001 * step;
  const auto q = quantize(LinearMap(a), alpha).matrix();
  CHECK(q(0, 0) == 2 * step);
  CHECK(q(0, 1) == -2 * step);
  CHECK(q(0, 2) == 0.0);
  CHECK(q(0, 3) == 3 * step);
}

TEST_CASE("quantize: grid-aligned input is a fixed point") {
  const double step = net_params(3, 0.04).grid_step;
  RowMatrix a(2, 3);
  a << 0, step, -7 * step, 100 * step, -200 * step, 3 * step;
  CHECK(quantize(LinearMap(a), 0.04).matrix() == a);
}

TEST_CASE("quantize: budget and idempotence on random admissible matrices") {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<std::size_t> dim(1, 6);
  for (double alpha : {1e-4, 1e-2, 0.5}) {
    for (int trial = 0; trial < 1000; ++trial) {
      const std::size_t n = dim(rng);
      const LinearMap a(uniform_box(std::uniform_int_distribution<std::size_t>(1, n)(rng), n, rng));
      const auto q = quantize(a, alpha);
      const double err = quantization_error_sq(a, q);
      REQUIRE(err <= alpha / 100.0);
      if (net_params(a.cols(), alpha).covers_box()) REQUIRE(err <= alpha / 400.0);
      REQUIRE(quantize(q, alpha) == q);
    }
  }
}

TEST_CASE("quantize: maps with more rows than columns are refused") {
  CHECK_THROWS_AS(quantize(LinearMap(RowMatrix::Zero(3, 2)), 0.1), PreconditionError);
}

TEST_CASE("quantize: out-of-box entries name their index") {
  RowMatrix a = RowMatrix::Zero(2, 2);
  a(1, 0) = 2.5;
  try {
    quantize(LinearMap(a), 0.1);
    FAIL("expected a precondition error");
  } catch (const PreconditionError& e) {
    CHECK(std::string(e.what()).find("(1, 0)") != std::string::npos);
  }
}

TEST_CASE("log_cardinality: hand enumeration") {
  const double near_one = 1.0 - 1e-9;
  CHECK(log_cardinality(1, near_one).exact_log == doctest::Approx(std::log(41.0)).epsilon(1e-12));
  CHECK(log_cardinality(2, near_one).exact_log ==
        doctest::Approx(std::log(81.0 * 81.0 + std::pow(81.0, 4))).epsilon(1e-12));
}

TEST_CASE("log_cardinality: bound, monotonicity") {
  for (std::size_t n = 1; n <= 64; ++n) {
    for (int k = 1; k <= 20; ++k) {
      const auto c = log_cardinality(n, std::ldexp(1.0, -k));
      REQUIRE(c.exact_log <= c.closed_form_bound_log + std::log(2.0));
      if (k > 1) REQUIRE(c.exact_log > log_cardinality(n, std::ldexp(1.0, -k + 1)).exact_log);
      if (n > 1) REQUIRE(c.exact_log > log_cardinality(n - 1, std::ldexp(1.0, -k)).exact_log);
    }
  }
}

TEST_CASE("covering radius") {
  const auto clamped = covering_radius_for(10, 1.0);
  CHECK(clamped.clamped);
  CHECK(clamped.alpha < 1.0);
  CHECK_FALSE(clamped.note.empty());

  const auto r = covering_radius_for(10, 2.0);
  CHECK_FALSE(r.clamped);
  CHECK(r.alpha == doctest::Approx(0.01).epsilon(1e-14));
  CHECK(std::sqrt(r.alpha / 100.0) <= 1e-2 * (1 + 1e-15));

  std::mt19937_64 rng(7);
  for (double c : {1.5, 2.0, 3.0}) {
    const auto cr = covering_radius_for(10, c);
    for (int trial = 0; trial < 100; ++trial) {
      const LinearMap a(uniform_box(4, 10, rng));
      REQUIRE(std::sqrt(quantization_error_sq(a, quantize(a, cr.alpha))) <= std::pow(10.0, -c));
    }
  }
}
