#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "superdiff/automodel.hpp"
#include "superdiff/exact.hpp"

using namespace superdiff;

TEST_CASE("green_regular is even in x") {
  KernelParams params(1.0);
  for (double x : {0.5, 2.0, 17.0})
    CHECK(green_regular(params, x, 5.0) ==
          doctest::Approx(green_regular(params, -x, 5.0)).epsilon(1e-14));
}

TEST_CASE("step pdf self-convolutions") {
  KernelParams params(1.0);
  // (W*W)(0) = int W(u)^2 du = 2 int_0^inf (1/4)(1+u)^(-4) du = 1/6.
  CHECK(step_pdf_convolution(params, 0.0, 2) ==
        doctest::Approx(1.0 / 6.0).epsilon(1e-8));
  CHECK(step_pdf_convolution(params, 0.0, 1) == 0.5);
  // Convolutions stay normalized: int (W*W) dx = 1.
  double mass = 0.0;
  const int n = 6000;
  for (int i = 0; i < n; ++i) {
    const double u = (i + 0.5) / n;
    const double x = u / (1.0 - u);
    const double jac = 1.0 / ((1.0 - u) * (1.0 - u));
    mass += 2.0 * step_pdf_convolution(params, x, 2) * jac / n;
  }
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("small-t behaviour matches the scattering series") {
  for (double g : {0.5, 1.0, 1.5}) {
    KernelParams params(g);
    for (double t : {0.1, 0.2}) {
      for (double x : {0.0, 1.0, 5.0}) {
        const double ref = neumann_reference(params, x, t, 2);
        const double val = green_regular(params, x, t);
        CHECK(val == doctest::Approx(ref).epsilon(0.01));
      }
    }
  }
}

TEST_CASE("three-term series tightens the two-term comparison") {
  KernelParams params(1.0);
  const double t = 0.2, x = 1.0;
  const double val = green_regular(params, x, t);
  const double two = neumann_reference(params, x, t, 2);
  const double three = neumann_reference(params, x, t, 3);
  CHECK(std::abs(val - three) < std::abs(val - two));
  CHECK(val == doctest::Approx(three).epsilon(1e-3));
}

TEST_CASE("frozen value for the two-flight regime") {
  // gamma=1, t=0.1, x=2; dominated by single and double flights.
  KernelParams params(1.0);
  CHECK(green_regular(params, 2.0, 0.1) ==
        doctest::Approx(0.0053410796).epsilon(1e-6));
}

TEST_CASE("far front approaches the single-flight density") {
  KernelParams params(1.0);
  const double t = 50.0;
  // rho far beyond the front: f -> t W(rho) from below.
  const double rho = 1e7;
  const double f = green_regular(params, rho, t);
  CHECK(f / (t * step_pdf(params, rho)) == doctest::Approx(1.0).epsilon(0.01));
  CHECK(f < t * step_pdf(params, rho));
}

TEST_CASE("total excitation is conserved") {
  KernelParams params(0.5);
  GTable table = GTable::for_time_range(params, 100.0);
  CHECK(total_excitation(params, 30.0, outer_quadrature_default(), table) ==
        doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("field build agrees with pointwise evaluation") {
  KernelParams params(1.0);
  GTable table = GTable::for_time_range(params, 300.0);
  const auto tm = log_mesh(30.0, 300.0, 2);
  const auto sm = log_mesh(0.1, 100.0, 1);
  const auto field = exact_field(params, tm, sm, outer_quadrature_default(),
                                 table, 2);
  REQUIRE(field.values.size() == tm.values.size() * sm.values.size());
  for (std::size_t i = 0; i < tm.values.size(); ++i)
    for (std::size_t j = 0; j < sm.values.size(); ++j) {
      const double rho =
          similarity_rho(params, tm.values[i], sm.values[j]);
      const double direct = green_regular(
          params, rho, tm.values[i], outer_quadrature_default(), table);
      CHECK(field.at(i, j) == direct);
      CHECK(field.at(i, j) > 0.0);
    }
}

TEST_CASE("field build is deterministic across thread counts") {
  KernelParams params(1.3);
  GTable table = GTable::for_time_range(params, 1000.0);
  const auto tm = log_mesh(30.0, 1000.0, 4);
  const auto sm = log_mesh(0.05, 20.0, 3);
  const auto f1 = exact_field(params, tm, sm, outer_quadrature_default(),
                              table, 1);
  const auto f8 = exact_field(params, tm, sm, outer_quadrature_default(),
                              table, 8);
  REQUIRE(f1.values.size() == f8.values.size());
  for (std::size_t k = 0; k < f1.values.size(); ++k)
    CHECK(f1.values[k] == f8.values[k]);
}

TEST_CASE("input validation") {
  KernelParams params(1.0);
  CHECK_THROWS_AS(green_regular(params, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(neumann_reference(params, 1.0, 0.7, 2),
                  std::invalid_argument);
  CHECK_THROWS_AS(neumann_reference(params, 1.0, 0.2, 4),
                  std::invalid_argument);
  CHECK_THROWS_AS(step_pdf_convolution(params, 1.0, 0), std::invalid_argument);
  GTable table = GTable::for_time_range(params, 100.0);
  const auto sm = log_mesh(0.1, 10.0, 2);
  CHECK_THROWS_AS(exact_field(params, log_mesh(0.5, 50.0, 2), sm,
                              outer_quadrature_default(), table),
                  std::invalid_argument);
}
