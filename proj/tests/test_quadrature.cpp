#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include <gsl/gsl_sf_expint.h>

#include "doctest.h"
#include "superdiff/quadrature.hpp"

using namespace superdiff;

namespace {
constexpr double kPi = 3.14159265358979323846;

// int_0^inf sin(p x)/(1+x) dx in closed form.
double sine_over_shifted(double p) {
  return gsl_sf_Ci(p) * std::sin(p) +
         std::cos(p) * (kPi / 2.0 - gsl_sf_Si(p));
}
}  // namespace

TEST_CASE("adaptive integration of elementary finite integrals") {
  auto sin1 = [](double x) { return std::sin(x); };
  CHECK(detail::adaptive_integrate(sin1, {0.0, kPi}, 1e-12, 1e-300, 60) ==
        doctest::Approx(2.0).epsilon(1e-12));
  auto gauss = [](double x) { return std::exp(-x * x); };
  CHECK(detail::adaptive_integrate(gauss, {-8.0, 8.0}, 1e-12, 1e-300, 60) ==
        doctest::Approx(std::sqrt(kPi)).epsilon(1e-12));
}

TEST_CASE("adaptive integration against a closed-form rational integral") {
  // int_0^pi dx/(1+x) = log(1+pi)
  auto f = [](double x) { return 1.0 / (1.0 + x); };
  CHECK(detail::adaptive_integrate(f, {0.0, kPi}, 1e-13, 1e-300, 60) ==
        doctest::Approx(std::log1p(kPi)).epsilon(1e-12));
}

TEST_CASE("adaptive integration resolves a sharp interior peak") {
  auto f = [](double x) { return 1.0 / (1e-6 + (x - 0.37) * (x - 0.37)); };
  const double ref = (std::atan((1.0 - 0.37) / 1e-3) + std::atan(0.37 / 1e-3)) / 1e-3;
  CHECK(detail::adaptive_integrate(f, {0.0, 1.0}, 1e-11, 1e-300, 60) ==
        doctest::Approx(ref).epsilon(1e-10));
}

TEST_CASE("scale_breakpoints pre-splits intervals touching zero") {
  const auto pts = detail::scale_breakpoints(0.0, 1.0);
  REQUIRE(pts.size() > 3);
  CHECK(pts.front() == 0.0);
  CHECK(pts.back() == 1.0);
  for (std::size_t i = 1; i < pts.size(); ++i) CHECK(pts[i] > pts[i - 1]);
  // No pre-split needed when the left edge is away from zero.
  CHECK(detail::scale_breakpoints(0.5, 1.0).size() == 2);
}

TEST_CASE("semi-infinite oscillatory integral matches the Si/Ci closed form") {
  QuadratureConfig cfg;
  cfg.rel_tol = 1e-11;
  for (double p : {0.3, 1.0, 2.7}) {
    auto envelope = [](double x) { return 1.0 / (1.0 + x); };
    const auto r = integrate_semi_infinite_oscillatory(
        envelope, Oscillator{OscKind::Sine, p}, cfg);
    CHECK(r.value == doctest::Approx(sine_over_shifted(p)).epsilon(1e-10));
    CHECK(r.cells_used >= 6);
  }
}

TEST_CASE("semi-infinite oscillatory with exponential envelope") {
  // int_0^inf e^(-x) sin(x) dx = 1/2; e^(-x) cos(x) dx = 1/2.
  QuadratureConfig cfg;
  cfg.rel_tol = 1e-12;
  auto envelope = [](double x) { return std::exp(-x); };
  CHECK(integrate_semi_infinite_oscillatory(envelope,
                                            Oscillator{OscKind::Sine, 1.0}, cfg)
            .value == doctest::Approx(0.5).epsilon(1e-11));
  CHECK(integrate_semi_infinite_oscillatory(
            envelope, Oscillator{OscKind::Cosine, 1.0}, cfg)
            .value == doctest::Approx(0.5).epsilon(1e-11));
}

TEST_CASE("oscillatory cells alternate in sign under a positive envelope") {
  QuadratureConfig cfg;
  auto envelope = [](double x) { return 1.0 / (1.0 + x); };
  const auto r = integrate_semi_infinite_oscillatory(
      envelope, Oscillator{OscKind::Sine, 1.0}, cfg);
  REQUIRE(r.cell_values.size() >= 6);
  for (std::size_t k = 1; k < r.cell_values.size(); ++k)
    CHECK(r.cell_values[k] * r.cell_values[k - 1] < 0.0);
  // First cell of sin over [0, pi] is positive.
  CHECK(r.cell_values[0] > 0.0);
}

TEST_CASE("tolerance tightening is self-consistent") {
  auto envelope = [](double x) { return std::pow(1.0 + x, -1.5); };
  QuadratureConfig loose, tight;
  loose.rel_tol = 1e-7;
  tight.rel_tol = 1e-12;
  const auto a = integrate_semi_infinite_oscillatory(
      envelope, Oscillator{OscKind::Cosine, 2.0}, loose);
  const auto b = integrate_semi_infinite_oscillatory(
      envelope, Oscillator{OscKind::Cosine, 2.0}, tight);
  CHECK(a.value == doctest::Approx(b.value).epsilon(1e-6));
}

TEST_CASE("oscillatory integral is linear in the envelope") {
  QuadratureConfig cfg;
  auto e1 = [](double x) { return 1.0 / (1.0 + x); };
  auto e2 = [](double x) { return std::exp(-0.5 * x); };
  auto mix = [&](double x) { return 2.0 * e1(x) + 3.0 * e2(x); };
  Oscillator osc{OscKind::Sine, 1.3};
  const double v1 = integrate_semi_infinite_oscillatory(e1, osc, cfg).value;
  const double v2 = integrate_semi_infinite_oscillatory(e2, osc, cfg).value;
  const double vm = integrate_semi_infinite_oscillatory(mix, osc, cfg).value;
  CHECK(vm == doctest::Approx(2.0 * v1 + 3.0 * v2).epsilon(1e-8));
}

TEST_CASE("cell budget exhaustion raises a diagnosable error") {
  QuadratureConfig cfg;
  cfg.max_cells = 8;
  cfg.rel_tol = 1e-13;
  // Envelope decaying so slowly that 8 cells cannot converge.
  auto envelope = [](double x) { return 1.0 / std::sqrt(1.0 + x); };
  CHECK_THROWS_AS(integrate_semi_infinite_oscillatory(
                      envelope, Oscillator{OscKind::Sine, 1.0}, cfg),
                  QuadratureError);
  try {
    integrate_semi_infinite_oscillatory(envelope,
                                        Oscillator{OscKind::Sine, 1.0}, cfg);
  } catch (const QuadratureError& e) {
    CHECK(std::string(e.what()).find("partial sums") != std::string::npos);
    CHECK(std::isfinite(e.best_estimate));
  }
}

TEST_CASE("config validation rejects nonsense") {
  QuadratureConfig cfg;
  cfg.rel_tol = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = QuadratureConfig{};
  cfg.max_cells = 2;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  CHECK_THROWS_AS(integrate_cell([](double) { return 1.0; },
                                 Oscillator{OscKind::Sine, -1.0}, 0.0, 1.0,
                                 QuadratureConfig{}),
                  std::invalid_argument);
}
