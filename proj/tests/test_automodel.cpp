#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "superdiff/automodel.hpp"

using namespace superdiff;

namespace {
constexpr double kPi = 3.14159265358979323846;

GCurve unit_curve(double gamma) {
  // g identically 1 on a small mesh, slope 1 to the right.
  auto sm = log_mesh(0.01, 1000.0, 2);
  return GCurve(gamma, sm, std::vector<double>(sm.values.size(), 1.0), 1.0);
}
}  // namespace

TEST_CASE("front position closed forms") {
  CHECK(front_position(KernelParams(1.0), 2.0) == doctest::Approx(2.0));
  // (t+1)^(1/gamma) - 1 = 4^2 - 1 = 15 at gamma = 0.5, t = 3.
  CHECK(front_position(KernelParams(0.5), 3.0) ==
        doctest::Approx(15.0).epsilon(1e-14));
  CHECK(front_position(KernelParams(1.3), 0.0) == 0.0);
}

TEST_CASE("similarity maps and inversions") {
  KernelParams params(1.0);
  CHECK(similarity_t(params, 2.0, 1.5) == doctest::Approx(3.0).epsilon(1e-14));
  // rho_fr is the s = 1 contour.
  KernelParams p07(0.7);
  const double t = 1e4;
  CHECK(similarity_s(p07, front_position(p07, t), t) ==
        doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("similarity round trip is tight") {
  KernelParams params(1.3);
  const double t = 1e6, rho = 17.0;
  const double s = similarity_s(params, rho, t);
  const double back = similarity_rho(params, t, s);
  CHECK(back == doctest::Approx(rho).epsilon(1e-14));
  const double t_back = similarity_t(params, rho, s);
  CHECK(t_back == doctest::Approx(t).epsilon(1e-12));
}

TEST_CASE("similarity maps reject degenerate input") {
  KernelParams params(1.0);
  CHECK_THROWS_AS(similarity_s(params, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(similarity_rho(params, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(front_position(params, -1.0), std::invalid_argument);
}

TEST_CASE("closed-form slope coefficient") {
  // 2 [ (pi/2)(pi/2) ]^(1/2) = pi at gamma = 1.
  CHECK(alpha_coefficient(KernelParams(1.0), kPi / 2.0) ==
        doctest::Approx(kPi).epsilon(1e-12));
  for (double g : {0.5, 0.75, 1.0, 1.25, 1.5}) {
    const double a = alpha_coefficient(KernelParams(g));
    CHECK(a > 0.0);
    CHECK(std::isfinite(a));
  }
}

TEST_CASE("automodel density with unit g reduces to t W(rho)") {
  for (double g : {0.5, 1.0, 1.5}) {
    const GCurve curve = unit_curve(g);
    KernelParams params(g);
    const double t = 100.0;
    for (double rho : {0.02, 1.0, 40.0}) {
      // keep s = rho_fr/rho inside the tabulated mesh so g(s) = 1 applies
      if (front_position(params, t) / rho > 1000.0) continue;
      CHECK(automodel_density(curve, rho, t) ==
            doctest::Approx(t * step_pdf(params, rho)).epsilon(1e-12));
    }
  }
}

TEST_CASE("trivial automodel value") {
  // gamma=1, t=3, rho=2, g=1: 3 * 0.5 / 9 = 1/6.
  CHECK(automodel_density(unit_curve(1.0), 2.0, 3.0) ==
        doctest::Approx(1.0 / 6.0).epsilon(1e-13));
}

TEST_CASE("on-axis plateau uses the linear extension") {
  auto sm = log_mesh(0.01, 1000.0, 2);
  std::vector<double> gv(sm.values.size());
  const double alpha = 2.0;
  for (std::size_t i = 0; i < gv.size(); ++i)
    gv[i] = std::max(1.0, alpha * sm.values[i]);
  GCurve curve(1.0, sm, gv, alpha);
  const double t = 50.0;
  const double rho_fr = front_position(KernelParams(1.0), t);
  const double expected =
      0.5 * t * std::pow(1.0 + alpha * rho_fr, -2.0);
  CHECK(automodel_density(curve, 0.0, t) ==
        doctest::Approx(expected).epsilon(1e-13));
  // Deep inside the front the density is nearly rho-independent.
  const double a = automodel_density(curve, rho_fr * 1e-5, t);
  const double b = automodel_density(curve, rho_fr * 1e-6, t);
  CHECK(a == doctest::Approx(b).epsilon(1e-4));
  CHECK(a == doctest::Approx(expected).epsilon(1e-3));
}

TEST_CASE("gcurve evaluation branches are continuous at the mesh edges") {
  auto sm = log_mesh(0.01, 1000.0, 10);
  std::vector<double> gv(sm.values.size());
  for (std::size_t i = 0; i < gv.size(); ++i)
    gv[i] = std::max(1.0, 1.7 * sm.values[i]);
  GCurve curve(1.2, sm, gv, 1.7);
  CHECK(curve.g(0.001) == 1.0);
  CHECK(curve.g(5000.0) == doctest::Approx(1.7 * 5000.0));
  // Values 1 ulp either side of a mesh node stay on the tabulated branch.
  const double lo = sm.values.front();
  CHECK(curve.g(std::nextafter(lo, 0.0)) ==
        doctest::Approx(curve.g(lo)).epsilon(1e-12));
  const double hi = sm.values.back();
  CHECK(curve.g(std::nextafter(hi, 1e9)) ==
        doctest::Approx(curve.g(hi)).epsilon(1e-12));
}

TEST_CASE("gcurve save/load round trip") {
  auto sm = log_mesh(0.01, 1000.0, 5);
  std::vector<double> gv(sm.values.size());
  for (std::size_t i = 0; i < gv.size(); ++i)
    gv[i] = 1.0 + 0.5 * sm.values[i];
  GCurve curve(0.8, sm, gv, 0.513);
  std::stringstream ss;
  curve.save(ss);
  GCurve back = GCurve::load(ss);
  CHECK(back.gamma() == curve.gamma());
  CHECK(back.alpha() == curve.alpha());
  REQUIRE(back.g_values().size() == curve.g_values().size());
  for (double s : {0.02, 0.7, 31.0, 950.0})
    CHECK(back.g(s) == doctest::Approx(curve.g(s)).epsilon(1e-12));
}

TEST_CASE("gcurve constructor validation") {
  auto sm = log_mesh(0.01, 1000.0, 2);
  std::vector<double> gv(sm.values.size(), 1.0);
  CHECK_THROWS_AS(GCurve(1.0, sm, gv, 0.0), std::invalid_argument);
  gv[2] = -1.0;
  CHECK_THROWS_AS(GCurve(1.0, sm, gv, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(GCurve(1.0, sm, std::vector<double>(3, 1.0), 1.0),
                  std::invalid_argument);
}
