#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "superdiff/accuracy.hpp"
#include "superdiff/reconstruct.hpp"

using namespace superdiff;

namespace {

GCurve known_curve(double gamma, double alpha, const LogMesh& sm) {
  std::vector<double> gv(sm.values.size());
  for (std::size_t i = 0; i < gv.size(); ++i)
    gv[i] = std::max(1.0, alpha * sm.values[i]);
  return GCurve(gamma, sm, gv, alpha);
}

ExactField field_from_curve(const GCurve& curve, const LogMesh& tm,
                            const LogMesh& sm) {
  ExactField field;
  field.gamma = curve.gamma();
  field.t_mesh = tm;
  field.s_mesh = sm;
  KernelParams params(curve.gamma());
  field.values.resize(tm.values.size() * sm.values.size());
  for (std::size_t i = 0; i < tm.values.size(); ++i)
    for (std::size_t j = 0; j < sm.values.size(); ++j)
      field.values[i * sm.values.size() + j] = automodel_density(
          curve, similarity_rho(params, tm.values[i], sm.values[j]),
          tm.values[i]);
  return field;
}

}  // namespace

TEST_CASE("self-consistent field gives ratio 1 and boundary at t_min") {
  auto sm = log_mesh(0.01, 1000.0, 5);
  auto tm = log_mesh(30.0, 3000.0, 5);
  GCurve curve = known_curve(1.0, 2.0, sm);
  auto field = field_from_curve(curve, tm, sm);
  auto rep = analyze_accuracy(field, curve);
  CHECK(rep.t10_reached);
  CHECK(rep.t10 == tm.values.front());
  CHECK(rep.max_error_after_t10 < 1e-12);
  // Ties broken toward the smallest t then s.
  CHECK(rep.t_star == tm.values.front());
  CHECK(rep.s_star == sm.values.front());
  for (double r : rep.ratio) CHECK(r == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("crafted violations set the boundary row") {
  auto sm = log_mesh(0.01, 1000.0, 5);
  auto tm = log_mesh(30.0, 3000.0, 5);
  GCurve curve = known_curve(1.0, 2.0, sm);
  auto field = field_from_curve(curve, tm, sm);
  const std::size_t ns = sm.values.size();
  // Break the 10% band at row 3 (and below at row 1).
  field.values[1 * ns + 4] *= 1.5;
  field.values[3 * ns + 7] *= 0.8;
  auto rep = analyze_accuracy(field, curve);
  CHECK(rep.t10_reached);
  CHECK(rep.t10 == tm.values[4]);
  CHECK(rep.max_error_after_t10 < 0.1);
}

TEST_CASE("perturbation inside the band does not move the boundary") {
  auto sm = log_mesh(0.01, 1000.0, 5);
  auto tm = log_mesh(30.0, 3000.0, 5);
  GCurve curve = known_curve(1.0, 2.0, sm);
  auto field = field_from_curve(curve, tm, sm);
  const std::size_t ns = sm.values.size();
  field.values[2 * ns + 3] *= 1.05;  // 5% off, still inside
  auto rep = analyze_accuracy(field, curve);
  CHECK(rep.t10 == tm.values.front());
  CHECK(rep.max_error_after_t10 == doctest::Approx(1.0 - 1.0 / 1.05).epsilon(1e-9));
  CHECK(rep.t_star == tm.values[2]);
  CHECK(rep.s_star == sm.values[3]);
}

TEST_CASE("never-satisfied band reports not reached") {
  auto sm = log_mesh(0.01, 1000.0, 5);
  auto tm = log_mesh(30.0, 3000.0, 5);
  GCurve curve = known_curve(1.0, 2.0, sm);
  auto field = field_from_curve(curve, tm, sm);
  const std::size_t ns = sm.values.size();
  // Violate the band on the last row so no t* exists.
  field.values[(tm.values.size() - 1) * ns + 2] *= 2.0;
  auto rep = analyze_accuracy(field, curve);
  CHECK_FALSE(rep.t10_reached);
  CHECK(std::isnan(rep.t10));
  // Locus still reported over the whole grid.
  CHECK(rep.t_star == tm.values.back());
  CHECK(rep.s_star == sm.values[2]);
}

TEST_CASE("ratio field rejects mismatched gamma and bad values") {
  auto sm = log_mesh(0.01, 1000.0, 5);
  auto tm = log_mesh(30.0, 3000.0, 5);
  GCurve curve = known_curve(1.0, 2.0, sm);
  auto field = field_from_curve(curve, tm, sm);
  GCurve other = known_curve(1.1, 2.0, sm);
  CHECK_THROWS_AS(ratio_field(field, other), std::invalid_argument);
  field.values[0] = -1.0;
  CHECK_THROWS_WITH_AS(ratio_field(field, curve),
                       doctest::Contains("non-positive"), std::runtime_error);
}
