#pragma once

#include <vector>

#include "superdiff/automodel.hpp"
#include "superdiff/exact.hpp"

namespace superdiff {

// Q_W(s, t) field with its time average and collapse diagnostics.
struct QField {
  double gamma = 0.0;
  LogMesh t_mesh;
  LogMesh s_mesh;
  // Row-major over (t_i, s_j), like ExactField.
  std::vector<double> q_values;
  // Per-s time average, trapezoidal weights in t (late rows dominate, so
  // the average tracks the large-t limit of Q_W).
  std::vector<double> q_avg;
  // Per-s max over t of |Q_W / q_avg - 1|.
  std::vector<double> spread;

  double at(std::size_t i, std::size_t j) const {
    return q_values[i * s_mesh.values.size() + j];
  }
};

// Q_W = (1/rho) [ (gamma t / (2 f))^(1/(gamma+1)) - 1 ]; the algebraic
// inverse of the automodel density with respect to g.
double q_w(const KernelParams& params, double rho, double t, double f);

QField q_field(const KernelParams& params, const ExactField& field);

// g = q_avg; alpha from a least-squares fit of log g - log s over the top
// half-decade of the s-mesh (at least 10 points required).
GCurve g_curve_from(const QField& qf);

}  // namespace superdiff
