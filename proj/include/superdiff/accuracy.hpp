#pragma once

#include <vector>

#include "superdiff/automodel.hpp"
#include "superdiff/exact.hpp"

namespace superdiff {

struct AccuracyReport {
  double gamma = 0.0;
  double t10 = 0.0;       // boundary time (t-mesh value)
  bool t10_reached = false;
  double t_star = 0.0;    // maximal-error node at t >= t10
  double s_star = 0.0;
  double max_error_after_t10 = 0.0;
  // Row-major f_auto / f_exact over (t_i, s_j).
  std::vector<double> ratio;
};

// Entrywise automodel_density / f_reg on the field's grid.
std::vector<double> ratio_field(const ExactField& field, const GCurve& curve);

// Smallest mesh t* such that |ratio - 1| <= 0.1 at every mesh node with
// t >= t*. Returns the t-mesh size when the condition is never met.
std::size_t t10_row_index(const std::vector<double>& ratio,
                          const ExactField& field);

// Argmax of |ratio - 1| over nodes with t >= t10 (whole grid when the
// boundary was not reached); ties broken by smallest t, then smallest s.
void error_locus(const std::vector<double>& ratio, const ExactField& field,
                 std::size_t t10_row, std::size_t& i_star,
                 std::size_t& j_star);

AccuracyReport analyze_accuracy(const ExactField& field, const GCurve& curve);

}  // namespace superdiff
