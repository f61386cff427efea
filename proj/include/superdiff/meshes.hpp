#pragma once

#include <vector>

namespace superdiff {

// Log-equidistant mesh: values[i] = lo * 10^(i / points_per_decade).
struct LogMesh {
  double lo = 0.0;
  double hi = 0.0;
  int points_per_decade = 0;
  std::vector<double> values;
};

// values[i] = lo + i * step, inclusive endpoints.
struct LinearMesh {
  double lo = 0.0;
  double hi = 0.0;
  double step = 0.0;
  std::vector<double> values;
};

// count = floor(points_per_decade * log10(hi/lo)) + 1. The last value can
// fall one sub-decade step short of hi when the span is not an integer
// number of steps (the 653-point t-mesh is the canonical case).
LogMesh log_mesh(double lo, double hi, int points_per_decade);

// step must divide (hi - lo) to relative tolerance 1e-9.
LinearMesh linear_mesh(double lo, double hi, double step);

}  // namespace superdiff
