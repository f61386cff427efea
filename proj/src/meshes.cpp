#include "superdiff/meshes.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace superdiff {

LogMesh log_mesh(double lo, double hi, int points_per_decade) {
  if (!(lo > 0.0))
    throw std::invalid_argument("log_mesh: lo must be positive, got " +
                                std::to_string(lo));
  if (!(hi > lo))
    throw std::invalid_argument("log_mesh: hi must exceed lo");
  if (points_per_decade <= 0)
    throw std::invalid_argument("log_mesh: points_per_decade must be positive");

  const double span = std::log10(hi / lo) * points_per_decade;
  // 1e-9 slack so exact decade counts survive the hi/lo rounding.
  const int count = static_cast<int>(std::floor(span + 1e-9)) + 1;

  LogMesh m;
  m.lo = lo;
  m.hi = hi;
  m.points_per_decade = points_per_decade;
  m.values.resize(count);
  for (int i = 0; i < count; ++i)
    m.values[i] = lo * std::pow(10.0, static_cast<double>(i) / points_per_decade);
  return m;
}

LinearMesh linear_mesh(double lo, double hi, double step) {
  if (!(hi > lo)) throw std::invalid_argument("linear_mesh: hi must exceed lo");
  if (!(step > 0.0))
    throw std::invalid_argument("linear_mesh: step must be positive");
  const double n_real = (hi - lo) / step;
  const long long n = std::llround(n_real);
  if (n < 1 || std::abs(n_real - static_cast<double>(n)) >
                   1e-9 * std::max(1.0, static_cast<double>(n)))
    throw std::invalid_argument("linear_mesh: step " + std::to_string(step) +
                                " does not divide the range [" +
                                std::to_string(lo) + ", " + std::to_string(hi) +
                                "]");
  LinearMesh m;
  m.lo = lo;
  m.hi = hi;
  m.step = step;
  m.values.resize(n + 1);
  for (long long i = 0; i <= n; ++i) m.values[i] = lo + step * i;
  m.values.back() = hi;
  return m;
}

}  // namespace superdiff
