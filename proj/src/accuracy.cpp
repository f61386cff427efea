#include "superdiff/accuracy.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace superdiff {

std::vector<double> ratio_field(const ExactField& field, const GCurve& curve) {
  if (std::abs(field.gamma - curve.gamma()) > 1e-12)
    throw std::invalid_argument("ratio_field: field and curve gamma differ");
  const KernelParams params(field.gamma);
  const std::size_t nt = field.t_mesh.values.size();
  const std::size_t ns = field.s_mesh.values.size();
  std::vector<double> ratio(nt * ns, 0.0);
  for (std::size_t i = 0; i < nt; ++i) {
    const double t = field.t_mesh.values[i];
    for (std::size_t j = 0; j < ns; ++j) {
      const double f_exact = field.at(i, j);
      if (!(f_exact > 0.0))
        throw std::runtime_error(
            "ratio_field: non-positive exact value at t=" + std::to_string(t) +
            ", s=" + std::to_string(field.s_mesh.values[j]));
      const double rho = similarity_rho(params, t, field.s_mesh.values[j]);
      ratio[i * ns + j] = automodel_density(curve, rho, t) / f_exact;
    }
  }
  return ratio;
}

std::size_t t10_row_index(const std::vector<double>& ratio,
                          const ExactField& field) {
  const std::size_t nt = field.t_mesh.values.size();
  const std::size_t ns = field.s_mesh.values.size();
  // Scan from the last row down while every row stays inside the 10% band.
  std::size_t boundary = nt;
  for (std::size_t ii = nt; ii-- > 0;) {
    double row_max = 0.0;
    for (std::size_t j = 0; j < ns; ++j)
      row_max = std::max(row_max, std::abs(ratio[ii * ns + j] - 1.0));
    if (row_max > 0.1) break;
    boundary = ii;
  }
  return boundary;
}

void error_locus(const std::vector<double>& ratio, const ExactField& field,
                 std::size_t t10_row, std::size_t& i_star,
                 std::size_t& j_star) {
  const std::size_t nt = field.t_mesh.values.size();
  const std::size_t ns = field.s_mesh.values.size();
  const std::size_t start = t10_row < nt ? t10_row : 0;
  i_star = start;
  j_star = 0;
  double worst = -1.0;
  for (std::size_t i = start; i < nt; ++i)
    for (std::size_t j = 0; j < ns; ++j) {
      const double err = std::abs(ratio[i * ns + j] - 1.0);
      if (err > worst) {  // strict: ties keep the smallest (t, s)
        worst = err;
        i_star = i;
        j_star = j;
      }
    }
}

AccuracyReport analyze_accuracy(const ExactField& field, const GCurve& curve) {
  AccuracyReport rep;
  rep.gamma = field.gamma;
  rep.ratio = ratio_field(field, curve);
  const std::size_t nt = field.t_mesh.values.size();
  const std::size_t ns = field.s_mesh.values.size();
  const std::size_t row = t10_row_index(rep.ratio, field);
  rep.t10_reached = row < nt;
  rep.t10 = rep.t10_reached ? field.t_mesh.values[row]
                            : std::numeric_limits<double>::quiet_NaN();
  std::size_t i_star = 0, j_star = 0;
  error_locus(rep.ratio, field, row, i_star, j_star);
  rep.t_star = field.t_mesh.values[i_star];
  rep.s_star = field.s_mesh.values[j_star];
  double worst = 0.0;
  for (std::size_t i = (rep.t10_reached ? row : 0); i < nt; ++i)
    for (std::size_t j = 0; j < ns; ++j)
      worst = std::max(worst, std::abs(rep.ratio[i * ns + j] - 1.0));
  rep.max_error_after_t10 = worst;
  return rep;
}

}  // namespace superdiff
