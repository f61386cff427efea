#include "superdiff/reconstruct.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "superdiff/numerics.hpp"

namespace superdiff {

double q_w(const KernelParams& params, double rho, double t, double f) {
  if (!(rho > 0.0)) throw std::invalid_argument("q_w: rho must be positive");
  if (!(t > 0.0)) throw std::invalid_argument("q_w: t must be positive");
  if (!(f > 0.0)) throw std::invalid_argument("q_w: f must be positive");
  const double g = params.gamma;
  // Invert f = 0.5 g t (1 + rho g(s))^-(g+1) for y = 1 + rho g(s). The
  // seed pow carries the rounding of the exponent 1/(g+1) amplified by
  // log(y); one Newton step against the forward map's own exponent g+1
  // brings the round trip back to the ulp level at any magnitude.
  const double r = 0.5 * g * t / f;
  double y = std::pow(r, 1.0 / (g + 1.0));
  const double resid = 1.0 - r / std::pow(y, g + 1.0);
  y *= 1.0 - resid / (g + 1.0);
  return (y - 1.0) / rho;
}

QField q_field(const KernelParams& params, const ExactField& field) {
  QField qf;
  qf.gamma = field.gamma;
  qf.t_mesh = field.t_mesh;
  qf.s_mesh = field.s_mesh;
  const std::size_t nt = field.t_mesh.values.size();
  const std::size_t ns = field.s_mesh.values.size();
  qf.q_values.assign(nt * ns, 0.0);

  for (std::size_t i = 0; i < nt; ++i) {
    const double t = field.t_mesh.values[i];
    for (std::size_t j = 0; j < ns; ++j) {
      const double f = field.at(i, j);
      if (!(f > 0.0))
        throw std::runtime_error(
            "q_field: non-positive exact value at t=" + std::to_string(t) +
            ", s=" + std::to_string(field.s_mesh.values[j]));
      const double rho = similarity_rho(params, t, field.s_mesh.values[j]);
      qf.q_values[i * ns + j] = q_w(params, rho, t, f);
    }
  }

  // Time average with trapezoidal weights in t, not in log t: the late
  // rows then dominate and the average tracks the t -> infinity limit of
  // Q_W, which is what the reconstructed g is meant to capture. A uniform
  // mean over the log-spaced rows skews g toward pre-asymptotic times and
  // shifts the accuracy boundary far off the reference values.
  std::vector<double> weight(nt);
  for (std::size_t i = 0; i < nt; ++i) {
    const double lo =
        i ? 0.5 * (field.t_mesh.values[i] + field.t_mesh.values[i - 1])
          : field.t_mesh.values.front();
    const double hi = i + 1 < nt
                          ? 0.5 * (field.t_mesh.values[i] +
                                   field.t_mesh.values[i + 1])
                          : field.t_mesh.values.back();
    weight[i] = hi - lo;
  }
  CompensatedSum wsum;  // fixed index order: deterministic
  for (std::size_t i = 0; i < nt; ++i) wsum.add(weight[i]);
  const double total_weight = nt > 1 ? wsum.value() : 1.0;
  if (nt == 1) weight[0] = 1.0;

  qf.q_avg.assign(ns, 0.0);
  qf.spread.assign(ns, 0.0);
  for (std::size_t j = 0; j < ns; ++j) {
    CompensatedSum sum;
    for (std::size_t i = 0; i < nt; ++i)
      sum.add(weight[i] * qf.q_values[i * ns + j]);
    qf.q_avg[j] = sum.value() / total_weight;
    double worst = 0.0;
    for (std::size_t i = 0; i < nt; ++i)
      worst = std::max(worst,
                       std::abs(qf.q_values[i * ns + j] / qf.q_avg[j] - 1.0));
    qf.spread[j] = worst;
  }
  return qf;
}

GCurve g_curve_from(const QField& qf) {
  const std::size_t ns = qf.s_mesh.values.size();
  const double s_hi = qf.s_mesh.values.back();
  const double window_lo = s_hi / std::sqrt(10.0) * (1.0 - 1e-12);
  CompensatedSum acc;
  std::size_t count = 0;
  for (std::size_t j = 0; j < ns; ++j) {
    const double s = qf.s_mesh.values[j];
    if (s < window_lo) continue;
    if (!(qf.q_avg[j] > 0.0))
      throw std::runtime_error("g_curve_from: non-positive q_avg in fit window");
    acc.add(std::log(qf.q_avg[j] / s));
    ++count;
  }
  if (count < 10)
    throw std::runtime_error(
        "g_curve_from: fewer than 10 s-points in the top half-decade (" +
        std::to_string(count) + ")");
  const double alpha = std::exp(acc.value() / static_cast<double>(count));
  return GCurve(qf.gamma, qf.s_mesh, qf.q_avg, alpha);
}

}  // namespace superdiff
