#pragma once

#include <iosfwd>
#include <vector>

#include "superdiff/numerics.hpp"
#include "superdiff/quadrature.hpp"

namespace superdiff {

// Step-length PDF parameters. tau is fixed at 1 (time is measured in units
// of the waiting time).
struct KernelParams {
  double gamma;
  double tau = 1.0;

  explicit KernelParams(double g);
};

inline QuadratureConfig inner_quadrature_default() {
  QuadratureConfig cfg;
  cfg.rel_tol = 1e-10;
  return cfg;
}

inline QuadratureConfig outer_quadrature_default() {
  QuadratureConfig cfg;
  cfg.rel_tol = 1e-8;
  return cfg;
}

// W(rho) = gamma / (2 (1 + rho)^(gamma+1)).
double step_pdf(const KernelParams& params, double rho);

// G(p) = p * integral_0^inf sin(p x) / (1 + x)^gamma dx. Equals
// 1 - \hat W(p) with \hat W the Fourier transform of the step PDF, so
// G(0) = 0 and G -> 1 as p -> inf.
double characteristic_exponent(
    const KernelParams& params, double p,
    const QuadratureConfig& cfg = inner_quadrature_default());

// I(gamma) = lim_{p -> 0} G(p) / p^gamma, by Richardson extrapolation over a
// geometric p sequence. Relative accuracy 1e-6.
double levy_constant(const KernelParams& params,
                     const QuadratureConfig& cfg = inner_quadrature_default());

// Tabulated G(p) on a log mesh with monotone-cubic interpolation of
// log G vs log p. Below the table the small-p law I * p^gamma is used,
// above it the large-p expansion 1 - gamma (gamma+1) / p^2. Interpolation
// accuracy is verified at build time against direct evaluation.
class GTable {
 public:
  GTable(const KernelParams& params, double p_lo, double p_hi,
         int points_per_decade, const QuadratureConfig& cfg);

  // Range sized so every e^(-t G) evaluation with t <= t_max stays inside
  // the verified part of the table.
  static GTable for_time_range(
      const KernelParams& params, double t_max,
      const QuadratureConfig& cfg = inner_quadrature_default());

  double operator()(double p) const;

  double gamma() const { return gamma_; }
  double levy() const { return levy_; }
  double p_lo() const { return p_lo_; }
  double p_hi() const { return p_hi_; }
  int points_per_decade() const { return points_per_decade_; }

  // Two-column dump (p, G(p)); header carries the cache key.
  void save(std::ostream& os) const;

 private:
  double gamma_;
  double levy_;
  double p_lo_, p_hi_;
  int points_per_decade_;
  double rel_tol_;
  std::vector<double> log_p_, log_g_;
  MonotoneCubic interp_;
};

}  // namespace superdiff
