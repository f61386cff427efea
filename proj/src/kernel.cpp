#include "superdiff/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace superdiff {

namespace {

constexpr double kPi = 3.14159265358979323846;

}  // namespace

KernelParams::KernelParams(double g) : gamma(g) {
  if (!(g > 0.0 && g < 2.0))
    throw std::invalid_argument("KernelParams: gamma must lie in (0, 2), got " +
                                std::to_string(g));
}

double step_pdf(const KernelParams& params, double rho) {
  if (!(rho >= 0.0))
    throw std::invalid_argument("step_pdf: rho must be non-negative");
  return 0.5 * params.gamma *
         std::exp(-(params.gamma + 1.0) * std::log1p(rho));
}

double characteristic_exponent(const KernelParams& params, double p,
                               const QuadratureConfig& cfg) {
  if (!(p >= 0.0))
    throw std::invalid_argument(
        "characteristic_exponent: p must be non-negative");
  if (p == 0.0) return 0.0;
  const double g = params.gamma;
  if (p <= 1.0) {
    auto envelope = [g](double x) {
      return std::exp(-g * std::log1p(x));
    };
    const auto r = integrate_semi_infinite_oscillatory(
        envelope, Oscillator{OscKind::Sine, p}, cfg);
    return p * r.value;
  }
  // Large p: G = 1 - gamma * int_0^inf cos(px) (1+x)^(-gamma-1) dx is far
  // better conditioned than p * S(p).
  auto envelope = [g](double x) {
    return std::exp(-(g + 1.0) * std::log1p(x));
  };
  const auto r = integrate_semi_infinite_oscillatory(
      envelope, Oscillator{OscKind::Cosine, p}, cfg);
  return 1.0 - g * r.value;
}

double levy_constant(const KernelParams& params, const QuadratureConfig& cfg) {
  const double g = params.gamma;
  // G(p) = I p^gamma (1 + O(p^2)) + even integer-power series from p^2 on,
  // so G(p)/p^gamma - I runs through the exponents 2-gamma, 2, 4-gamma, 4...
  // (with log factors at gamma = 1, which repeated elimination also damps).
  // Richardson over p_k = p0 / 2^k with that exponent ladder.
  const int kMax = 12;
  double q[kMax];
  {
    std::vector<double> exps;
    for (int j = 1; exps.size() < static_cast<std::size_t>(kMax); ++j) {
      exps.push_back(2.0 * j - g);
      exps.push_back(2.0 * j);
    }
    std::sort(exps.begin(), exps.end());
    for (int m = 0; m < kMax; ++m) q[m] = exps[m];
  }
  double table[kMax][kMax];
  double p = 1e-6;
  double prev_diag = 0.0;
  for (int k = 0; k < kMax; ++k, p *= 0.5) {
    table[k][0] =
        characteristic_exponent(params, p, cfg) / std::pow(p, g);
    for (int m = 1; m <= k; ++m) {
      const double w = std::pow(2.0, q[m - 1]);
      table[k][m] = (w * table[k][m - 1] - table[k - 1][m - 1]) / (w - 1.0);
    }
    if (k >= 2) {
      const double diag = table[k][k];
      if (std::abs(diag - prev_diag) <= 1e-6 * std::abs(diag)) return diag;
      prev_diag = diag;
    } else {
      prev_diag = table[k][k];
    }
  }
  std::string seq;
  for (int k = 0; k < kMax; ++k) seq += " " + std::to_string(table[k][0]);
  throw std::runtime_error(
      "levy_constant: Richardson extrapolation did not converge for gamma=" +
      std::to_string(g) + "; sampled G(p)/p^gamma:" + seq);
}

GTable::GTable(const KernelParams& params, double p_lo, double p_hi,
               int points_per_decade, const QuadratureConfig& cfg)
    : gamma_(params.gamma),
      levy_(levy_constant(params, cfg)),
      p_lo_(p_lo),
      p_hi_(p_hi),
      points_per_decade_(points_per_decade),
      rel_tol_(cfg.rel_tol) {
  if (!(p_lo > 0.0 && p_hi > p_lo))
    throw std::invalid_argument("GTable: need 0 < p_lo < p_hi");
  if (points_per_decade < 10)
    throw std::invalid_argument("GTable: points_per_decade too small");

  const double decades = std::log10(p_hi / p_lo);
  const int n = static_cast<int>(std::ceil(decades * points_per_decade)) + 1;
  const double dlog = std::log(p_hi / p_lo) / (n - 1);
  log_p_.resize(n);
  log_g_.resize(n);
  const double log_lo = std::log(p_lo);
  for (int i = 0; i < n; ++i) {
    log_p_[i] = log_lo + i * dlog;
    const double gi =
        characteristic_exponent(params, std::exp(log_p_[i]), cfg);
    if (!(gi > 0.0))
      throw std::runtime_error("GTable: non-positive G at p=" +
                               std::to_string(std::exp(log_p_[i])));
    log_g_[i] = std::log(gi);
  }
  interp_ = MonotoneCubic(log_p_, log_g_);

  // Verify the interpolant against direct evaluation on a deterministic
  // subset of interval midpoints.
  for (int i = 7; i + 1 < n; i += 53) {
    const double lp = 0.5 * (log_p_[i] + log_p_[i + 1]);
    const double direct =
        characteristic_exponent(params, std::exp(lp), cfg);
    const double interp = std::exp(interp_(lp));
    if (std::abs(interp - direct) > 1e-8 * std::abs(direct))
      throw std::runtime_error(
          "GTable: interpolation error above 1e-8 near p=" +
          std::to_string(std::exp(lp)) + " (gamma=" + std::to_string(gamma_) +
          "); increase points_per_decade");
  }
}

GTable GTable::for_time_range(const KernelParams& params, double t_max,
                              const QuadratureConfig& cfg) {
  const double I = levy_constant(params, cfg);
  // p_c solves t_max * I * p^gamma = 1; three decades of margin below it.
  const double p_c =
      std::pow(1.0 / (std::max(t_max, 1.0) * I), 1.0 / params.gamma);
  const double p_lo = std::min(1e-6, 1e-3 * p_c);
  return GTable(params, p_lo, 1e4, 400, cfg);
}

double GTable::operator()(double p) const {
  if (!(p >= 0.0)) throw std::invalid_argument("GTable: p must be >= 0");
  if (p == 0.0) return 0.0;
  if (p < p_lo_) return levy_ * std::pow(p, gamma_);
  if (p > p_hi_) return 1.0 - gamma_ * (gamma_ + 1.0) / (p * p);
  return std::exp(interp_(std::log(p)));
}

void GTable::save(std::ostream& os) const {
  os << "# gtable gamma=" << gamma_ << " p_lo=" << p_lo_ << " p_hi=" << p_hi_
     << " points_per_decade=" << points_per_decade_ << " rel_tol=" << rel_tol_
     << " levy=" << levy_ << "\n";
  os.precision(17);
  for (std::size_t i = 0; i < log_p_.size(); ++i)
    os << std::exp(log_p_[i]) << " " << std::exp(log_g_[i]) << "\n";
}

}  // namespace superdiff
