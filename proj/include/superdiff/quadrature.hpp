#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "superdiff/numerics.hpp"

namespace superdiff {

struct QuadratureConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-300;
  int max_cells = 100000;
  int max_panel_depth = 60;

  void validate() const {
    if (!(rel_tol > 0.0 && rel_tol < 1.0))
      throw std::invalid_argument("QuadratureConfig: rel_tol out of (0,1)");
    if (!(abs_tol > 0.0 && abs_tol < 1.0))
      throw std::invalid_argument("QuadratureConfig: abs_tol out of (0,1)");
    if (max_cells < 8)
      throw std::invalid_argument("QuadratureConfig: max_cells must be >= 8");
    if (max_panel_depth < 1)
      throw std::invalid_argument("QuadratureConfig: max_panel_depth < 1");
  }
};

enum class OscKind { Sine, Cosine };

struct Oscillator {
  OscKind kind = OscKind::Sine;
  double frequency = 1.0;

  double operator()(double x) const {
    return kind == OscKind::Sine ? std::sin(frequency * x)
                                 : std::cos(frequency * x);
  }
  // k-th positive zero, k = 0, 1, ... (cell boundaries).
  double zero(int k) const {
    const double pi = 3.14159265358979323846;
    return kind == OscKind::Sine ? (k + 1) * pi / frequency
                                 : (k + 0.5) * pi / frequency;
  }
};

// Thrown when a panel or cell budget runs out before the error target is met.
// Carries the best estimate so far and its error bound.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double best, double bound)
      : std::runtime_error(what), best_estimate(best), error_bound(bound) {}
  double best_estimate;
  double error_bound;
};

struct OscillatoryResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int cells_used = 0;
  // Per-cell integrals, kept for sign-alternation diagnostics.
  std::vector<double> cell_values;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1].
inline constexpr double kGK15Nodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0};
inline constexpr double kGK15Weights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
inline constexpr double kG7Weights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <class F>
inline void gk15_panel(const F& f, double a, double b, double& value,
                       double& err) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double resk = fc * kGK15Weights[7];
  double resg = fc * kG7Weights[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = h * kGK15Nodes[i];
    const double fv = f(c - dx) + f(c + dx);
    resk += fv * kGK15Weights[i];
    if (i % 2 == 1) resg += fv * kG7Weights[i / 2];
  }
  value = resk * h;
  err = std::abs((resk - resg) * h);
}

struct AdaptiveInterval {
  double a, b, value, err;
  int depth;
  bool operator<(const AdaptiveInterval& o) const { return err < o.err; }
};

// Globally adaptive bisection over an initial partition. Stops when the
// summed error estimate meets max(abs_tol, rel_tol * |integral|).
template <class F>
inline double adaptive_integrate(const F& f,
                                 const std::vector<double>& breakpoints,
                                 double rel_tol, double abs_tol, int max_depth,
                                 double* err_out = nullptr) {
  std::priority_queue<AdaptiveInterval> heap;
  double total = 0.0, total_err = 0.0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    AdaptiveInterval iv{breakpoints[i], breakpoints[i + 1], 0.0, 0.0, 0};
    gk15_panel(f, iv.a, iv.b, iv.value, iv.err);
    total += iv.value;
    total_err += iv.err;
    heap.push(iv);
  }
  const std::size_t panel_cap = 40000;
  while (total_err > std::max(abs_tol, rel_tol * std::abs(total))) {
    if (heap.size() >= panel_cap)
      throw QuadratureError("adaptive_integrate: panel budget exhausted",
                            total, total_err);
    AdaptiveInterval worst = heap.top();
    if (worst.depth >= max_depth)
      throw QuadratureError(
          "adaptive_integrate: panel depth " + std::to_string(max_depth) +
              " exhausted without convergence (err " +
              std::to_string(total_err) + ")",
          total, total_err);
    heap.pop();
    total -= worst.value;
    total_err -= worst.err;
    const double mid = 0.5 * (worst.a + worst.b);
    for (int half = 0; half < 2; ++half) {
      AdaptiveInterval iv{half == 0 ? worst.a : mid, half == 0 ? mid : worst.b,
                          0.0, 0.0, worst.depth + 1};
      gk15_panel(f, iv.a, iv.b, iv.value, iv.err);
      total += iv.value;
      total_err += iv.err;
      heap.push(iv);
    }
  }
  if (err_out) *err_out = total_err;
  return total;
}

// Geometric pre-split of [a, b] when the interval spans many scales with its
// left edge near zero; lets the adaptive pass resolve structure at any
// magnitude without deep blind bisection.
inline std::vector<double> scale_breakpoints(double a, double b) {
  std::vector<double> pts;
  pts.push_back(a);
  if (a < 1e-3 * (b - a)) {
    for (int k = 18; k >= 1; --k) {
      const double x = b * std::pow(10.0, -k);
      if (x > a && x < b) pts.push_back(x);
    }
  }
  pts.push_back(b);
  return pts;
}

// Wynn epsilon algorithm over a sequence of partial sums.
class EpsilonAccelerator {
 public:
  double push(double s) {
    const std::size_t n = table_.size();
    table_.push_back(s);
    double aux1 = 0.0;
    for (std::size_t j = n; j >= 1; --j) {
      const double aux2 = aux1;
      aux1 = table_[j - 1];
      const double diff = table_[j] - aux1;
      if (std::abs(diff) < 1e-300 || !std::isfinite(diff))
        table_[j - 1] = std::numeric_limits<double>::max();
      else
        table_[j - 1] = aux2 + 1.0 / diff;
    }
    const double cand = table_[n % 2];
    if (std::isfinite(cand) &&
        std::abs(cand) < std::numeric_limits<double>::max())
      best_ = cand;
    else
      best_ = s;
    return best_;
  }
  double best() const { return best_; }

 private:
  std::vector<double> table_;
  double best_ = 0.0;
};

}  // namespace detail

// Integral of envelope(x) * osc(freq * x) over [a, b]. The optional
// abs_floor lets callers relax the absolute target for cells that are
// negligible against an accumulated sum.
template <class F>
inline double integrate_cell(const F& envelope, Oscillator osc, double a,
                             double b, const QuadratureConfig& cfg,
                             double abs_floor = 0.0) {
  cfg.validate();
  if (!(osc.frequency > 0.0))
    throw std::invalid_argument("integrate_cell: frequency must be positive");
  if (!(a >= 0.0 && b > a))
    throw std::invalid_argument("integrate_cell: need 0 <= a < b");
  auto f = [&](double x) { return envelope(x) * osc(x); };
  return detail::adaptive_integrate(f, detail::scale_breakpoints(a, b),
                                    cfg.rel_tol,
                                    std::max(cfg.abs_tol, abs_floor),
                                    cfg.max_panel_depth);
}

// Integral of envelope(x) * osc(freq * x) over [0, inf). Cell decomposition
// at the oscillator zeros; the sequence of partial cell sums is accelerated
// with the epsilon algorithm, so algebraically decaying envelopes converge
// long before the raw tail does.
template <class F>
inline OscillatoryResult integrate_semi_infinite_oscillatory(
    const F& envelope, Oscillator osc, const QuadratureConfig& cfg) {
  cfg.validate();
  if (!(osc.frequency > 0.0))
    throw std::invalid_argument(
        "integrate_semi_infinite_oscillatory: frequency must be positive");

  detail::EpsilonAccelerator accel;
  CompensatedSum partial;
  OscillatoryResult res;
  double prev_best = 0.0;
  double max_cell = 0.0;
  int stable = 0;
  double z_prev = 0.0;

  for (int k = 0; k < cfg.max_cells; ++k) {
    const double z_next = osc.zero(k);
    const double floor_tol =
        0.05 * std::max(cfg.abs_tol,
                        cfg.rel_tol * std::max(std::abs(partial.value()),
                                               max_cell));
    const double cell =
        integrate_cell(envelope, osc, z_prev, z_next, cfg, floor_tol);
    z_prev = z_next;
    res.cell_values.push_back(cell);
    max_cell = std::max(max_cell, std::abs(cell));
    partial.add(cell);
    const double best = accel.push(partial.value());
    res.cells_used = k + 1;

    const double thresh =
        std::max(cfg.abs_tol, cfg.rel_tol * std::abs(best));
    const double diff = std::abs(best - prev_best);
    if (k >= 5 && diff <= thresh)
      ++stable;
    else
      stable = 0;
    prev_best = best;
    if (stable >= 2) {
      res.value = best;
      res.error_estimate = diff + thresh;
      return res;
    }
  }

  const std::size_t n = res.cell_values.size();
  std::string tail;
  {
    CompensatedSum s;
    std::vector<double> sums;
    for (double c : res.cell_values) {
      s.add(c);
      sums.push_back(s.value());
    }
    for (std::size_t i = (n >= 3 ? n - 3 : 0); i < n; ++i)
      tail += " S[" + std::to_string(i) + "]=" + std::to_string(sums[i]);
  }
  throw QuadratureError(
      "integrate_semi_infinite_oscillatory: " + std::to_string(cfg.max_cells) +
          " cells without convergence; last partial sums:" + tail,
      accel.best(), std::abs(accel.best() - prev_best));
}

}  // namespace superdiff
