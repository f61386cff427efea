#include "superdiff/exact.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "superdiff/automodel.hpp"

namespace superdiff {

namespace {

constexpr double kPi = 3.14159265358979323846;
// e^(-t G) below e^(-46) is under 1e-20; past that point the subtracted
// integrand is pure noise relative to the regular part.
constexpr double kExponentCut = 46.0;

// Smallest p with t G(p) >= target (G is monotone). Returns +inf when the
// target is out of reach (t < target, since G <= 1).
double exponent_crossing(const CharacteristicFn& G, double t, double target) {
  if (!(t > target)) return std::numeric_limits<double>::infinity();
  double llo = std::log(1e-300), lhi = std::log(1e8);
  if (t * G(std::exp(lhi)) < target)
    return std::numeric_limits<double>::infinity();
  for (int i = 0; i < 80; ++i) {
    const double lm = 0.5 * (llo + lhi);
    (t * G(std::exp(lm)) >= target ? lhi : llo) = lm;
  }
  return std::exp(lhi);
}

double green_regular_impl(const KernelParams& params, double x, double t,
                          const QuadratureConfig& cfg,
                          const CharacteristicFn& G) {
  if (!(t > 0.0))
    throw std::invalid_argument("green_regular: t must be positive");
  const double rho = std::abs(x);
  const double g = params.gamma;
  const double e_t = std::exp(-t);
  auto envelope = [&](double p) { return std::exp(-t * G(p)) - e_t; };

  const double p_cut = exponent_crossing(G, t, kExponentCut);

  try {
    if (rho > 0.0 &&
        (!std::isfinite(p_cut) || rho * p_cut > 8.0 * kPi)) {
      // Many oscillations across the support: zero-cell decomposition with
      // series acceleration of the alternating cell sums.
      const auto r = integrate_semi_infinite_oscillatory(
          envelope, Oscillator{OscKind::Cosine, rho}, cfg);
      return r.value / kPi;
    }

    if (rho == 0.0) {
      // Non-oscillatory: doubling panels plus the analytic p^(-2) tail of
      // the subtracted integrand, e^(-t) t gamma (gamma+1) / p^2.
      CompensatedSum sum;
      double a = 0.0, b = 1.0;
      double tail = 0.0;
      for (int k = 0; k < 1200; ++k) {
        const double panel = detail::adaptive_integrate(
            envelope, detail::scale_breakpoints(a, b), cfg.rel_tol,
            std::max(cfg.abs_tol,
                     0.02 * cfg.rel_tol * std::abs(sum.value())),
            cfg.max_panel_depth);
        sum.add(panel);
        tail = e_t * t * g * (g + 1.0) / b;
        const double tol =
            std::max(cfg.abs_tol, cfg.rel_tol * std::abs(sum.value()));
        if (b >= 64.0 && (!std::isfinite(p_cut) || b > p_cut) &&
            tail <= 0.5 * tol && std::abs(panel) <= 0.5 * tol)
          return (sum.value() + tail) / kPi;
        a = b;
        b *= 2.0;
      }
      throw QuadratureError("green_regular: panel doubling did not converge",
                            (sum.value() + tail) / kPi, tail / kPi);
    }

    // Few oscillations inside the decayed support: one finite adaptive pass
    // up to the e^(-60) crossing; the remainder is below noise.
    double p_top = exponent_crossing(G, t, 60.0);
    if (!std::isfinite(p_top)) {
      // Only possible for t in (46, 60]: t G never reaches 60. Past the
      // e^(-46) crossing the envelope is the algebraic e^(-t) tail, under
      // 1e-18, so any generous finite cap works.
      p_top = std::max(64.0, 4.0 * p_cut);
    }
    auto f = [&](double p) { return envelope(p) * std::cos(rho * p); };
    return detail::adaptive_integrate(
               f, detail::scale_breakpoints(0.0, p_top), cfg.rel_tol,
               cfg.abs_tol, cfg.max_panel_depth) /
           kPi;
  } catch (const QuadratureError& e) {
    throw QuadratureError("green_regular(x=" + std::to_string(x) +
                              ", t=" + std::to_string(t) +
                              ", gamma=" + std::to_string(g) + "): " + e.what(),
                          e.best_estimate, e.error_bound);
  }
}

// Integral of h over the whole line, decaying algebraically at both ends.
// Finite pieces between breakpoints, tails mapped to [0, 1).
template <class H>
double line_integral(const H& h, std::vector<double> breaks, double rel_tol) {
  std::sort(breaks.begin(), breaks.end());
  const double lo = breaks.front(), hi = breaks.back();
  CompensatedSum sum;
  if (breaks.size() > 1)
    sum.add(detail::adaptive_integrate(h, breaks, rel_tol, 1e-300, 60));
  auto upper = [&](double w) {
    const double d = 1.0 - w;
    return h(hi + w / d) / (d * d);
  };
  auto lower = [&](double w) {
    const double d = 1.0 - w;
    return h(lo - w / d) / (d * d);
  };
  sum.add(detail::adaptive_integrate(upper, {0.0, 1.0}, rel_tol, 1e-300, 60));
  sum.add(detail::adaptive_integrate(lower, {0.0, 1.0}, rel_tol, 1e-300, 60));
  return sum.value();
}

}  // namespace

double green_regular(const KernelParams& params, double x, double t,
                     const QuadratureConfig& cfg, const CharacteristicFn& G) {
  return green_regular_impl(params, x, t, cfg, G);
}

double green_regular(const KernelParams& params, double x, double t,
                     const QuadratureConfig& cfg) {
  const QuadratureConfig inner = inner_quadrature_default();
  CharacteristicFn G = [params, inner](double p) {
    return characteristic_exponent(params, p, inner);
  };
  return green_regular_impl(params, x, t, cfg, G);
}

double green_regular(const KernelParams& params, double x, double t,
                     const QuadratureConfig& cfg, const GTable& table) {
  CharacteristicFn G = [&table](double p) { return table(p); };
  return green_regular_impl(params, x, t, cfg, G);
}

double step_pdf_convolution(const KernelParams& params, double x, int n) {
  if (n < 1 || n > 3)
    throw std::invalid_argument("step_pdf_convolution: n must be 1, 2 or 3");
  const double rho = std::abs(x);
  if (n == 1) return step_pdf(params, rho);
  auto w = [&](double u) { return step_pdf(params, std::abs(u)); };
  if (n == 2) {
    auto h = [&](double u) { return w(u) * w(rho - u); };
    return line_integral(h, {0.0, 0.5 * rho, rho}, 1e-9);
  }
  auto h = [&](double u) {
    return step_pdf_convolution(params, u, 2) * w(rho - u);
  };
  return line_integral(h, {0.0, 0.5 * rho, rho}, 1e-6);
}

double neumann_reference(const KernelParams& params, double x, double t,
                         int orders) {
  if (!(t > 0.0 && t <= 0.5))
    throw std::invalid_argument("neumann_reference: t must lie in (0, 0.5]");
  if (orders < 1 || orders > 3)
    throw std::invalid_argument("neumann_reference: orders must be 1..3");
  double term = t;  // t^n / n!
  CompensatedSum sum;
  for (int n = 1; n <= orders; ++n) {
    sum.add(term * step_pdf_convolution(params, x, n));
    term *= t / (n + 1);
  }
  return std::exp(-t) * sum.value();
}

double total_excitation(const KernelParams& params, double t,
                        const QuadratureConfig& cfg, const GTable& table) {
  const double rho_fr = front_position(params, t);
  auto f = [&](double rho) { return green_regular(params, rho, t, cfg, table); };

  CompensatedSum integral;
  // Plateau below the smallest resolved scale, then decade panels.
  double a = 0.0, b = rho_fr * 1e-8;
  const double panel_tol = 1e-9;
  for (int k = 0; k < 300; ++k) {
    integral.add(detail::adaptive_integrate(f, {a, b}, 1e-7, panel_tol,
                                            cfg.max_panel_depth));
    a = b;
    b *= 10.0;
    if (a < rho_fr * 100.0) continue;
    // Far-front tail: f approaches t W(rho); bound the residual by the
    // measured ratio at the truncation radius.
    const double ratio = f(a) / (t * step_pdf(params, a));
    const double mass = 0.5 * t * std::exp(-params.gamma * std::log1p(a));
    if (mass * std::abs(ratio - 1.0) < 2e-7 || mass < 1e-9) {
      integral.add(mass * 0.5 * (1.0 + ratio));
      return 2.0 * integral.value() + std::exp(-t);
    }
  }
  throw std::runtime_error(
      "total_excitation: tail did not reach the single-flight regime (t=" +
      std::to_string(t) + ", gamma=" + std::to_string(params.gamma) + ")");
}

ExactField exact_field(const KernelParams& params, const LogMesh& t_mesh,
                       const LogMesh& s_mesh, const QuadratureConfig& cfg,
                       const GTable& table, int threads) {
  if (t_mesh.values.empty() || s_mesh.values.empty())
    throw std::invalid_argument("exact_field: empty mesh");
  if (!(t_mesh.lo >= 1.0))
    throw std::invalid_argument(
        "exact_field: t_mesh.lo must be >= 1 so the delta part is minor");

  ExactField field;
  field.gamma = params.gamma;
  field.t_mesh = t_mesh;
  field.s_mesh = s_mesh;
  const std::size_t nt = t_mesh.values.size();
  const std::size_t ns = s_mesh.values.size();
  field.values.assign(nt * ns, 0.0);

  std::atomic<std::size_t> next_row{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;

  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next_row.fetch_add(1);
      if (i >= nt) return;
      {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (first_error) return;
      }
      const double t = t_mesh.values[i];
      try {
        for (std::size_t j = 0; j < ns; ++j) {
          const double rho = similarity_rho(params, t, s_mesh.values[j]);
          field.values[i * ns + j] =
              green_regular(params, rho, t, cfg, table);
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  const int nthreads = std::max(1, threads);
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int k = 0; k < nthreads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  return field;
}

}  // namespace superdiff
