#pragma once

#include <functional>
#include <vector>

#include "superdiff/kernel.hpp"
#include "superdiff/meshes.hpp"
#include "superdiff/quadrature.hpp"

namespace superdiff {

// Regular part of the Green's function on a (t, s) grid for one gamma. The
// full solution is e^(-t) delta(x) + the tabulated regular part; only
// rho = |x| >= 0 is stored (the density is even in x).
struct ExactField {
  double gamma = 0.0;
  LogMesh t_mesh;
  LogMesh s_mesh;
  // Row-major: values[i * s_mesh.values.size() + j] at (t_i, s_j).
  std::vector<double> values;

  double at(std::size_t i, std::size_t j) const {
    return values[i * s_mesh.values.size() + j];
  }
  static double delta_weight(double t) { return std::exp(-t); }
};

using CharacteristicFn = std::function<double(double)>;

// Regular part f_reg(x, t) = (1/pi) int_0^inf cos(p|x|)
// (e^(-t G(p)) - e^(-t)) dp. The delta part is subtracted inside the
// integrand; the raw integrand of the unsubtracted transform is not
// absolutely integrable.
double green_regular(const KernelParams& params, double x, double t,
                     const QuadratureConfig& cfg, const CharacteristicFn& G);

// Direct-evaluation variant (oracle path, no table).
double green_regular(const KernelParams& params, double x, double t,
                     const QuadratureConfig& cfg = outer_quadrature_default());

// Table-backed variant (field-build path).
double green_regular(const KernelParams& params, double x, double t,
                     const QuadratureConfig& cfg, const GTable& table);

// Multiple-scattering series e^(-t) sum_{n=1..orders} t^n/n! W^(*n)(x) with
// the convolutions done by direct fine-mesh integration. Small-t oracle,
// orders in {1, 2, 3}, t <= 0.5.
double neumann_reference(const KernelParams& params, double x, double t,
                         int orders);

// n-fold self-convolution of the step PDF at x (n = 1, 2, 3).
double step_pdf_convolution(const KernelParams& params, double x, int n);

// 2 int_0^inf f_reg drho + e^(-t); equals 1 when excitation is conserved.
double total_excitation(const KernelParams& params, double t,
                        const QuadratureConfig& cfg, const GTable& table);

ExactField exact_field(const KernelParams& params, const LogMesh& t_mesh,
                       const LogMesh& s_mesh, const QuadratureConfig& cfg,
                       const GTable& table, int threads = 1);

}  // namespace superdiff
