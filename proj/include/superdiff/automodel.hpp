#pragma once

#include <iosfwd>
#include <vector>

#include "superdiff/kernel.hpp"
#include "superdiff/meshes.hpp"
#include "superdiff/numerics.hpp"

namespace superdiff {

// Propagation front rho_fr(t) = (t + 1)^(1/gamma) - 1; the s = 1 contour.
double front_position(const KernelParams& params, double t);

// Similarity maps around s = ((t+1)^(1/gamma) - 1) / rho.
double similarity_s(const KernelParams& params, double rho, double t);
double similarity_rho(const KernelParams& params, double t, double s);
double similarity_t(const KernelParams& params, double rho, double s);

// alpha(gamma) = 2^(1/gamma) [gamma pi/2 I(gamma)^(1/gamma)]^(1/(gamma+1)).
double alpha_coefficient(const KernelParams& params, double levy);
double alpha_coefficient(const KernelParams& params);

// Reconstructed scaling function g(s): tabulated on an s-mesh, extended by
// g = 1 below it and g = alpha s above it, interpolated monotone-cubically
// in log-log space between nodes.
class GCurve {
 public:
  GCurve(double gamma, LogMesh s_mesh, std::vector<double> g_values,
         double alpha);

  double g(double s) const;

  double gamma() const { return gamma_; }
  double alpha() const { return alpha_; }
  const LogMesh& s_mesh() const { return s_mesh_; }
  const std::vector<double>& g_values() const { return g_values_; }

  void save(std::ostream& os) const;
  static GCurve load(std::istream& is);

 private:
  double gamma_;
  LogMesh s_mesh_;
  std::vector<double> g_values_;
  double alpha_;
  MonotoneCubic loglog_;
};

// f_auto(x, t) = t gamma / 2 [1 + rho g(rho_fr/rho)]^(gamma+1). On the axis
// rho g(s) is evaluated through its limit alpha rho_fr.
double automodel_density(const GCurve& curve, double x, double t);

}  // namespace superdiff
