#include "superdiff/automodel.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "superdiff/meshes.hpp"

namespace superdiff {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double front_position(const KernelParams& params, double t) {
  if (!(t >= 0.0))
    throw std::invalid_argument("front_position: t must be >= 0");
  return std::expm1(std::log1p(t) / params.gamma);
}

double similarity_s(const KernelParams& params, double rho, double t) {
  if (!(rho > 0.0))
    throw std::invalid_argument("similarity_s: rho must be positive");
  if (!(t >= 0.0)) throw std::invalid_argument("similarity_s: t must be >= 0");
  return front_position(params, t) / rho;
}

double similarity_rho(const KernelParams& params, double t, double s) {
  if (!(s > 0.0))
    throw std::invalid_argument("similarity_rho: s must be positive");
  if (!(t >= 0.0))
    throw std::invalid_argument("similarity_rho: t must be >= 0");
  return front_position(params, t) / s;
}

double similarity_t(const KernelParams& params, double rho, double s) {
  if (!(rho > 0.0 && s > 0.0))
    throw std::invalid_argument("similarity_t: rho and s must be positive");
  return std::expm1(params.gamma * std::log1p(s * rho));
}

double alpha_coefficient(const KernelParams& params, double levy) {
  const double g = params.gamma;
  if (!(levy > 0.0))
    throw std::invalid_argument("alpha_coefficient: levy constant <= 0");
  const double bracket = 0.5 * g * kPi * std::pow(levy, 1.0 / g);
  return std::pow(2.0, 1.0 / g) * std::pow(bracket, 1.0 / (g + 1.0));
}

double alpha_coefficient(const KernelParams& params) {
  return alpha_coefficient(params, levy_constant(params));
}

GCurve::GCurve(double gamma, LogMesh s_mesh, std::vector<double> g_values,
               double alpha)
    : gamma_(gamma),
      s_mesh_(std::move(s_mesh)),
      g_values_(std::move(g_values)),
      alpha_(alpha) {
  if (!(gamma_ > 0.0 && gamma_ < 2.0))
    throw std::invalid_argument("GCurve: gamma out of (0, 2)");
  if (g_values_.size() != s_mesh_.values.size() || g_values_.size() < 2)
    throw std::invalid_argument("GCurve: value count does not match s-mesh");
  if (!(alpha_ > 0.0)) throw std::invalid_argument("GCurve: alpha must be > 0");
  std::vector<double> ls(g_values_.size()), lg(g_values_.size());
  for (std::size_t i = 0; i < g_values_.size(); ++i) {
    if (!(g_values_[i] > 0.0))
      throw std::invalid_argument("GCurve: g must be positive everywhere");
    ls[i] = std::log(s_mesh_.values[i]);
    lg[i] = std::log(g_values_[i]);
  }
  loglog_ = MonotoneCubic(std::move(ls), std::move(lg));
}

double GCurve::g(double s) const {
  if (!(s > 0.0)) throw std::invalid_argument("GCurve::g: s must be positive");
  // The extensions are discontinuous at the mesh ends, so points within
  // rounding distance of an end (e.g. s recomputed as rho_fr/rho) must land
  // on the tabulated side, not on the extension.
  const double lo = s_mesh_.values.front();
  const double hi = s_mesh_.values.back();
  if (s < lo * (1.0 - 4e-16)) return 1.0;
  if (s > hi * (1.0 + 4e-16)) return alpha_ * s;
  const double ls = std::min(std::max(std::log(s), std::log(lo)), std::log(hi));
  return std::exp(loglog_(ls));
}

void GCurve::save(std::ostream& os) const {
  os << "# gcurve gamma=" << gamma_ << " alpha=";
  os.precision(17);
  os << alpha_ << " points=" << g_values_.size()
     << " s_lo=" << s_mesh_.lo << " s_hi=" << s_mesh_.hi
     << " points_per_decade=" << s_mesh_.points_per_decade << "\n";
  for (std::size_t i = 0; i < g_values_.size(); ++i)
    os << s_mesh_.values[i] << " " << g_values_[i] << "\n";
}

GCurve GCurve::load(std::istream& is) {
  std::string header;
  if (!std::getline(is, header) || header.rfind("# gcurve", 0) != 0)
    throw std::runtime_error("GCurve::load: missing '# gcurve' header");
  auto field = [&header](const std::string& key) {
    const auto pos = header.find(key + "=");
    if (pos == std::string::npos)
      throw std::runtime_error("GCurve::load: header lacks " + key);
    return std::stod(header.substr(pos + key.size() + 1));
  };
  const double gamma = field("gamma");
  const double alpha = field("alpha");
  const int points = static_cast<int>(field("points"));
  LogMesh mesh = log_mesh(field("s_lo"), field("s_hi"),
                          static_cast<int>(field("points_per_decade")));
  if (static_cast<int>(mesh.values.size()) != points)
    throw std::runtime_error("GCurve::load: point count mismatch");
  std::vector<double> g(points);
  for (int i = 0; i < points; ++i) {
    double s = 0.0;
    if (!(is >> s >> g[i]))
      throw std::runtime_error("GCurve::load: truncated table");
  }
  return GCurve(gamma, std::move(mesh), std::move(g), alpha);
}

double automodel_density(const GCurve& curve, double x, double t) {
  if (!(t > 0.0))
    throw std::invalid_argument("automodel_density: t must be positive");
  const KernelParams params(curve.gamma());
  const double rho = std::abs(x);
  const double rho_fr = front_position(params, t);
  double arg;  // rho * g(rho_fr / rho), continued to the axis
  if (rho == 0.0 ||
      rho_fr / rho > curve.s_mesh().values.back() * (1.0 + 4e-16))
    arg = curve.alpha() * rho_fr;
  else
    arg = rho * curve.g(rho_fr / rho);
  const double g = curve.gamma();
  // pow keeps its relative error at the ulp level for any exponent, so the
  // q_w round trip stays tight even when (gamma+1) log(1+arg) is large; an
  // exp/log chain would amplify rounding by that factor.
  return 0.5 * g * t * std::pow(1.0 + arg, -(g + 1.0));
}

}  // namespace superdiff
