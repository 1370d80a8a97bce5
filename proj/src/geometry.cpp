#include "hypermux/geometry.hpp"

#include <cmath>

#include "hypermux/errors.hpp"

namespace hypermux {

double hyperbolic_distance(const PolarPoint& u, const PolarPoint& v) {
  return hyperbolic_distance_cs(std::cosh(u.r), std::sinh(u.r), std::cosh(v.r),
                                std::sinh(v.r), u.theta - v.theta);
}

double connection_probability(double d, const DiskParams& params) {
  const double z = (d - params.R) / (2.0 * params.T);
  // exp overflows to +inf for z > ~709; 1/(1+inf) == 0, which is the limit.
  return 1.0 / (1.0 + std::exp(z));
}

DistancePartials distance_partials(const PolarPoint& u, const PolarPoint& v) {
  const double cru = std::cosh(u.r), sru = std::sinh(u.r);
  const double crv = std::cosh(v.r), srv = std::sinh(v.r);
  const double dt = u.theta - v.theta;
  const double cdt = std::cos(dt);
  const double D = cru * crv - sru * srv * cdt;
  const double dd = D * D - 1.0;
  if (!(dd > 1e-30)) return {0.0, 0.0};  // coincident: declared subgradient
  const double denom = std::sqrt(dd);
  DistancePartials g;
  g.dr = (sru * crv - cru * srv * cdt) / denom;
  g.dtheta = (sru * srv * std::sin(dt)) / denom;
  return g;
}

MetricDiag metric_tensor_inverse_diag(const PolarPoint& p) {
  if (p.r < 1e-9)
    throw RadialSingularity("metric_tensor_inverse_diag: r below 1e-9, angular rescale diverges");
  const double sh = std::sinh(p.r);
  return {1.0, 1.0 / (sh * sh)};
}

}  // namespace hypermux
