#pragma once
#include <cmath>

namespace hypermux {

inline constexpr double kTwoPi = 6.283185307179586476925287;

// Node coordinate on the polar Poincare disk: radial coordinate r in
// [0, R] and angle theta kept normalized to [0, 2*pi).
struct PolarPoint {
  double r = 0.0;
  double theta = 0.0;
};

// Generative / geometric parameters of the hyperbolic disk. R is the disk
// radius, always derived as R = 2*ln(n) + C (natural log).
struct DiskParams {
  int n = 0;
  double alpha = 0.75;  // radial density exponent, > 1/2
  double C = 0.0;       // radius offset
  double T = 0.3;       // temperature, in (0, 1)
  double R = 0.0;

  DiskParams() = default;
  DiskParams(int n_, double alpha_, double C_, double T_)
      : n(n_), alpha(alpha_), C(C_), T(T_), R(2.0 * std::log(static_cast<double>(n_)) + C_) {}

  // Power-law exponent of the generated degree distribution.
  double beta() const { return 2.0 * alpha + 1.0; }
};

// Maps any angle into [0, 2*pi).
inline double normalize_angle(double theta) {
  double t = theta - kTwoPi * std::floor(theta / kTwoPi);
  if (t >= kTwoPi) t = 0.0;  // rounding at the seam
  if (t < 0.0) t = 0.0;
  return t;
}

// Hyperbolic law of cosines with the arcosh argument clamped to >= 1
// against round-off at near-coincident points.
double hyperbolic_distance(const PolarPoint& u, const PolarPoint& v);

// Hot-loop variant with per-node cosh/sinh precomputed.
inline double hyperbolic_distance_cs(double cosh_ru, double sinh_ru, double cosh_rv,
                                     double sinh_rv, double dtheta) {
  double arg = cosh_ru * cosh_rv - sinh_ru * sinh_rv * std::cos(dtheta);
  if (arg < 1.0) arg = 1.0;
  return std::acosh(arg);
}

// Fermi-Dirac connection probability 1 / (1 + exp((d - R) / (2T))).
// Saturates cleanly to 0 or 1 for large |d - R| (no NaN).
double connection_probability(double d, const DiskParams& params);

struct DistancePartials {
  double dr = 0.0;      // dd/dr_u
  double dtheta = 0.0;  // dd/dtheta_u
};

// Closed-form partials of the distance with respect to u's coordinates.
// The coincident-point case (D <= 1) returns the (0, 0) subgradient.
DistancePartials distance_partials(const PolarPoint& u, const PolarPoint& v);

struct MetricDiag {
  double radial = 1.0;
  double angular = 0.0;  // 1 / sinh^2(r)
};

// Diagonal of the inverse metric tensor used by the RSGD rescale.
// Throws RadialSingularity for r < 1e-9.
MetricDiag metric_tensor_inverse_diag(const PolarPoint& p);

}  // namespace hypermux
