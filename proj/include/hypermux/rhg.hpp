#pragma once
#include <cstdint>
#include <vector>

#include "hypermux/geometry.hpp"
#include "hypermux/graph.hpp"
#include "hypermux/rng.hpp"

namespace hypermux {

// One draw of the random hyperbolic disk model, with the generating
// coordinates kept as ground truth.
struct RhgSample {
  DiskParams params;
  std::vector<PolarPoint> coords;
  UGraph graph;
  uint64_t seed = 0;
};

// Analytic radial CDF F(r) = (cosh(alpha r) - 1) / (cosh(alpha R) - 1).
double radius_cdf(const DiskParams& params, double r);

// Inverse-CDF transform of a uniform u in [0, 1).
double radius_icdf(const DiskParams& params, double u);

// One draw from p(r) = alpha sinh(alpha r) / (cosh(alpha R) - 1).
inline double sample_radius(const DiskParams& params, Rng& rng) {
  return radius_icdf(params, rng.next_double());
}

// Samples coordinates and links each pair independently with the
// Fermi-Dirac probability of its distance. The RNG stream order is part
// of the contract (bit-reproducibility): radii in node-index order, then
// angles in node-index order, then one uniform per pair in lexicographic
// order. Sequential by design.
RhgSample generate(const DiskParams& params, uint64_t seed);

// Edge resample conditioned on fixed coordinates (one Bernoulli per pair
// in lexicographic order). Correlated multiplex layers share coordinates
// and draw their edges independently through this.
UGraph sample_edges(const DiskParams& params, const std::vector<PolarPoint>& coords,
                    uint64_t seed);

// Empirical mass of the origin ball B_0(r) against the e^{-alpha (R - r)}
// estimate, from `sample_size` fresh radial draws.
struct BallMeasureCheck {
  double empirical = 0.0;
  double analytic = 0.0;
};
BallMeasureCheck ball_measure_check(const DiskParams& params, double r, int64_t sample_size,
                                    uint64_t seed);

// Fraction of trials in which every one of K equal-angle sectors contains
// at least one core node (r < R/2), next to the 1 - exp(-n^{1-alpha}/K)
// estimate. Trials run in parallel with per-trial seeds.
struct CoreSectorCheck {
  double empirical = 0.0;
  double lemma_estimate = 0.0;
  int trials = 0;
};
CoreSectorCheck core_sector_check(const DiskParams& params, int K, int trials, uint64_t seed);

// Probability that a sector-shaped region holds at least one node,
// against the Poisson point process estimate 1 - exp(-n mu(S)). The
// region is a sector of angular width dtheta truncated at radius r_max;
// mu uses the exact radial CDF.
struct PointProcessCheck {
  double empirical = 0.0;
  double analytic = 0.0;
  int trials = 0;
};
PointProcessCheck point_process_check(const DiskParams& params, double dtheta, double r_max,
                                      int trials, uint64_t seed);

}  // namespace hypermux
