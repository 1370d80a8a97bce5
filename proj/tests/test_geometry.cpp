#include <doctest.h>

#include <cmath>

#include "hypermux/errors.hpp"
#include "hypermux/geometry.hpp"
#include "hypermux/rng.hpp"

using namespace hypermux;

namespace {

PolarPoint random_point(Rng& rng, double r_max) {
  return {rng.uniform(0.05, r_max), rng.uniform(0.0, kTwoPi)};
}

}  // namespace

TEST_CASE("hyperbolic distance: closed-form cases") {
  CHECK(hyperbolic_distance({2.0, 1.0}, {2.0, 1.0}) == doctest::Approx(0.0).epsilon(1e-12));
  // equal angles collapse to |r_u - r_v|
  CHECK(hyperbolic_distance({1.0, 0.7}, {3.0, 0.7}) == doctest::Approx(2.0).epsilon(1e-12));
  // antipodal: d = r_u + r_v
  CHECK(hyperbolic_distance({5.0, 0.0}, {5.0, M_PI}) == doctest::Approx(10.0).epsilon(1e-12));
  // high-precision evaluation of the law of cosines at 50+ digits
  const double oracle = 4.906148865804693614529715;
  CHECK(hyperbolic_distance({3.2, 0.1}, {2.7, 1.4}) ==
        doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("hyperbolic distance: symmetry, bounds, triangle inequality") {
  Rng rng(12345);
  for (int i = 0; i < 2000; ++i) {
    const PolarPoint a = random_point(rng, 15.0);
    const PolarPoint b = random_point(rng, 15.0);
    const PolarPoint c = random_point(rng, 15.0);
    const double dab = hyperbolic_distance(a, b);
    CHECK(std::abs(hyperbolic_distance(b, a) - dab) < 1e-12);
    CHECK(dab >= std::abs(a.r - b.r) - 1e-9);
    CHECK(dab <= a.r + b.r + 1e-9);
    CHECK(dab <= hyperbolic_distance(a, c) + hyperbolic_distance(c, b) + 1e-9);
  }
}

TEST_CASE("connection probability: exact points and saturation") {
  const DiskParams params(1000, 0.75, 0.0, 0.3);
  CHECK(connection_probability(params.R, params) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(connection_probability(params.R + 2.0 * params.T * std::log(3.0), params) ==
        doctest::Approx(0.25).epsilon(1e-13));
  CHECK(connection_probability(params.R - 100.0 * params.T, params) >= 1.0 - 1e-20);
  // no NaN in the deep tails
  CHECK(connection_probability(params.R + 1e6, params) == 0.0);
  CHECK(connection_probability(0.0, params) <= 1.0);
}

TEST_CASE("connection probability: monotone nonincreasing in d") {
  const DiskParams params(500, 0.6, 2.0, 0.1);
  double prev = 2.0;
  for (double d = 0.0; d < 3.0 * params.R; d += 0.07) {
    const double p = connection_probability(d, params);
    CHECK(p <= prev + 1e-15);
    prev = p;
  }
}

TEST_CASE("distance partials: radial geodesic and angular zero") {
  // along a radial geodesic d = r_v - r_u, so dd/dr_u = -1
  const DistancePartials g = distance_partials({1.0, 0.7}, {3.0, 0.7});
  CHECK(g.dr == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(g.dtheta == doctest::Approx(0.0).epsilon(1e-12));
  // coincident points: declared subgradient
  const DistancePartials z = distance_partials({2.0, 1.0}, {2.0, 1.0});
  CHECK(z.dr == 0.0);
  CHECK(z.dtheta == 0.0);
}

TEST_CASE("distance partials: antisymmetry of the angular partial") {
  Rng rng(777);
  for (int i = 0; i < 500; ++i) {
    const PolarPoint u = random_point(rng, 10.0);
    const PolarPoint v = random_point(rng, 10.0);
    const double gu = distance_partials(u, v).dtheta;
    const double gv = distance_partials(v, u).dtheta;
    CHECK(std::abs(gu + gv) < std::max(1e-12, std::abs(gu) * 1e-9));
  }
}

TEST_CASE("distance partials: central finite differences, 1000 pairs") {
  Rng rng(99);
  const double h = 1e-6;
  int checked = 0;
  while (checked < 1000) {
    const PolarPoint u = random_point(rng, 8.0);
    const PolarPoint v = random_point(rng, 8.0);
    if (hyperbolic_distance(u, v) < 0.1) continue;  // stay off the degenerate case
    const DistancePartials g = distance_partials(u, v);
    const double fd_r = (hyperbolic_distance({u.r + h, u.theta}, v) -
                         hyperbolic_distance({u.r - h, u.theta}, v)) /
                        (2.0 * h);
    const double fd_t = (hyperbolic_distance({u.r, u.theta + h}, v) -
                         hyperbolic_distance({u.r, u.theta - h}, v)) /
                        (2.0 * h);
    CHECK(g.dr == doctest::Approx(fd_r).epsilon(1e-5));
    CHECK(std::abs(g.dtheta - fd_t) < std::max(1e-7, std::abs(fd_t) * 1e-5));
    ++checked;
  }
}

TEST_CASE("metric tensor inverse diagonal") {
  const MetricDiag m = metric_tensor_inverse_diag({1.0, 0.0});
  CHECK(m.radial == 1.0);
  CHECK(m.angular == doctest::Approx(0.7240616609663104664).epsilon(1e-14));
  // large-r asymptotics: 1/sinh^2(r) -> 4 e^{-2r}
  const MetricDiag big = metric_tensor_inverse_diag({20.0, 0.0});
  CHECK(big.angular == doctest::Approx(4.0 * std::exp(-40.0)).epsilon(1e-12));
  CHECK_THROWS_AS(metric_tensor_inverse_diag({1e-12, 0.0}), RadialSingularity);
}

TEST_CASE("angle normalization") {
  CHECK(normalize_angle(0.0) == 0.0);
  CHECK(normalize_angle(kTwoPi) == 0.0);
  CHECK(normalize_angle(-0.5) == doctest::Approx(kTwoPi - 0.5).epsilon(1e-14));
  CHECK(normalize_angle(7.0 * kTwoPi + 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    const double t = normalize_angle(rng.uniform(-1e4, 1e4));
    CHECK(t >= 0.0);
    CHECK(t < kTwoPi);
  }
}
