#include "hypermux/rhg.hpp"

#include <cmath>

#include "hypermux/parallel.hpp"

namespace hypermux {

double radius_cdf(const DiskParams& params, double r) {
  if (r <= 0.0) return 0.0;
  if (r >= params.R) return 1.0;
  return (std::cosh(params.alpha * r) - 1.0) / (std::cosh(params.alpha * params.R) - 1.0);
}

double radius_icdf(const DiskParams& params, double u) {
  const double r = std::acosh(1.0 + u * (std::cosh(params.alpha * params.R) - 1.0)) / params.alpha;
  return r < params.R ? r : params.R;
}

namespace {

// One Bernoulli per pair in lexicographic order, drawn from `rng`.
UGraph draw_pairs(const DiskParams& params, const std::vector<PolarPoint>& coords, Rng& rng) {
  const int n = static_cast<int>(coords.size());
  std::vector<double> ch(static_cast<size_t>(n)), sh(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    ch[static_cast<size_t>(i)] = std::cosh(coords[static_cast<size_t>(i)].r);
    sh[static_cast<size_t>(i)] = std::sinh(coords[static_cast<size_t>(i)].r);
  }
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < n; ++u) {
    const double tu = coords[static_cast<size_t>(u)].theta;
    for (int v = u + 1; v < n; ++v) {
      const double d = hyperbolic_distance_cs(ch[static_cast<size_t>(u)], sh[static_cast<size_t>(u)],
                                              ch[static_cast<size_t>(v)], sh[static_cast<size_t>(v)],
                                              tu - coords[static_cast<size_t>(v)].theta);
      const double p = connection_probability(d, params);
      if (rng.next_double() < p) edges.emplace_back(u, v);
    }
  }
  return UGraph::from_edges(n, edges);
}

}  // namespace

RhgSample generate(const DiskParams& params, uint64_t seed) {
  const int n = params.n;
  Rng rng(seed);

  std::vector<PolarPoint> coords(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) coords[static_cast<size_t>(i)].r = sample_radius(params, rng);
  for (int i = 0; i < n; ++i) coords[static_cast<size_t>(i)].theta = rng.uniform(0.0, kTwoPi);

  RhgSample sample;
  sample.params = params;
  sample.graph = draw_pairs(params, coords, rng);
  sample.coords = std::move(coords);
  sample.seed = seed;
  return sample;
}

UGraph sample_edges(const DiskParams& params, const std::vector<PolarPoint>& coords,
                    uint64_t seed) {
  Rng rng(seed);
  return draw_pairs(params, coords, rng);
}

BallMeasureCheck ball_measure_check(const DiskParams& params, double r, int64_t sample_size,
                                    uint64_t seed) {
  const int chunks = 64;
  auto counts = map_chunks<int64_t>(sample_size, chunks, [&](int64_t lo, int64_t hi) {
    Rng rng = Rng(seed).substream(static_cast<uint64_t>(lo));
    int64_t c = 0;
    for (int64_t i = lo; i < hi; ++i)
      if (sample_radius(params, rng) <= r) ++c;
    return c;
  });
  int64_t inside = 0;
  for (int64_t c : counts) inside += c;
  BallMeasureCheck out;
  out.empirical = static_cast<double>(inside) / static_cast<double>(sample_size);
  out.analytic = std::exp(-params.alpha * (params.R - r));
  return out;
}

CoreSectorCheck core_sector_check(const DiskParams& params, int K, int trials, uint64_t seed) {
  const double sector = kTwoPi / K;
  const double core_radius = params.R / 2.0;
  auto ok = map_trials<uint8_t>(trials, [&](int t) -> uint8_t {
    Rng rng = Rng(seed).substream(static_cast<uint64_t>(t));
    std::vector<uint8_t> hit(static_cast<size_t>(K), 0);
    int remaining = K;
    for (int i = 0; i < params.n && remaining > 0; ++i) {
      const double r = sample_radius(params, rng);
      const double theta = rng.uniform(0.0, kTwoPi);
      if (r >= core_radius) continue;
      int s = static_cast<int>(theta / sector);
      if (s >= K) s = K - 1;
      if (!hit[static_cast<size_t>(s)]) {
        hit[static_cast<size_t>(s)] = 1;
        --remaining;
      }
    }
    return remaining == 0 ? 1 : 0;
  });
  int64_t succ = 0;
  for (uint8_t v : ok) succ += v;
  CoreSectorCheck out;
  out.trials = trials;
  out.empirical = trials > 0 ? static_cast<double>(succ) / trials : 0.0;
  out.lemma_estimate =
      1.0 - std::exp(-std::pow(static_cast<double>(params.n), 1.0 - params.alpha) / K);
  return out;
}

PointProcessCheck point_process_check(const DiskParams& params, double dtheta, double r_max,
                                      int trials, uint64_t seed) {
  auto ok = map_trials<uint8_t>(trials, [&](int t) -> uint8_t {
    Rng rng = Rng(seed).substream(static_cast<uint64_t>(t));
    for (int i = 0; i < params.n; ++i) {
      const double r = sample_radius(params, rng);
      const double theta = rng.uniform(0.0, kTwoPi);
      if (theta < dtheta && r <= r_max) return 1;
    }
    return 0;
  });
  int64_t succ = 0;
  for (uint8_t v : ok) succ += v;
  PointProcessCheck out;
  out.trials = trials;
  out.empirical = trials > 0 ? static_cast<double>(succ) / trials : 0.0;
  const double mu = (dtheta / kTwoPi) * radius_cdf(params, r_max);
  out.analytic = 1.0 - std::exp(-static_cast<double>(params.n) * mu);
  return out;
}

}  // namespace hypermux
