#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "hypermux/errors.hpp"
#include "hypermux/eval.hpp"
#include "hypermux/powerlaw.hpp"
#include "hypermux/rhg.hpp"
#include "hypermux/rng.hpp"

using namespace hypermux;

namespace {

UGraph complete_graph(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  return UGraph::from_edges(n, edges);
}

// Exhaustive Mann-Whitney statistic.
double brute_auc(const std::vector<double>& pos, const std::vector<double>& neg) {
  double score = 0.0;
  for (double p : pos)
    for (double q : neg) score += p > q ? 1.0 : (p == q ? 0.5 : 0.0);
  return score / (static_cast<double>(pos.size()) * static_cast<double>(neg.size()));
}

}  // namespace

TEST_CASE("hd_correlation: identity and isometries give 1") {
  Rng rng(2);
  std::vector<PolarPoint> truth;
  for (int i = 0; i < 40; ++i) truth.push_back({rng.uniform(0.2, 12.0), rng.uniform(0.0, kTwoPi)});

  const PearsonResult self = hd_correlation(truth, truth);
  CHECK(self.defined);
  CHECK(self.value == doctest::Approx(1.0).epsilon(1e-12));

  std::vector<PolarPoint> rotated, reflected;
  for (const auto& p : truth) {
    rotated.push_back({p.r, normalize_angle(p.theta + 1.2345)});
    reflected.push_back({p.r, normalize_angle(-p.theta + 0.4)});
  }
  CHECK(hd_correlation(truth, rotated).value == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(hd_correlation(truth, reflected).value == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("hd_correlation: five-point hand instance against a spreadsheet-grade oracle") {
  const std::vector<PolarPoint> a = {
      {1.0, 0.0}, {2.0, 1.0}, {3.0, 2.0}, {1.5, 3.5}, {2.5, 5.0}};
  const std::vector<PolarPoint> b = {
      {1.2, 0.3}, {1.8, 1.4}, {3.1, 1.9}, {1.0, 3.0}, {2.8, 5.2}};
  // straight-line Pearson over the 10 explicit distance pairs
  std::vector<double> xs, ys;
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = i + 1; j < a.size(); ++j) {
      xs.push_back(hyperbolic_distance(a[i], a[j]));
      ys.push_back(hyperbolic_distance(b[i], b[j]));
    }
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (size_t k = 0; k < xs.size(); ++k) {
    sx += xs[k];
    sy += ys[k];
    sxx += xs[k] * xs[k];
    syy += ys[k] * ys[k];
    sxy += xs[k] * ys[k];
  }
  const double oracle =
      (n * sxy - sx * sy) / std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
  const PearsonResult r = hd_correlation(a, b);
  CHECK(r.defined);
  CHECK(std::abs(r.value - oracle) < 1e-12);
}

TEST_CASE("hd_correlation: zero variance is undefined; serial matches parallel") {
  const std::vector<PolarPoint> same = {{2.0, 0.0}, {2.0, 2.094395102393195},
                                        {2.0, 4.18879020478639}};
  // equilateral: all pairwise distances equal -> zero variance
  Rng rng(3);
  std::vector<PolarPoint> other;
  for (int i = 0; i < 3; ++i) other.push_back({rng.uniform(0.5, 5.0), rng.uniform(0.0, kTwoPi)});
  CHECK(!hd_correlation(same, other).defined);

  std::vector<PolarPoint> a, b;
  for (int i = 0; i < 300; ++i) {
    a.push_back({rng.uniform(0.2, 12.0), rng.uniform(0.0, kTwoPi)});
    b.push_back({rng.uniform(0.2, 12.0), rng.uniform(0.0, kTwoPi)});
  }
  const PearsonResult fast = hd_correlation(a, b);
  const PearsonResult slow = hd_correlation_serial(a, b);
  CHECK(fast.defined == slow.defined);
  CHECK(std::abs(fast.value - slow.value) < 1e-12);
}

TEST_CASE("auc: rank estimator equals the exhaustive statistic, ties at 0.5") {
  Rng rng(44);
  for (int rep = 0; rep < 30; ++rep) {
    std::vector<double> pos, neg;
    const int np = 1 + static_cast<int>(rng.next_below(7));
    const int nn = 1 + static_cast<int>(rng.next_below(7));
    for (int i = 0; i < np; ++i) pos.push_back(static_cast<double>(rng.next_below(5)));
    for (int i = 0; i < nn; ++i) neg.push_back(static_cast<double>(rng.next_below(5)));
    CHECK(auc_from_scores(pos, neg) == doctest::Approx(brute_auc(pos, neg)).epsilon(1e-12));
  }
  CHECK(auc_from_scores({1.0, 1.0}, {1.0}) == doctest::Approx(0.5));
  CHECK(auc_from_scores({2.0, 3.0}, {1.0}) == doctest::Approx(1.0));
}

TEST_CASE("link prediction: perfect, random, and CN-oracle cases") {
  SUBCASE("scorer ranking held-out edges above all non-edges gives AUC 1") {
    // On an RHG at low temperature the hyperbolic truth is nearly perfect;
    // here we check the estimator wiring instead with direct score lists.
    CHECK(auc_from_scores({5.0, 6.0, 7.0}, {1.0, 2.0}) == 1.0);
  }
  SUBCASE("random scorer on a fixed split is near 1/2 over 20 seeds") {
    // A scorer with no signal: AUC over the balanced sample should hover
    // around 0.5. Emulated by scoring with an independent RNG.
    Rng rng(123);
    double total = 0.0;
    for (int s = 0; s < 20; ++s) {
      std::vector<double> pos(40), neg(40);
      for (auto& x : pos) x = rng.next_double();
      for (auto& x : neg) x = rng.next_double();
      total += auc_from_scores(pos, neg);
    }
    CHECK(std::abs(total / 20.0 - 0.5) < 0.05);
  }
  SUBCASE("six-node instance with the CN scorer matches brute-force ranking") {
    // path 0-1-2-3-4-5 plus chords 0-2, 2-4
    const UGraph g = UGraph::from_edges(
        6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {0, 2}, {2, 4}});
    // hold out {1,3}; negatives {0,5}, {1,4}
    const std::vector<std::pair<int, int>> held = {{1, 3}};
    const std::vector<std::pair<int, int>> non = {{0, 5}};
    std::vector<double> pos, neg;
    for (auto [u, v] : held) pos.push_back(cn_score(g, u, v));
    for (auto [u, v] : non) neg.push_back(cn_score(g, u, v));
    CHECK(auc_from_scores(pos, neg) == doctest::Approx(brute_auc(pos, neg)));
    CHECK(cn_score(g, 1, 3) == 1.0);  // common neighbor: 2
    CHECK(cn_score(g, 0, 5) == 0.0);
  }
}

TEST_CASE("link prediction: end-to-end on an RHG sample") {
  const DiskParams params(300, 0.75, -1.0, 0.2);
  const RhgSample sample = generate(params, 2023);
  LinkPredictionConfig cfg;
  cfg.scorer = Scorer::kCommonNeighbors;
  cfg.holdout = 0.1;
  const LinkPredictionResult cn = link_prediction(sample.graph, cfg, 99);
  CHECK(cn.auc > 0.6);  // CN carries real signal on clustered graphs
  CHECK(cn.removed_edges ==
        static_cast<int64_t>(std::ceil(0.1 * static_cast<double>(sample.graph.num_edges()))));

  // deterministic in seed
  const LinkPredictionResult cn2 = link_prediction(sample.graph, cfg, 99);
  CHECK(cn.auc == cn2.auc);

  cfg.scorer = Scorer::kJaccard;
  CHECK(link_prediction(sample.graph, cfg, 99).auc > 0.55);
  cfg.scorer = Scorer::kAdamicAdar;
  CHECK(link_prediction(sample.graph, cfg, 99).auc > 0.6);
}

TEST_CASE("link prediction: non-edge pool exhaustion on dense tiny graphs") {
  LinkPredictionConfig cfg;
  cfg.holdout = 0.5;
  CHECK_THROWS_AS(link_prediction(complete_graph(6), cfg, 1), NonEdgePoolExhausted);
}

TEST_CASE("similarity scores on a known instance") {
  // square with diagonal: 0-1, 1-2, 2-3, 3-0, 0-2
  const UGraph g = UGraph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 2}});
  CHECK(cn_score(g, 1, 3) == 2.0);                                // 0 and 2
  CHECK(jaccard_score(g, 1, 3) == doctest::Approx(1.0));          // identical neighborhoods
  CHECK(adamic_adar_score(g, 1, 3) ==
        doctest::Approx(2.0 / std::log(3.0)).epsilon(1e-12));     // deg(0) = deg(2) = 3
  CHECK(jaccard_score(g, 0, 2) < 1.0);
}

TEST_CASE("power-law fit recovers the exponent of a synthetic Pareto tail") {
  Rng rng(606);
  std::vector<int> degrees;
  for (int i = 0; i < 30000; ++i) {
    // discrete Pareto with beta = 2.5 via inverse transform
    const double u = rng.next_double();
    const int k = static_cast<int>(std::pow(1.0 - u, -1.0 / 1.5));
    degrees.push_back(std::min(k, 100000));
  }
  const PowerLawFit fit = fit_power_law(degrees);
  CHECK(fit.beta == doctest::Approx(2.5).epsilon(0.08));
  CHECK(alpha_from_degrees(degrees) == doctest::Approx(0.75).epsilon(0.12));
}

TEST_CASE("coherence table: detected modules cohere, random control does not") {
  const std::vector<int> sizes = {100};
  const auto infomap_rows = coherence_table(sizes, Clusterer::kInfomap, 5, 0.6, 2.0, 0.1, 9);
  REQUIRE(infomap_rows.size() == 1);
  CHECK(infomap_rows[0].mean_coherence > 0.8);

  const auto random_rows = coherence_table({500}, Clusterer::kRandomAssign, 3, 0.6, 2.0, 0.1, 9);
  CHECK(random_rows[0].mean_coherence < 0.3);
}

TEST_CASE("resolution table row") {
  // ring with 514 edges: prediction column matches the reported value
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < 514; ++i) edges.emplace_back(i, (i + 1) % 514);
  const UGraph ring = UGraph::from_edges(514, edges);
  const ResolutionRow row = resolution_row(ring, "ring514", 4);
  CHECK(row.edges == 514);
  CHECK(row.predicted == 57);
  CHECK(row.detected >= 1);

  // two disjoint K5: diagnostic only, no assertion linking the columns
  std::vector<std::pair<int, int>> k5e;
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j) {
      k5e.emplace_back(i, j);
      k5e.emplace_back(5 + i, 5 + j);
    }
  const ResolutionRow diag = resolution_row(UGraph::from_edges(10, k5e), "two-k5", 4);
  CHECK(diag.detected == 2);
  CHECK(diag.predicted == predict_module_count(20));
}
