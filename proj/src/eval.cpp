#include "hypermux/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "hypermux/errors.hpp"
#include "hypermux/mapeq.hpp"
#include "hypermux/parallel.hpp"
#include "hypermux/powerlaw.hpp"
#include "hypermux/rhg.hpp"
#include "hypermux/rng.hpp"

namespace hypermux {

namespace {

struct PairMoments {
  double sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
  int64_t count = 0;
};

PearsonResult pearson_from(const PairMoments& m) {
  PearsonResult out;
  const double n = static_cast<double>(m.count);
  const double cov = n * m.sxy - m.sx * m.sy;
  const double vx = n * m.sxx - m.sx * m.sx;
  const double vy = n * m.syy - m.sy * m.sy;
  if (vx <= 0.0 || vy <= 0.0) return out;  // zero variance: undefined
  out.value = cov / std::sqrt(vx * vy);
  out.defined = true;
  return out;
}

// Row range [lo, hi) of the upper-triangle pair loop.
PairMoments pair_moments(const std::vector<PolarPoint>& a, const std::vector<PolarPoint>& b,
                         int64_t lo, int64_t hi) {
  const int n = static_cast<int>(a.size());
  PairMoments m;
  std::vector<double> cha(a.size()), sha(a.size()), chb(b.size()), shb(b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    cha[i] = std::cosh(a[i].r);
    sha[i] = std::sinh(a[i].r);
    chb[i] = std::cosh(b[i].r);
    shb[i] = std::sinh(b[i].r);
  }
  for (int64_t i = lo; i < hi; ++i) {
    const size_t ui = static_cast<size_t>(i);
    for (int j = static_cast<int>(i) + 1; j < n; ++j) {
      const size_t uj = static_cast<size_t>(j);
      const double x =
          hyperbolic_distance_cs(cha[ui], sha[ui], cha[uj], sha[uj], a[ui].theta - a[uj].theta);
      const double y =
          hyperbolic_distance_cs(chb[ui], shb[ui], chb[uj], shb[uj], b[ui].theta - b[uj].theta);
      m.sx += x;
      m.sy += y;
      m.sxx += x * x;
      m.syy += y * y;
      m.sxy += x * y;
      ++m.count;
    }
  }
  return m;
}

void check_hd_inputs(const std::vector<PolarPoint>& truth, const std::vector<PolarPoint>& inferred) {
  if (truth.size() != inferred.size())
    throw std::invalid_argument("hd_correlation: coordinate sets differ in size");
  if (truth.size() < 3) throw std::invalid_argument("hd_correlation: need at least 3 nodes");
}

}  // namespace

PearsonResult hd_correlation(const std::vector<PolarPoint>& truth,
                             const std::vector<PolarPoint>& inferred) {
  check_hd_inputs(truth, inferred);
  const int64_t n = static_cast<int64_t>(truth.size());
  // Fixed chunk grid; per-chunk moments are combined in index order, so
  // the result does not depend on the thread count.
  const auto chunks = map_chunks<PairMoments>(
      n, 128, [&](int64_t lo, int64_t hi) { return pair_moments(truth, inferred, lo, hi); });
  PairMoments total;
  for (const auto& m : chunks) {
    total.sx += m.sx;
    total.sy += m.sy;
    total.sxx += m.sxx;
    total.syy += m.syy;
    total.sxy += m.sxy;
    total.count += m.count;
  }
  return pearson_from(total);
}

PearsonResult hd_correlation_serial(const std::vector<PolarPoint>& truth,
                                    const std::vector<PolarPoint>& inferred) {
  check_hd_inputs(truth, inferred);
  return pearson_from(pair_moments(truth, inferred, 0, static_cast<int64_t>(truth.size())));
}

double auc_from_scores(const std::vector<double>& positives, const std::vector<double>& negatives) {
  if (positives.empty() || negatives.empty())
    throw std::invalid_argument("auc_from_scores: empty score set");
  std::vector<std::pair<double, int>> all;  // (score, is_positive)
  all.reserve(positives.size() + negatives.size());
  for (double s : positives) all.emplace_back(s, 1);
  for (double s : negatives) all.emplace_back(s, 0);
  std::sort(all.begin(), all.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  // Average ranks over tie groups; U = sum of positive ranks - P(P+1)/2.
  double rank_sum_pos = 0.0;
  size_t i = 0;
  while (i < all.size()) {
    size_t j = i;
    while (j < all.size() && all[j].first == all[i].first) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // ranks are 1-based
    for (size_t k = i; k < j; ++k)
      if (all[k].second) rank_sum_pos += avg_rank;
    i = j;
  }
  const double p = static_cast<double>(positives.size());
  const double q = static_cast<double>(negatives.size());
  return (rank_sum_pos - p * (p + 1.0) / 2.0) / (p * q);
}

Scorer scorer_from_name(const std::string& name) {
  if (name == "cn") return Scorer::kCommonNeighbors;
  if (name == "jaccard") return Scorer::kJaccard;
  if (name == "aa") return Scorer::kAdamicAdar;
  if (name == "hyperbolic") return Scorer::kHyperbolic;
  throw DataError("unknown scorer '" + name + "' (expected cn|jaccard|aa|hyperbolic)");
}

namespace {

int64_t sorted_intersection_size(std::span<const int> a, std::span<const int> b) {
  int64_t count = 0;
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (a[i] > b[j]) {
      ++j;
    } else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

}  // namespace

double cn_score(const UGraph& g, int u, int v) {
  return static_cast<double>(sorted_intersection_size(g.neighbors(u), g.neighbors(v)));
}

double jaccard_score(const UGraph& g, int u, int v) {
  const int64_t inter = sorted_intersection_size(g.neighbors(u), g.neighbors(v));
  const int64_t uni = g.degree(u) + g.degree(v) - inter;
  return uni > 0 ? static_cast<double>(inter) / static_cast<double>(uni) : 0.0;
}

double adamic_adar_score(const UGraph& g, int u, int v) {
  // A common neighbor has degree >= 2, so log(deg) > 0.
  double score = 0.0;
  const auto a = g.neighbors(u);
  const auto b = g.neighbors(v);
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (a[i] > b[j]) {
      ++j;
    } else {
      score += 1.0 / std::log(static_cast<double>(g.degree(a[i])));
      ++i;
      ++j;
    }
  }
  return score;
}

LinkPredictionResult link_prediction(const UGraph& g, const LinkPredictionConfig& cfg,
                                     uint64_t seed) {
  if (!(cfg.holdout > 0.0 && cfg.holdout <= 0.5))
    throw std::invalid_argument("link_prediction: holdout must be in (0, 0.5]");
  const auto all_edges = g.edges();
  const int64_t m = static_cast<int64_t>(all_edges.size());
  if (m < 2) throw std::invalid_argument("link_prediction: graph too small");
  const int64_t n_remove = static_cast<int64_t>(std::ceil(cfg.holdout * static_cast<double>(m)));
  const int n = g.num_nodes();

  const int64_t total_pairs = static_cast<int64_t>(n) * (n - 1) / 2;
  if (total_pairs - m < n_remove)
    throw NonEdgePoolExhausted("link_prediction: not enough non-edges for balanced sampling");

  LinkPredictionResult out;
  out.removed_edges = n_remove;

  // Uniform holdout that does not fragment the graph (up to 100 tries).
  const int components_before = g.num_components();
  Rng remove_rng = Rng(seed).substream(1);
  std::vector<int> order(all_edges.size());
  std::iota(order.begin(), order.end(), 0);
  UGraph train;
  std::vector<std::pair<int, int>> heldout;
  bool ok = false;
  for (int attempt = 0; attempt < 100 && !ok; ++attempt) {
    remove_rng.shuffle(order);
    std::vector<char> removed(all_edges.size(), 0);
    for (int64_t k = 0; k < n_remove; ++k) removed[static_cast<size_t>(order[static_cast<size_t>(k)])] = 1;
    std::vector<std::pair<int, int>> kept;
    kept.reserve(all_edges.size() - static_cast<size_t>(n_remove));
    heldout.clear();
    for (size_t e = 0; e < all_edges.size(); ++e)
      (removed[e] ? heldout : kept).push_back(all_edges[e]);
    train = UGraph::from_edges(n, kept);
    ok = train.num_components() == components_before;
  }
  out.connectivity_warning = !ok;

  // Equal number of distinct non-edges of the original graph.
  Rng neg_rng = Rng(seed).substream(2);
  std::vector<std::pair<int, int>> non_edges;
  if (total_pairs <= 2'000'000) {
    std::vector<std::pair<int, int>> pool;
    pool.reserve(static_cast<size_t>(total_pairs - m));
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (!g.has_edge(u, v)) pool.emplace_back(u, v);
    // Partial Fisher-Yates for a uniform sample without replacement.
    for (int64_t k = 0; k < n_remove; ++k) {
      const int64_t j = k + static_cast<int64_t>(neg_rng.next_below(
                                static_cast<uint64_t>(static_cast<int64_t>(pool.size()) - k)));
      std::swap(pool[static_cast<size_t>(k)], pool[static_cast<size_t>(j)]);
      non_edges.push_back(pool[static_cast<size_t>(k)]);
    }
  } else {
    std::unordered_set<uint64_t> seen;
    while (static_cast<int64_t>(non_edges.size()) < n_remove) {
      const int u = static_cast<int>(neg_rng.next_below(static_cast<uint64_t>(n)));
      const int v = static_cast<int>(neg_rng.next_below(static_cast<uint64_t>(n)));
      if (u == v) continue;
      const int a = std::min(u, v), b = std::max(u, v);
      if (g.has_edge(a, b)) continue;
      const uint64_t key = (static_cast<uint64_t>(a) << 32) | static_cast<uint64_t>(b);
      if (seen.insert(key).second) non_edges.emplace_back(a, b);
    }
  }

  // Score both sides on the training graph.
  std::vector<double> pos_scores, neg_scores;
  pos_scores.reserve(heldout.size());
  neg_scores.reserve(non_edges.size());
  if (cfg.scorer == Scorer::kHyperbolic) {
    std::vector<int> degrees(static_cast<size_t>(n));
    for (int u = 0; u < n; ++u) degrees[static_cast<size_t>(u)] = train.degree(u);
    const double alpha = cfg.alpha > 0.0 ? cfg.alpha : alpha_from_degrees(degrees);
    DiskParams params(n, alpha, cfg.C, cfg.temperature);
    TrainConfig train_cfg = cfg.train;
    train_cfg.seed = derive_seed(seed, 3);
    const FitResult fitres = fit(train, params, train_cfg);
    auto score = [&](const std::pair<int, int>& e) {
      return -hyperbolic_distance(fitres.state.coords[static_cast<size_t>(e.first)],
                                  fitres.state.coords[static_cast<size_t>(e.second)]);
    };
    for (const auto& e : heldout) pos_scores.push_back(score(e));
    for (const auto& e : non_edges) neg_scores.push_back(score(e));
  } else {
    auto score = [&](const std::pair<int, int>& e) {
      switch (cfg.scorer) {
        case Scorer::kCommonNeighbors:
          return cn_score(train, e.first, e.second);
        case Scorer::kJaccard:
          return jaccard_score(train, e.first, e.second);
        default:
          return adamic_adar_score(train, e.first, e.second);
      }
    };
    for (const auto& e : heldout) pos_scores.push_back(score(e));
    for (const auto& e : non_edges) neg_scores.push_back(score(e));
  }

  out.auc = auc_from_scores(pos_scores, neg_scores);
  return out;
}

std::vector<CoherenceTableRow> coherence_table(const std::vector<int>& sizes, Clusterer clusterer,
                                               int instances, double alpha, double C, double T,
                                               uint64_t seed) {
  std::vector<CoherenceTableRow> rows;
  for (size_t si = 0; si < sizes.size(); ++si) {
    const int n = sizes[si];
    const DiskParams params(n, alpha, C, T);
    const auto values = map_trials<double>(instances, [&](int inst) {
      const uint64_t inst_seed = derive_seed(seed, (si << 24) | static_cast<uint64_t>(inst));
      RhgSample sample = generate(params, inst_seed);
      if (sample.graph.num_edges() < 1) return 0.0;
      Partition part = optimize(sample.graph, derive_seed(inst_seed, 1)).partition;

      std::vector<int> assignment = part.assignment();
      if (clusterer == Clusterer::kRandomAssign) {
        // Control: ~20 nodes per module, memberships drawn uniformly.
        Rng rng(derive_seed(inst_seed, 2));
        const int m = std::max(2, n / 20);
        for (int& a : assignment) a = static_cast<int>(rng.next_below(static_cast<uint64_t>(m)));
      }
      std::vector<double> angles(sample.coords.size());
      for (size_t u = 0; u < sample.coords.size(); ++u) angles[u] = sample.coords[u].theta;
      const int m = 1 + *std::max_element(assignment.begin(), assignment.end());
      return coherence(assignment, m, angles).mean;
    });
    CoherenceTableRow row;
    row.n = n;
    row.instances = instances;
    double total = 0.0;
    for (double v : values) total += v;
    row.mean_coherence = instances > 0 ? total / instances : 0.0;
    rows.push_back(row);
  }
  return rows;
}

ResolutionRow resolution_row(const UGraph& g, const std::string& name, uint64_t seed) {
  ResolutionRow row;
  row.name = name;
  row.nodes = g.num_nodes();
  row.edges = g.num_edges();
  row.detected = optimize(g, seed).partition.num_modules();
  row.predicted = predict_module_count(row.edges);
  return row;
}

}  // namespace hypermux
