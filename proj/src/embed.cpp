#include "hypermux/embed.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <tuple>

namespace hypermux {

namespace {

inline double clamp_radius(double r, const DiskParams& params) {
  return std::clamp(r, kMinRadius, params.R);
}

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

double radial_init(int degree, const DiskParams& params) {
  if (degree <= 0) return params.R;  // isolated nodes pinned to the rim
  const double arg = 2.0 * params.n * params.alpha * params.T /
                     (degree * std::sin(M_PI * params.T) * (params.alpha - 0.5));
  return clamp_radius(2.0 * std::log(arg), params);
}

namespace {

// Greedy conductance chain over modules described by volumes and unordered
// cross-edge counts: largest volume first, then always the unplaced module
// with the highest relative conductance to the last placed one. Ties
// (mostly modules with no edges to the tail) break toward the module best
// connected to ANY placed module, then larger volume, then lower id, so
// weakly attached modules still land near their neighbors.
std::vector<int> conductance_chain(int m, const std::vector<int64_t>& vol,
                                   const std::map<std::pair<int, int>, int64_t>& cross) {
  auto rel_cond = [&](int a, int b) -> double {
    const int64_t mv = std::min(vol[static_cast<size_t>(a)], vol[static_cast<size_t>(b)]);
    if (mv == 0) return 0.0;
    const auto it = cross.find({std::min(a, b), std::max(a, b)});
    return it == cross.end() ? 0.0
                             : static_cast<double>(it->second) / static_cast<double>(mv);
  };

  std::vector<char> placed(static_cast<size_t>(m), 0);
  std::vector<double> best_to_placed(static_cast<size_t>(m), 0.0);
  std::vector<int> chain;
  chain.reserve(static_cast<size_t>(m));
  int start = 0;
  for (int i = 1; i < m; ++i)
    if (vol[static_cast<size_t>(i)] > vol[static_cast<size_t>(start)]) start = i;
  chain.push_back(start);
  placed[static_cast<size_t>(start)] = 1;
  for (int c = 0; c < m; ++c)
    if (!placed[static_cast<size_t>(c)])
      best_to_placed[static_cast<size_t>(c)] = rel_cond(start, c);
  while (static_cast<int>(chain.size()) < m) {
    const int last = chain.back();
    int best = -1;
    double best_r = -1.0;
    for (int c = 0; c < m; ++c) {
      if (placed[static_cast<size_t>(c)]) continue;
      const double r = rel_cond(last, c);
      bool better = r > best_r || best < 0;
      if (!better && r == best_r) {
        const double anchor_c = best_to_placed[static_cast<size_t>(c)];
        const double anchor_b = best_to_placed[static_cast<size_t>(best)];
        better = anchor_c > anchor_b ||
                 (anchor_c == anchor_b &&
                  vol[static_cast<size_t>(c)] > vol[static_cast<size_t>(best)]);
      }
      if (better) {
        best_r = r;
        best = c;
      }
    }
    chain.push_back(best);
    placed[static_cast<size_t>(best)] = 1;
    for (int c = 0; c < m; ++c)
      if (!placed[static_cast<size_t>(c)])
        best_to_placed[static_cast<size_t>(c)] =
            std::max(best_to_placed[static_cast<size_t>(c)], rel_cond(best, c));
  }
  return chain;
}

// Seriation of a connected subgraph by its Fiedler vector (power
// iteration on sigma*I - Laplacian, deflated against the constant
// vector). The ordering puts linked nodes next to each other along one
// dimension, which is exactly what an arc needs.
std::vector<int> spectral_order(const UGraph& g) {
  const int n = g.num_nodes();
  std::vector<int> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  if (n <= 2 || g.num_edges() == 0) return order;

  int max_deg = 0;
  for (int u = 0; u < n; ++u) max_deg = std::max(max_deg, g.degree(u));
  const double sigma = max_deg + 1.0;

  std::vector<double> x(static_cast<size_t>(n)), y(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) x[static_cast<size_t>(i)] = std::sin(1.0 + 0.7 * i);
  for (int it = 0; it < 1500; ++it) {
    for (int u = 0; u < n; ++u) {
      double acc = (sigma - g.degree(u)) * x[static_cast<size_t>(u)];
      for (int v : g.neighbors(u)) acc += x[static_cast<size_t>(v)];
      y[static_cast<size_t>(u)] = acc;
    }
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= n;
    double norm = 0.0;
    for (double& v : y) {
      v -= mean;
      norm += v * v;
    }
    norm = std::sqrt(norm);
    if (norm < 1e-300) break;  // no usable direction; keep id order
    double delta = 0.0;
    for (int i = 0; i < n; ++i) {
      y[static_cast<size_t>(i)] /= norm;
      delta = std::max(delta, std::abs(y[static_cast<size_t>(i)] - x[static_cast<size_t>(i)]));
    }
    x.swap(y);
    if (delta < 1e-12 && it > 32) break;
  }

  // deterministic orientation: correlate with id order
  double corr = 0.0;
  for (int i = 0; i < n; ++i) corr += x[static_cast<size_t>(i)] * (i - 0.5 * (n - 1));
  if (corr < 0.0)
    for (double& v : x) v = -v;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (x[static_cast<size_t>(a)] != x[static_cast<size_t>(b)])
      return x[static_cast<size_t>(a)] < x[static_cast<size_t>(b)];
    return a < b;
  });
  return order;
}

// Lays `nodes` (sorted global ids) out on [lo, lo + width). Detected
// sub-communities are chained by relative conductance and subdivide the
// arc in proportion to their internal volume, recursively; groups the map
// equation cannot split any further are seriated by their Fiedler vector
// and spaced evenly with seeded jitter. Uniform placement inside whole
// arcs leaves most rim-rim edges angularly violated, which the RSGD can
// only answer with radial collapse, so the layout carries the community
// principle down to the scale of individual edges instead.
void layout_subset(const UGraph& g, const std::vector<int>& nodes, double lo, double width,
                   uint64_t seed, int depth, std::vector<double>& theta) {
  Rng rng(seed);
  auto uniform_leaf = [&]() {
    for (int u : nodes)
      theta[static_cast<size_t>(u)] = normalize_angle(rng.uniform(lo, lo + width));
  };
  if (static_cast<int>(nodes.size()) <= 2 || depth >= 24 || width < 1e-5) {
    uniform_leaf();
    return;
  }

  // induced subgraph on compact ids
  std::vector<int> local(static_cast<size_t>(g.num_nodes()), -1);
  for (size_t i = 0; i < nodes.size(); ++i) local[static_cast<size_t>(nodes[i])] = static_cast<int>(i);
  std::vector<std::pair<int, int>> edges;
  for (size_t i = 0; i < nodes.size(); ++i)
    for (int v : g.neighbors(nodes[i]))
      if (local[static_cast<size_t>(v)] > static_cast<int>(i))
        edges.emplace_back(static_cast<int>(i), local[static_cast<size_t>(v)]);
  if (edges.empty()) {
    uniform_leaf();
    return;
  }
  const UGraph induced = UGraph::from_edges(static_cast<int>(nodes.size()), edges);
  const std::vector<int> sub = optimize_flow(FlowGraph::from_graph(induced), derive_seed(seed, 1));
  const int m = 1 + *std::max_element(sub.begin(), sub.end());
  if (m <= 1) {
    // seriated leaf: even slots in Fiedler order, jittered inside the slot
    const std::vector<int> ranks = spectral_order(induced);
    const double slot = width / static_cast<double>(nodes.size());
    for (size_t r = 0; r < ranks.size(); ++r) {
      const int u = nodes[static_cast<size_t>(ranks[r])];
      const double center = lo + (static_cast<double>(r) + 0.5) * slot;
      theta[static_cast<size_t>(u)] =
          normalize_angle(center + slot * 0.3 * (rng.next_double() - 0.5));
    }
    return;
  }

  std::vector<int64_t> vol(static_cast<size_t>(m), 0);
  std::map<std::pair<int, int>, int64_t> cross;
  for (int i = 0; i < induced.num_nodes(); ++i) {
    vol[static_cast<size_t>(sub[static_cast<size_t>(i)])] += induced.degree(i);
    for (int j : induced.neighbors(i)) {
      if (j <= i) continue;
      const int a = sub[static_cast<size_t>(i)], b = sub[static_cast<size_t>(j)];
      if (a != b) cross[{std::min(a, b), std::max(a, b)}] += 1;
    }
  }
  const std::vector<int> chain = conductance_chain(m, vol, cross);

  std::vector<std::vector<int>> members(static_cast<size_t>(m));
  for (size_t i = 0; i < nodes.size(); ++i)
    members[static_cast<size_t>(sub[i])].push_back(nodes[i]);

  const double total_vol = static_cast<double>(induced.total_degree());
  double acc = lo;
  int rank = 0;
  for (int mod : chain) {
    const double w = width * static_cast<double>(vol[static_cast<size_t>(mod)]) / total_vol;
    layout_subset(g, members[static_cast<size_t>(mod)], acc + 0.01 * w, 0.98 * w,
                  derive_seed(seed, 100 + static_cast<uint64_t>(rank)), depth + 1, theta);
    acc += w;
    ++rank;
  }
}

}  // namespace

std::vector<double> angular_init(const Partition& p, const UGraph& g, uint64_t seed) {
  const int n = g.num_nodes();
  const int m = p.num_modules();
  std::vector<double> theta(static_cast<size_t>(n), 0.0);
  if (n == 0 || m == 0) return theta;

  std::vector<int64_t> vol(static_cast<size_t>(m), 0);
  std::map<std::pair<int, int>, int64_t> cross;
  for (int u = 0; u < n; ++u) {
    const int mu = p.module_of(u);
    vol[static_cast<size_t>(mu)] = p.module_vol(mu);
    for (int v : g.neighbors(u)) {
      if (v <= u) continue;
      const int mv = p.module_of(v);
      if (mu != mv) cross[{std::min(mu, mv), std::max(mu, mv)}] += 1;
    }
  }
  const std::vector<int> chain = conductance_chain(m, vol, cross);

  // Arcs proportional to module volume, in chain order; nodes of each
  // module land inside its arc via the recursive sub-community layout.
  std::vector<std::vector<int>> members(static_cast<size_t>(m));
  for (int u = 0; u < n; ++u) members[static_cast<size_t>(p.module_of(u))].push_back(u);
  const double d = static_cast<double>(g.total_degree());
  double acc = 0.0;
  int rank = 0;
  for (int mod : chain) {
    const double w = d > 0.0 ? kTwoPi * static_cast<double>(p.module_vol(mod)) / d
                             : kTwoPi / static_cast<double>(m);
    layout_subset(g, members[static_cast<size_t>(mod)], acc + 0.01 * w, 0.98 * w,
                  derive_seed(seed, 10'000 + static_cast<uint64_t>(rank)), 1, theta);
    acc += w;
    ++rank;
  }
  return theta;
}

double pair_loss(double d, bool positive, const DiskParams& params) {
  const double x = (params.R - d) / (2.0 * params.T);
  // -log sigma(x) = log(1 + e^-x), -log(1 - sigma(x)) = log(1 + e^x);
  // use the softplus form stable for both signs.
  auto softplus = [](double z) { return z > 30.0 ? z : std::log1p(std::exp(z)); };
  return positive ? softplus(-x) : softplus(x);
}

double pair_loss_dd(double d, bool positive, const DiskParams& params) {
  const double x = (params.R - d) / (2.0 * params.T);
  const double s = sigmoid(x);
  return ((positive ? 1.0 : 0.0) - s) / (2.0 * params.T);
}

void first_order_step(EmbeddingState& state, int u, int v, std::span<const int> negatives_u,
                      std::span<const int> negatives_v, double eta) {
  auto& coords = state.coords;
  const DiskParams& params = state.params;

  double grad[2][2] = {{0.0, 0.0}, {0.0, 0.0}};  // [endpoint][r, theta]
  const int endpoint[2] = {u, v};
  const std::span<const int>* negs[2] = {&negatives_u, &negatives_v};

  for (int side = 0; side < 2; ++side) {
    const int a = endpoint[side];
    const int b = endpoint[1 - side];
    const PolarPoint pa = coords[static_cast<size_t>(a)];

    const double d_pos = hyperbolic_distance(pa, coords[static_cast<size_t>(b)]);
    const DistancePartials g_pos = distance_partials(pa, coords[static_cast<size_t>(b)]);
    const double w_pos = pair_loss_dd(d_pos, true, params);
    grad[side][0] += w_pos * g_pos.dr;
    grad[side][1] += w_pos * g_pos.dtheta;

    for (int nb : *negs[side]) {
      if (nb < 0) continue;
      const double d_neg = hyperbolic_distance(pa, coords[static_cast<size_t>(nb)]);
      const DistancePartials g_neg = distance_partials(pa, coords[static_cast<size_t>(nb)]);
      const double w_neg = pair_loss_dd(d_neg, false, params);
      grad[side][0] += w_neg * g_neg.dr;
      grad[side][1] += w_neg * g_neg.dtheta;
    }
  }

  for (int side = 0; side < 2; ++side) {
    PolarPoint& pt = coords[static_cast<size_t>(endpoint[side])];
    const double sh = std::sinh(pt.r);
    pt.r = clamp_radius(pt.r - eta * grad[side][0], params);
    pt.theta = normalize_angle(pt.theta - eta * grad[side][1] / (sh * sh));
  }
}

double coherence_gradient(double theta_u, double sum_cos, double sum_sin, int module_size) {
  const double resultant = std::hypot(sum_cos, sum_sin);
  if (resultant < 1e-300 || module_size <= 0) return 0.0;
  return (-std::sin(theta_u) * sum_cos + std::cos(theta_u) * sum_sin) /
         (resultant * static_cast<double>(module_size));
}

bool coherence_step(EmbeddingState& state, int u, double sum_cos, double sum_sin,
                    int module_size, double eta, double lambda) {
  const double resultant = std::hypot(sum_cos, sum_sin);
  if (resultant < 1e-12) return false;  // balanced module, gradient undefined
  double& theta = state.coords[static_cast<size_t>(u)].theta;
  theta = normalize_angle(
      theta + eta * lambda * coherence_gradient(theta, sum_cos, sum_sin, module_size));
  return true;
}

NegativeSampler::NegativeSampler(const UGraph& g) {
  cum_.resize(static_cast<size_t>(g.num_nodes()));
  double acc = 0.0;
  for (int u = 0; u < g.num_nodes(); ++u) {
    acc += std::pow(static_cast<double>(g.degree(u)), 0.75);
    cum_[static_cast<size_t>(u)] = acc;
  }
  total_ = acc;
}

int NegativeSampler::draw(Rng& rng, int exclude_a, int exclude_b) const {
  if (total_ <= 0.0) return -1;
  for (int attempt = 0; attempt < 64; ++attempt) {
    const double x = rng.next_double() * total_;
    const auto it = std::upper_bound(cum_.begin(), cum_.end(), x);
    int u = static_cast<int>(it - cum_.begin());
    if (u >= static_cast<int>(cum_.size())) u = static_cast<int>(cum_.size()) - 1;
    if (u != exclude_a && u != exclude_b) return u;
  }
  // Deterministic fallback: first node with positive weight not excluded.
  for (int u = 0; u < static_cast<int>(cum_.size()); ++u) {
    const double w = cum_[static_cast<size_t>(u)] - (u > 0 ? cum_[static_cast<size_t>(u) - 1] : 0.0);
    if (w > 0.0 && u != exclude_a && u != exclude_b) return u;
  }
  return -1;
}

EpochStats sgd_epoch(EmbeddingState& state, const std::vector<std::pair<int, int>>& edges,
                     std::vector<int>& edge_order, const NegativeSampler& sampler, Rng& rng,
                     int negatives, double eta) {
  EpochStats stats;
  std::vector<int> negs_u(static_cast<size_t>(negatives));
  std::vector<int> negs_v(static_cast<size_t>(negatives));
  rng.shuffle(edge_order);
  for (int ei : edge_order) {
    const auto [u, v] = edges[static_cast<size_t>(ei)];
    for (int k = 0; k < negatives; ++k) negs_u[static_cast<size_t>(k)] = sampler.draw(rng, u, v);
    for (int k = 0; k < negatives; ++k) negs_v[static_cast<size_t>(k)] = sampler.draw(rng, u, v);

    const PolarPoint pu = state.coords[static_cast<size_t>(u)];
    const PolarPoint pv = state.coords[static_cast<size_t>(v)];
    stats.loss_sum += pair_loss(hyperbolic_distance(pu, pv), true, state.params);
    ++stats.samples;
    for (int nb : negs_u) {
      if (nb < 0) continue;
      stats.loss_sum += pair_loss(
          hyperbolic_distance(pu, state.coords[static_cast<size_t>(nb)]), false, state.params);
      ++stats.samples;
    }
    for (int nb : negs_v) {
      if (nb < 0) continue;
      stats.loss_sum += pair_loss(
          hyperbolic_distance(pv, state.coords[static_cast<size_t>(nb)]), false, state.params);
      ++stats.samples;
    }
    first_order_step(state, u, v, negs_u, negs_v, eta);
  }
  return stats;
}

void coherence_pass(EmbeddingState& state, const std::vector<int>& assignment, int num_modules,
                    std::vector<int>& node_order, Rng& rng, double eta, double lambda) {
  std::vector<double> sum_cos(static_cast<size_t>(num_modules), 0.0);
  std::vector<double> sum_sin(static_cast<size_t>(num_modules), 0.0);
  std::vector<int> msize(static_cast<size_t>(num_modules), 0);
  for (size_t u = 0; u < assignment.size(); ++u) {
    const size_t mu = static_cast<size_t>(assignment[u]);
    sum_cos[mu] += std::cos(state.coords[u].theta);
    sum_sin[mu] += std::sin(state.coords[u].theta);
    ++msize[mu];
  }
  rng.shuffle(node_order);
  for (int u : node_order) {
    const size_t mu = static_cast<size_t>(assignment[static_cast<size_t>(u)]);
    const double old_theta = state.coords[static_cast<size_t>(u)].theta;
    if (coherence_step(state, u, sum_cos[mu], sum_sin[mu], msize[mu], eta, lambda)) {
      const double new_theta = state.coords[static_cast<size_t>(u)].theta;
      sum_cos[mu] += std::cos(new_theta) - std::cos(old_theta);
      sum_sin[mu] += std::sin(new_theta) - std::sin(old_theta);
    }
  }
}

FitResult fit(const UGraph& g, const DiskParams& params, const TrainConfig& cfg) {
  if (g.num_edges() < 1) throw std::invalid_argument("fit: graph has no edges");
  const int n = g.num_nodes();

  FitResult out;
  out.disconnected_warning = !g.connected();

  // Initial communities and coordinates.
  Partition part = optimize(g, derive_seed(cfg.seed, 1)).partition;
  EmbeddingState state;
  state.params = params;
  state.coords.resize(static_cast<size_t>(n));
  for (int u = 0; u < n; ++u) state.coords[static_cast<size_t>(u)].r = radial_init(g.degree(u), params);
  const std::vector<double> theta0 = angular_init(part, g, derive_seed(cfg.seed, 2));
  for (int u = 0; u < n; ++u) state.coords[static_cast<size_t>(u)].theta = theta0[static_cast<size_t>(u)];
  state.partition = part.assignment();

  const auto edge_list = g.edges();
  std::vector<int> edge_order(edge_list.size());
  std::iota(edge_order.begin(), edge_order.end(), 0);
  std::vector<int> node_order(static_cast<size_t>(n));
  std::iota(node_order.begin(), node_order.end(), 0);

  NegativeSampler sampler(g);
  Rng rng(derive_seed(cfg.seed, 3));

  const int total_passes = std::max(1, cfg.outer_iters * cfg.epochs);
  int pass = 0;
  double eta = cfg.lr0;

  for (int iter = 0; iter < cfg.outer_iters; ++iter) {
    double loss_acc = 0.0;
    int64_t loss_cnt = 0;

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
      const double t = total_passes > 1 ? static_cast<double>(pass) / (total_passes - 1) : 0.0;
      eta = cfg.lr0 + (cfg.lr1 - cfg.lr0) * t;
      ++pass;
      const EpochStats stats =
          sgd_epoch(state, edge_list, edge_order, sampler, rng, cfg.negatives, eta);
      loss_acc += stats.loss_sum;
      loss_cnt += stats.samples;
    }

    coherence_pass(state, part.assignment(), part.num_modules(), node_order, rng, eta,
                   cfg.coherence_weight);

    // Re-detect communities on the geometry-weighted graph.
    std::vector<std::tuple<int, int, double>> wedges;
    wedges.reserve(edge_list.size());
    for (const auto& [u, v] : edge_list) {
      const double d = hyperbolic_distance(state.coords[static_cast<size_t>(u)],
                                           state.coords[static_cast<size_t>(v)]);
      wedges.emplace_back(u, v, connection_probability(d, params));
    }
    const std::vector<int> refreshed =
        optimize_flow(FlowGraph::from_weighted(n, wedges), derive_seed(cfg.seed, 100 + iter));
    part = Partition(g, refreshed);
    state.partition = part.assignment();
    state.iter = iter + 1;

    std::vector<double> angles(static_cast<size_t>(n));
    for (int u = 0; u < n; ++u) angles[static_cast<size_t>(u)] = state.coords[static_cast<size_t>(u)].theta;
    TraceRow row;
    row.iter = iter;
    row.loss = loss_cnt > 0 ? loss_acc / static_cast<double>(loss_cnt) : 0.0;
    row.mean_coherence = coherence(part, angles).mean;
    row.codelength_bits = codelength(g, part).bits;
    out.trace.push_back(row);
  }

  out.state = std::move(state);
  out.partition = std::move(part);
  return out;
}

}  // namespace hypermux
