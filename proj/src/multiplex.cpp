#include "hypermux/multiplex.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "hypermux/errors.hpp"
#include "hypermux/flow.hpp"

namespace hypermux {

namespace {

// Signed circular gap from b to a, in (-pi, pi].
inline double circular_gap(double a, double b) { return std::remainder(a - b, kTwoPi); }

inline double circular_abs_diff(double a, double b) { return std::abs(circular_gap(a, b)); }

}  // namespace

std::vector<int> MultiplexNet::layers_of(int node) const {
  std::vector<int> out;
  for (int l = 0; l < num_layers(); ++l)
    if (present(l, node)) out.push_back(l);
  return out;
}

MultiplexNet MultiplexNet::from_layers(std::vector<UGraph> layers, std::vector<std::string> labels) {
  MultiplexNet net;
  net.labels = std::move(labels);
  net.presence.resize(layers.size());
  for (size_t l = 0; l < layers.size(); ++l) {
    auto& mask = net.presence[l];
    mask.assign(static_cast<size_t>(layers[l].num_nodes()), 0);
    for (int u = 0; u < layers[l].num_nodes(); ++u)
      if (layers[l].degree(u) > 0) mask[static_cast<size_t>(u)] = 1;
  }
  net.layers = std::move(layers);
  if (net.labels.empty() && !net.layers.empty()) {
    net.labels.resize(static_cast<size_t>(net.universe()));
    for (int u = 0; u < net.universe(); ++u) net.labels[static_cast<size_t>(u)] = std::to_string(u);
  }
  return net;
}

ViolationResult violation_ratio(const MultiplexNet& net, const std::vector<LayerEmbedding>& emb,
                                bool use_degree_filter, CnMode cn_mode) {
  const int n = net.universe();
  const int L = net.num_layers();

  std::vector<int> common;  // nodes present in >= 2 layers
  for (int u = 0; u < n; ++u) {
    int cnt = 0;
    for (int l = 0; l < L; ++l)
      if (net.present(l, u)) ++cnt;
    if (cnt >= 2) common.push_back(u);
  }
  if (common.size() < 2)
    throw NoComparablePairs("violation_ratio: fewer than two nodes shared by >= 2 layers");

  // Per-node aggregates over the layers where the node is present.
  std::vector<int64_t> cn(common.size(), 0);
  std::vector<int> dmax(common.size(), 0), dmin(common.size(), 0);
  std::vector<double> spread(common.size(), 0.0);  // max layer-pair |dtheta|
  for (size_t i = 0; i < common.size(); ++i) {
    const int u = common[i];
    const auto layer_ids = net.layers_of(u);

    if (cn_mode == CnMode::kCrossLayerIntersection) {
      std::vector<int> inter(net.layers[static_cast<size_t>(layer_ids[0])].neighbors(u).begin(),
                             net.layers[static_cast<size_t>(layer_ids[0])].neighbors(u).end());
      std::vector<int> tmp;
      for (size_t k = 1; k < layer_ids.size() && !inter.empty(); ++k) {
        const auto nbrs = net.layers[static_cast<size_t>(layer_ids[k])].neighbors(u);
        tmp.clear();
        std::set_intersection(inter.begin(), inter.end(), nbrs.begin(), nbrs.end(),
                              std::back_inserter(tmp));
        inter.swap(tmp);
      }
      cn[i] = static_cast<int64_t>(inter.size());
    } else {
      for (size_t a = 0; a < layer_ids.size(); ++a) {
        for (size_t b = a + 1; b < layer_ids.size(); ++b) {
          const auto na = net.layers[static_cast<size_t>(layer_ids[a])].neighbors(u);
          const auto nb = net.layers[static_cast<size_t>(layer_ids[b])].neighbors(u);
          std::vector<int> tmp;
          std::set_intersection(na.begin(), na.end(), nb.begin(), nb.end(),
                                std::back_inserter(tmp));
          cn[i] += static_cast<int64_t>(tmp.size());
        }
      }
    }

    dmax[i] = 0;
    dmin[i] = std::numeric_limits<int>::max();
    for (int l : layer_ids) {
      const int deg = net.layers[static_cast<size_t>(l)].degree(u);
      dmax[i] = std::max(dmax[i], deg);
      dmin[i] = std::min(dmin[i], deg);
    }
    for (size_t a = 0; a < layer_ids.size(); ++a)
      for (size_t b = a + 1; b < layer_ids.size(); ++b)
        spread[i] = std::max(
            spread[i],
            circular_abs_diff(
                emb[static_cast<size_t>(layer_ids[a])].coords[static_cast<size_t>(u)].theta,
                emb[static_cast<size_t>(layer_ids[b])].coords[static_cast<size_t>(u)].theta));
  }

  ViolationResult out;
  for (size_t i = 0; i < common.size(); ++i) {
    for (size_t j = 0; j < common.size(); ++j) {
      if (i == j) continue;
      if (cn[i] <= cn[j]) continue;
      if (use_degree_filter && !(dmax[i] < dmin[j])) continue;
      ++out.qualifying;
      if (!(spread[i] < spread[j])) ++out.violations;
    }
  }
  if (out.qualifying == 0)
    throw NoComparablePairs("violation_ratio: no qualifying pairs under the filters");
  out.ratio = static_cast<double>(out.violations) / static_cast<double>(out.qualifying);
  return out;
}

SupraGraph build_supra_graph(const MultiplexNet& net, const std::vector<LayerEmbedding>& emb,
                             double omega) {
  const int n = net.universe();
  const int L = net.num_layers();
  SupraGraph supra;
  supra.state_index.assign(static_cast<size_t>(L),
                           std::vector<int>(static_cast<size_t>(n), -1));
  for (int l = 0; l < L; ++l)
    for (int u = 0; u < n; ++u)
      if (net.present(l, u)) {
        supra.state_index[static_cast<size_t>(l)][static_cast<size_t>(u)] =
            static_cast<int>(supra.states.size());
        supra.states.emplace_back(u, l);
      }

  // Geometry-weighted neighbor distribution of u inside one layer, as
  // (state, prob) pairs; empty when u has no neighbors there. Weights
  // below 1e-12 of the row maximum are pruned: they carry no meaningful
  // flow but would couple otherwise-closed parts of the chain at
  // time scales no solver can resolve.
  auto layer_step = [&](int u, int l) {
    std::vector<std::pair<int, double>> dist;
    const auto& g = net.layers[static_cast<size_t>(l)];
    const auto& e = emb[static_cast<size_t>(l)];
    double w_max = 0.0;
    for (int v : g.neighbors(u)) {
      const double w = connection_probability(
          hyperbolic_distance(e.coords[static_cast<size_t>(u)], e.coords[static_cast<size_t>(v)]),
          e.params);
      if (w > 0.0) {
        dist.emplace_back(supra.state_index[static_cast<size_t>(l)][static_cast<size_t>(v)], w);
        w_max = std::max(w_max, w);
      }
    }
    double total = 0.0;
    size_t kept = 0;
    for (const auto& [s, w] : dist) {
      if (w >= w_max * 1e-12) {
        dist[kept++] = {s, w};
        total += w;
      }
    }
    dist.resize(kept);
    for (auto& [s, w] : dist) w /= total;
    return dist;
  };

  std::vector<char> isolated(static_cast<size_t>(n), 1);
  supra.out.resize(supra.states.size());
  for (size_t si = 0; si < supra.states.size(); ++si) {
    const auto [u, l] = supra.states[si];
    const auto layer_ids = net.layers_of(u);

    std::map<int, double> row;
    auto deposit = [&](double mass, int step_layer) {
      if (mass <= 0.0) return;
      const auto dist = layer_step(u, step_layer);
      if (dist.empty()) {
        row[static_cast<int>(si)] += mass;  // nowhere to go: stay put
      } else {
        for (const auto& [s, p] : dist) row[s] += mass * p;
      }
    };

    deposit(1.0 - omega, l);
    const double relax_share = omega / static_cast<double>(layer_ids.size());
    for (int lp : layer_ids) deposit(relax_share, lp);

    auto& out_row = supra.out[si];
    for (const auto& [to, p] : row)
      if (p > 0.0) out_row.emplace_back(to, p);
    if (net.layers[static_cast<size_t>(l)].degree(u) > 0) isolated[static_cast<size_t>(u)] = 0;
  }
  for (int u = 0; u < n; ++u) {
    bool has_state = false;
    for (int l = 0; l < L && !has_state; ++l)
      has_state = supra.state_index[static_cast<size_t>(l)][static_cast<size_t>(u)] >= 0;
    if (has_state && isolated[static_cast<size_t>(u)]) supra.isolated_nodes.push_back(u);
  }
  return supra;
}

namespace {

// Direct stationary solve for slow-mixing chains: (P^T - I) pi = 0 with
// sum(pi) = 1, dense LU with partial pivoting. Returns empty on a
// (numerically) singular system, e.g. several closed communicating
// classes.
std::vector<double> stationary_direct(const SupraGraph& supra) {
  const int s = static_cast<int>(supra.states.size());
  std::vector<std::vector<double>> a(static_cast<size_t>(s),
                                     std::vector<double>(static_cast<size_t>(s) + 1, 0.0));
  for (int i = 0; i < s; ++i) {
    for (const auto& [j, p] : supra.out[static_cast<size_t>(i)])
      a[static_cast<size_t>(j)][static_cast<size_t>(i)] += p;
    a[static_cast<size_t>(i)][static_cast<size_t>(i)] -= 1.0;
  }
  for (int j = 0; j < s; ++j) a[static_cast<size_t>(s - 1)][static_cast<size_t>(j)] = 1.0;
  a[static_cast<size_t>(s - 1)][static_cast<size_t>(s)] = 1.0;

  for (int col = 0; col < s; ++col) {
    int pivot = col;
    for (int row = col + 1; row < s; ++row)
      if (std::abs(a[static_cast<size_t>(row)][static_cast<size_t>(col)]) >
          std::abs(a[static_cast<size_t>(pivot)][static_cast<size_t>(col)]))
        pivot = row;
    if (std::abs(a[static_cast<size_t>(pivot)][static_cast<size_t>(col)]) < 1e-12) return {};
    std::swap(a[static_cast<size_t>(pivot)], a[static_cast<size_t>(col)]);
    for (int row = col + 1; row < s; ++row) {
      const double f = a[static_cast<size_t>(row)][static_cast<size_t>(col)] /
                       a[static_cast<size_t>(col)][static_cast<size_t>(col)];
      if (f == 0.0) continue;
      for (int k = col; k <= s; ++k)
        a[static_cast<size_t>(row)][static_cast<size_t>(k)] -=
            f * a[static_cast<size_t>(col)][static_cast<size_t>(k)];
    }
  }
  std::vector<double> pi(static_cast<size_t>(s), 0.0);
  for (int row = s - 1; row >= 0; --row) {
    double acc = a[static_cast<size_t>(row)][static_cast<size_t>(s)];
    for (int k = row + 1; k < s; ++k)
      acc -= a[static_cast<size_t>(row)][static_cast<size_t>(k)] * pi[static_cast<size_t>(k)];
    pi[static_cast<size_t>(row)] = acc / a[static_cast<size_t>(row)][static_cast<size_t>(row)];
  }
  double total = 0.0;
  for (double& v : pi) {
    if (v < 0.0) v = 0.0;  // roundoff
    total += v;
  }
  if (total <= 0.0) return {};
  for (double& v : pi) v /= total;
  return pi;
}

}  // namespace

std::vector<double> stationary_distribution(const SupraGraph& supra,
                                            const PowerIterOptions& opts) {
  const size_t s = supra.states.size();
  if (s == 0) return {};
  std::vector<double> pi(s, 1.0 / static_cast<double>(s));
  std::vector<double> next(s, 0.0);
  double residual = 0.0;
  for (int it = 0; it < opts.max_iters; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    for (size_t i = 0; i < s; ++i)
      for (const auto& [j, p] : supra.out[i]) next[static_cast<size_t>(j)] += pi[i] * p;
    // Lazy average keeps periodic (bipartite-ish) chains convergent.
    residual = 0.0;
    for (size_t i = 0; i < s; ++i) {
      next[i] = 0.5 * (next[i] + pi[i]);
      residual += std::abs(next[i] - pi[i]);
    }
    pi.swap(next);
    if (residual < opts.tol) return pi;
  }

  // Slow-mixing tail (near-decoupled walk weights): solve the stationary
  // system directly when the state space is small enough, checked against
  // the same tolerance.
  if (s <= 1024) {
    std::vector<double> direct = stationary_direct(supra);
    if (!direct.empty()) {
      std::fill(next.begin(), next.end(), 0.0);
      for (size_t i = 0; i < s; ++i)
        for (const auto& [j, p] : supra.out[i]) next[static_cast<size_t>(j)] += direct[i] * p;
      double check = 0.0;
      for (size_t i = 0; i < s; ++i) check += std::abs(next[i] - direct[i]);
      if (check < opts.tol) return direct;
    }
  }
  throw PowerIterationDivergence("stationary_distribution: power iteration did not converge",
                                 residual, opts.max_iters);
}

std::vector<int> multiplex_communities(const MultiplexNet& net,
                                       const std::vector<LayerEmbedding>& emb, double omega,
                                       uint64_t seed, const PowerIterOptions& pi_opts) {
  const SupraGraph supra = build_supra_graph(net, emb, omega);
  const std::vector<double> pi = stationary_distribution(supra, pi_opts);
  const FlowGraph flow = FlowGraph::from_directed(pi, supra.out);
  const std::vector<int> state_modules = optimize_flow(flow, seed);

  const int n = net.universe();
  std::vector<int> node_module(static_cast<size_t>(n), -1);
  std::map<int, int> votes;
  for (int u = 0; u < n; ++u) {
    votes.clear();
    for (int l = 0; l < net.num_layers(); ++l) {
      const int si = supra.state_index[static_cast<size_t>(l)][static_cast<size_t>(u)];
      if (si >= 0) votes[state_modules[static_cast<size_t>(si)]] += 1;
    }
    if (votes.empty()) continue;  // absent everywhere; assigned below
    int best = -1, best_votes = -1;
    for (const auto& [m, c] : votes) {
      if (c > best_votes) {  // map order: ties resolve to lowest module id
        best = m;
        best_votes = c;
      }
    }
    node_module[static_cast<size_t>(u)] = best;
  }

  // Dense relabel; stateless nodes become fresh singleton modules.
  std::vector<int> relabel(static_cast<size_t>(supra.states.size()) + 1, -1);
  int next = 0;
  for (int u = 0; u < n; ++u) {
    const int raw = node_module[static_cast<size_t>(u)];
    if (raw < 0) continue;
    if (relabel[static_cast<size_t>(raw)] == -1) relabel[static_cast<size_t>(raw)] = next++;
    node_module[static_cast<size_t>(u)] = relabel[static_cast<size_t>(raw)];
  }
  for (int u = 0; u < n; ++u)
    if (node_module[static_cast<size_t>(u)] < 0) node_module[static_cast<size_t>(u)] = next++;
  return node_module;
}

namespace {

// Layer-local view used by the multiplex driver: induced subgraph of the
// present nodes plus everything one embedding round needs.
struct LayerRun {
  UGraph graph;
  std::vector<int> to_universe;
  std::vector<int> from_universe;  // universe -> local or -1
  EmbeddingState state;
  std::vector<int> assignment;  // local module per local node
  int num_modules = 0;
  std::vector<std::pair<int, int>> edges;
  std::vector<int> edge_order;
  std::vector<int> node_order;
  NegativeSampler sampler{UGraph(0)};
  Rng rng{0};
};

}  // namespace

MultiplexEmbedding fit_multiplex(const MultiplexNet& net, const std::vector<DiskParams>& params,
                                 const TrainConfig& cfg, double omega, double lambda_cross) {
  const int L = net.num_layers();
  const int n = net.universe();
  if (L == 0) throw std::invalid_argument("fit_multiplex: no layers");
  if (static_cast<int>(params.size()) != L)
    throw std::invalid_argument("fit_multiplex: one DiskParams per layer required");

  MultiplexEmbedding out;
  out.layers.resize(static_cast<size_t>(L));
  for (int l = 0; l < L; ++l) {
    out.layers[static_cast<size_t>(l)].params = params[static_cast<size_t>(l)];
    out.layers[static_cast<size_t>(l)].coords.assign(
        static_cast<size_t>(n), PolarPoint{params[static_cast<size_t>(l)].R, 0.0});
  }

  // Single-layer input follows the single-layer pipeline exactly
  // (lambda_cross has nothing to align).
  if (L == 1) {
    std::vector<int> to_universe;
    std::vector<int> from_universe(static_cast<size_t>(n), -1);
    for (int u = 0; u < n; ++u)
      if (net.present(0, u)) {
        from_universe[static_cast<size_t>(u)] = static_cast<int>(to_universe.size());
        to_universe.push_back(u);
      }
    std::vector<std::pair<int, int>> edges;
    for (const auto& [u, v] : net.layers[0].edges())
      edges.emplace_back(from_universe[static_cast<size_t>(u)], from_universe[static_cast<size_t>(v)]);
    const UGraph induced = UGraph::from_edges(static_cast<int>(to_universe.size()), edges);
    const FitResult fitres = fit(induced, params[0], cfg);
    out.partition.assign(static_cast<size_t>(n), -1);
    int next = 0;
    std::vector<int> relabel(static_cast<size_t>(induced.num_nodes()) + 1, -1);
    for (size_t i = 0; i < to_universe.size(); ++i) {
      out.layers[0].coords[static_cast<size_t>(to_universe[i])] = fitres.state.coords[i];
      const int raw = fitres.partition.module_of(static_cast<int>(i));
      if (relabel[static_cast<size_t>(raw)] == -1) relabel[static_cast<size_t>(raw)] = next++;
      out.partition[static_cast<size_t>(to_universe[i])] = relabel[static_cast<size_t>(raw)];
    }
    for (int u = 0; u < n; ++u)
      if (out.partition[static_cast<size_t>(u)] < 0) out.partition[static_cast<size_t>(u)] = next++;
    return out;
  }

  // Per-layer initialization mirrors the single-layer pipeline.
  std::vector<LayerRun> runs(static_cast<size_t>(L));
  for (int l = 0; l < L; ++l) {
    LayerRun& run = runs[static_cast<size_t>(l)];
    run.from_universe.assign(static_cast<size_t>(n), -1);
    for (int u = 0; u < n; ++u)
      if (net.present(l, u)) {
        run.from_universe[static_cast<size_t>(u)] = static_cast<int>(run.to_universe.size());
        run.to_universe.push_back(u);
      }
    std::vector<std::pair<int, int>> edges;
    for (const auto& [u, v] : net.layers[static_cast<size_t>(l)].edges())
      edges.emplace_back(run.from_universe[static_cast<size_t>(u)],
                         run.from_universe[static_cast<size_t>(v)]);
    run.graph = UGraph::from_edges(static_cast<int>(run.to_universe.size()), edges);
    if (run.graph.num_edges() < 1)
      throw std::invalid_argument("fit_multiplex: layer " + std::to_string(l) + " has no edges");

    const uint64_t layer_seed = derive_seed(cfg.seed, 7000 + static_cast<uint64_t>(l));
    const Partition part = optimize(run.graph, derive_seed(layer_seed, 1)).partition;
    run.assignment = part.assignment();
    run.num_modules = part.num_modules();

    run.state.params = params[static_cast<size_t>(l)];
    run.state.coords.resize(static_cast<size_t>(run.graph.num_nodes()));
    for (int u = 0; u < run.graph.num_nodes(); ++u)
      run.state.coords[static_cast<size_t>(u)].r =
          radial_init(run.graph.degree(u), run.state.params);
    const std::vector<double> theta0 = angular_init(part, run.graph, derive_seed(layer_seed, 2));
    for (int u = 0; u < run.graph.num_nodes(); ++u)
      run.state.coords[static_cast<size_t>(u)].theta = theta0[static_cast<size_t>(u)];

    run.edges = run.graph.edges();
    run.edge_order.resize(run.edges.size());
    std::iota(run.edge_order.begin(), run.edge_order.end(), 0);
    run.node_order.resize(static_cast<size_t>(run.graph.num_nodes()));
    std::iota(run.node_order.begin(), run.node_order.end(), 0);
    run.sampler = NegativeSampler(run.graph);
    run.rng = Rng(derive_seed(layer_seed, 3));
  }

  auto scatter = [&]() {
    for (int l = 0; l < L; ++l) {
      const LayerRun& run = runs[static_cast<size_t>(l)];
      for (size_t i = 0; i < run.to_universe.size(); ++i)
        out.layers[static_cast<size_t>(l)].coords[static_cast<size_t>(run.to_universe[i])] =
            run.state.coords[i];
    }
  };

  const int total_passes = std::max(1, cfg.outer_iters * cfg.epochs);
  int pass = 0;
  double eta = cfg.lr0;
  std::vector<int> shared(static_cast<size_t>(n), 0);

  for (int iter = 0; iter < cfg.outer_iters; ++iter) {
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
      const double t = total_passes > 1 ? static_cast<double>(pass) / (total_passes - 1) : 0.0;
      eta = cfg.lr0 + (cfg.lr1 - cfg.lr0) * t;
      ++pass;
      for (auto& run : runs)
        sgd_epoch(run.state, run.edges, run.edge_order, run.sampler, run.rng, cfg.negatives, eta);
    }
    for (auto& run : runs)
      coherence_pass(run.state, run.assignment, run.num_modules, run.node_order, run.rng, eta,
                     cfg.coherence_weight);

    // Shared community refresh through the supra walk.
    scatter();
    shared = multiplex_communities(net, out.layers, omega,
                                   derive_seed(cfg.seed, 100 + static_cast<uint64_t>(iter)));
    for (auto& run : runs) {
      std::vector<int> local(static_cast<size_t>(run.graph.num_nodes()));
      for (size_t i = 0; i < run.to_universe.size(); ++i)
        local[i] = shared[static_cast<size_t>(run.to_universe[i])];
      const Partition part(run.graph, std::move(local));
      run.assignment = part.assignment();
      run.num_modules = part.num_modules();
      run.state.partition = run.assignment;
      run.state.iter = iter + 1;
    }

    // Cross-layer angular alignment toward each node's circular mean;
    // radial coordinates stay untouched.
    for (int u = 0; u < n; ++u) {
      double sc = 0.0, ss = 0.0;
      int cnt = 0;
      for (const auto& run : runs) {
        const int i = run.from_universe[static_cast<size_t>(u)];
        if (i < 0) continue;
        sc += std::cos(run.state.coords[static_cast<size_t>(i)].theta);
        ss += std::sin(run.state.coords[static_cast<size_t>(i)].theta);
        ++cnt;
      }
      if (cnt < 2 || std::hypot(sc, ss) < 1e-12) continue;
      const double mean = std::atan2(ss, sc);
      for (auto& run : runs) {
        const int i = run.from_universe[static_cast<size_t>(u)];
        if (i < 0) continue;
        double& theta = run.state.coords[static_cast<size_t>(i)].theta;
        theta = normalize_angle(theta + lambda_cross * circular_gap(mean, theta));
      }
    }
  }

  scatter();
  out.partition = shared;
  return out;
}

}  // namespace hypermux
