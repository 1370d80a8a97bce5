#pragma once
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hypermux/embed.hpp"
#include "hypermux/geometry.hpp"
#include "hypermux/graph.hpp"

namespace hypermux {

// Aligned layers over a shared node universe. A node id means the same
// entity in every layer where present (presence = touched by an edge in
// that layer, unless set explicitly).
struct MultiplexNet {
  std::vector<UGraph> layers;                   // each over universe ids
  std::vector<std::vector<uint8_t>> presence;   // [layer][node]
  std::vector<std::string> labels;              // universe labels

  int universe() const { return layers.empty() ? 0 : layers.front().num_nodes(); }
  int num_layers() const { return static_cast<int>(layers.size()); }
  bool present(int layer, int node) const {
    return presence[static_cast<size_t>(layer)][static_cast<size_t>(node)] != 0;
  }
  std::vector<int> layers_of(int node) const;

  // presence derived from edge incidence.
  static MultiplexNet from_layers(std::vector<UGraph> layers, std::vector<std::string> labels = {});
};

// Per-layer coordinates over universe ids plus the layer's disk.
struct LayerEmbedding {
  std::vector<PolarPoint> coords;  // universe-sized; meaningful where present
  DiskParams params;
};

struct MultiplexEmbedding {
  std::vector<LayerEmbedding> layers;
  std::vector<int> partition;  // shared node-level modules, dense ids
};

// Aggregation rule for the node-level cross-layer common-neighbor count
// used by the violation statistic.
enum class CnMode {
  kCrossLayerIntersection,  // |intersection of N_l(u) over layers of u|
  kLayerPairSum,            // sum over layer pairs of |N_l1(u) ^ N_l2(u)|
};

struct ViolationResult {
  double ratio = 0.0;
  int64_t violations = 0;
  int64_t qualifying = 0;
};

// Ordered pairs (u, v) of nodes present in >= 2 layers qualify when
// CN(u) > CN(v) and, with the degree filter, max_l deg_l(u) < min_l
// deg_l(v); a qualifying pair is violating unless the angular spread
// satisfies max-layer-pair |dtheta|(u) < |dtheta|(v). Throws
// NoComparablePairs with fewer than two such nodes.
ViolationResult violation_ratio(const MultiplexNet& net, const std::vector<LayerEmbedding>& emb,
                                bool use_degree_filter,
                                CnMode cn_mode = CnMode::kCrossLayerIntersection);

// Row-stochastic state graph of the relaxed geometry-guided walk: states
// (node, layer); with probability 1-omega the walker steps inside its
// layer by Fermi-Dirac edge weights, with probability omega it first
// relaxes to a uniformly random layer containing the node. Steps with no
// available neighbor fall back to staying put, so rows always sum to 1.
struct SupraGraph {
  std::vector<std::pair<int, int>> states;                // (node, layer)
  std::vector<std::vector<std::pair<int, double>>> out;   // row-stochastic
  std::vector<std::vector<int>> state_index;              // [layer][node] -> state or -1
  std::vector<int> isolated_nodes;                        // flagged: no edges anywhere
};
SupraGraph build_supra_graph(const MultiplexNet& net, const std::vector<LayerEmbedding>& emb,
                             double omega);

struct PowerIterOptions {
  double tol = 1e-10;  // L1 residual
  int max_iters = 10000;
};

// Stationary distribution of the supra walk by (lazy) power iteration;
// throws PowerIterationDivergence with the residual on failure.
std::vector<double> stationary_distribution(const SupraGraph& supra,
                                            const PowerIterOptions& opts = {});

// Map-equation modules of the supra walk projected to node level by
// majority vote over a node's states (ties to the lowest module id).
std::vector<int> multiplex_communities(const MultiplexNet& net,
                                       const std::vector<LayerEmbedding>& emb, double omega,
                                       uint64_t seed, const PowerIterOptions& pi_opts = {});

// Alternates per-layer embedding rounds with multiplex community refresh
// and a cross-layer angular alignment step of weight lambda_cross (radial
// coordinates are never touched by alignment). Single-layer input
// delegates to the single-layer pipeline exactly.
MultiplexEmbedding fit_multiplex(const MultiplexNet& net, const std::vector<DiskParams>& params,
                                 const TrainConfig& cfg, double omega, double lambda_cross);

}  // namespace hypermux
