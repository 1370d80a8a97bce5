#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "hypermux/embed.hpp"
#include "hypermux/geometry.hpp"
#include "hypermux/graph.hpp"

namespace hypermux {

struct PearsonResult {
  double value = 0.0;
  bool defined = false;  // false when either distance vector has zero variance
};

// Pearson correlation of the n(n-1)/2 pairwise hyperbolic distances of two
// coordinate sets over the same nodes (n >= 3). Invariant under rotation
// and reflection of either argument. The default path reduces over a fixed
// chunk grid in parallel; the serial variant is the reference kept for
// testing and benchmarking.
PearsonResult hd_correlation(const std::vector<PolarPoint>& truth,
                             const std::vector<PolarPoint>& inferred);
PearsonResult hd_correlation_serial(const std::vector<PolarPoint>& truth,
                                    const std::vector<PolarPoint>& inferred);

// Rank-comparison AUC with ties counted 0.5 (equals the Mann-Whitney
// statistic).
double auc_from_scores(const std::vector<double>& positives, const std::vector<double>& negatives);

enum class Scorer { kCommonNeighbors, kJaccard, kAdamicAdar, kHyperbolic };
Scorer scorer_from_name(const std::string& name);  // throws DataError

struct LinkPredictionConfig {
  Scorer scorer = Scorer::kCommonNeighbors;
  double holdout = 0.1;  // fraction of edges removed, in (0, 0.5]
  // Hyperbolic scorer: disk parameters of the fitted embedding; alpha <= 0
  // means estimate from the training degree sequence.
  double alpha = 0.0;
  double temperature = 0.5;
  double C = 0.0;
  TrainConfig train;
};

struct LinkPredictionResult {
  double auc = 0.0;
  int64_t removed_edges = 0;
  bool connectivity_warning = false;  // removal kept fragmenting the graph
};

// Removes ceil(holdout |E|) edges uniformly (resampling the removal up to
// 100 times if it fragments the graph), samples an equal number of
// distinct non-edges, scores both sides on the remaining graph, and
// returns the AUC. Throws NonEdgePoolExhausted when the graph has too few
// non-edges.
LinkPredictionResult link_prediction(const UGraph& g, const LinkPredictionConfig& cfg,
                                     uint64_t seed);

// Similarity scores on a fixed graph (exposed for tests and the CLI).
double cn_score(const UGraph& g, int u, int v);
double jaccard_score(const UGraph& g, int u, int v);
double adamic_adar_score(const UGraph& g, int u, int v);

enum class Clusterer { kInfomap, kRandomAssign };

struct CoherenceTableRow {
  int n = 0;
  int instances = 0;
  double mean_coherence = 0.0;
};

// Mean ground-truth-angle coherence of detected modules on fresh disk
// samples, per network size. The random-assignment control reshuffles the
// detected partition's module labels uniformly. Instances run in parallel
// with per-instance seeds.
std::vector<CoherenceTableRow> coherence_table(const std::vector<int>& sizes, Clusterer clusterer,
                                               int instances, double alpha, double C, double T,
                                               uint64_t seed);

struct ResolutionRow {
  std::string name;
  int nodes = 0;
  int64_t edges = 0;
  int detected = 0;
  int64_t predicted = 0;  // module-count scale E / log2 E
};
ResolutionRow resolution_row(const UGraph& g, const std::string& name, uint64_t seed);

}  // namespace hypermux
