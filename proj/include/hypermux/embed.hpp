#pragma once
#include <cstdint>
#include <span>
#include <vector>

#include "hypermux/geometry.hpp"
#include "hypermux/graph.hpp"
#include "hypermux/mapeq.hpp"
#include "hypermux/rng.hpp"

namespace hypermux {

// Radial floor; coordinates are projected into [kMinRadius, R] after
// every update.
inline constexpr double kMinRadius = 1e-6;

struct TrainConfig {
  int outer_iters = 10;  // alternating rounds
  int epochs = 5;        // edge passes per round
  double lr0 = 0.001;    // learning rate, linear decay lr0 -> lr1
  double lr1 = 0.0001;
  int negatives = 5;              // per endpoint per edge visit
  double coherence_weight = 0.1;  // lambda
  uint64_t seed = 0;
};

struct EmbeddingState {
  std::vector<PolarPoint> coords;
  DiskParams params;
  std::vector<int> partition;  // current module per node
  int iter = 0;
};

// Degree-based closed-form radius, clamped to [kMinRadius, R]. Isolated
// nodes are pinned to the rim.
double radial_init(int degree, const DiskParams& params);

// Community-arc layout: modules are chained around the circle greedily by
// relative conductance to the last placed module (largest volume first),
// each receiving an arc proportional to its volume; nodes land uniformly
// inside their arc with a 2% padding split between adjacent arcs.
std::vector<double> angular_init(const Partition& p, const UGraph& g, uint64_t seed);

// Negative log-likelihood of a single Fermi-Dirac sample and its
// derivative with respect to distance: (1 - sigma(x))/(2T) for positive
// samples, -sigma(x)/(2T) for negatives, with x = (R - d)/(2T).
double pair_loss(double d, bool positive, const DiskParams& params);
double pair_loss_dd(double d, bool positive, const DiskParams& params);

// One RSGD update of the edge (u, v) with per-endpoint negatives. All
// gradients are evaluated at the pre-update coordinates; the angular step
// is rescaled by 1/sinh^2(r) and coordinates are projected afterwards.
// Coincident pairs contribute the (0, 0) subgradient.
void first_order_step(EmbeddingState& state, int u, int v, std::span<const int> negatives_u,
                      std::span<const int> negatives_v, double eta);

// d xi_g / d theta_u where the unit-vector sums over u's module include u
// itself. Zero when the module's resultant vector vanishes.
double coherence_gradient(double theta_u, double sum_cos, double sum_sin, int module_size);

// Ascent step on module coherence; returns false when skipped because the
// resultant vanishes.
bool coherence_step(EmbeddingState& state, int u, double sum_cos, double sum_sin,
                    int module_size, double eta, double lambda);

// deg^{3/4} negative-sampling table.
class NegativeSampler {
 public:
  explicit NegativeSampler(const UGraph& g);
  // Draws a node != exclude_a, exclude_b; -1 when no candidate exists.
  int draw(Rng& rng, int exclude_a, int exclude_b) const;

 private:
  std::vector<double> cum_;
  double total_ = 0.0;
};

// One shuffled pass over the edge list with negative sampling; returns the
// summed sample loss and sample count. Shared by the single-layer and
// multiplex drivers so their update streams stay identical in shape.
struct EpochStats {
  double loss_sum = 0.0;
  int64_t samples = 0;
};
EpochStats sgd_epoch(EmbeddingState& state, const std::vector<std::pair<int, int>>& edges,
                     std::vector<int>& edge_order, const NegativeSampler& sampler, Rng& rng,
                     int negatives, double eta);

// One shuffled coherence-ascent pass; module unit-vector sums are kept
// current as angles move.
void coherence_pass(EmbeddingState& state, const std::vector<int>& assignment, int num_modules,
                    std::vector<int>& node_order, Rng& rng, double eta, double lambda);

struct TraceRow {
  int iter = 0;
  double loss = 0.0;            // mean sample NLL over the round's epochs
  double mean_coherence = 0.0;  // mean xi over current modules
  double codelength_bits = 0.0;
};

struct FitResult {
  EmbeddingState state;
  Partition partition;
  std::vector<TraceRow> trace;
  bool disconnected_warning = false;
};

// Full single-layer pipeline: map-equation partition, degree radii,
// community-arc angles, then alternating RSGD epochs, coherence passes,
// and re-detection on the geometry-weighted graph. Deterministic in
// (g, params, cfg).
FitResult fit(const UGraph& g, const DiskParams& params, const TrainConfig& cfg);

}  // namespace hypermux
