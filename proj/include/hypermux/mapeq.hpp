#pragma once
#include <cstdint>
#include <vector>

#include "hypermux/flow.hpp"
#include "hypermux/graph.hpp"

namespace hypermux {

// Map-equation value in bits per walker step, split into the index-level
// and module-level codebook terms (value = index + module).
struct Codelength {
  double bits = 0.0;
  double index_bits = 0.0;
  double module_bits = 0.0;
};

// Node -> module assignment with dense module ids and cached per-module
// cut/volume. Immutable once built.
class Partition {
 public:
  Partition() = default;
  // Relabels arbitrary module ids to dense 0..m-1 (first-appearance order)
  // and fills the caches.
  Partition(const UGraph& g, std::vector<int> assignment);

  int num_nodes() const { return static_cast<int>(assignment_.size()); }
  int num_modules() const { return static_cast<int>(cut_.size()); }
  int module_of(int v) const { return assignment_[static_cast<size_t>(v)]; }
  const std::vector<int>& assignment() const { return assignment_; }
  int64_t module_cut(int m) const { return cut_[static_cast<size_t>(m)]; }
  int64_t module_vol(int m) const { return vol_[static_cast<size_t>(m)]; }
  std::vector<int> module_members(int m) const;

  // Caches equal brute-force recomputation; asserted in debug builds.
  void validate(const UGraph& g) const;

 private:
  std::vector<int> assignment_;
  std::vector<int64_t> cut_, vol_;
};

// Full two-level map equation for an undirected unweighted graph with
// degree-proportional visit rates and exit rates cut(i)/d. Includes the
// partition-independent node-rate entropy, so values are comparable with
// reference Infomap output.
Codelength codelength(const UGraph& g, const Partition& p);

struct OptimizeOptions {
  double eps = 1e-10;      // required codelength gain per accepted move, bits
  int max_outer_iters = 100;
  int max_sweeps = 100;    // local-move sweeps per level
};

struct OptimizeResult {
  Partition partition;
  Codelength length;
  std::vector<double> trace;  // codelength after each outer iteration
};

// Two-phase Louvain (seeded local moving + module aggregation), repeated
// until no outer round improves by more than eps. Deterministic in seed;
// move-gain ties break toward the lowest candidate module id.
OptimizeResult optimize(const UGraph& g, uint64_t seed, const OptimizeOptions& opts = {});

// Same optimizer over arbitrary flows (strength-weighted graphs, the
// multiplex supra walk). Returns a dense assignment.
std::vector<int> optimize_flow(const FlowGraph& f, uint64_t seed,
                               const OptimizeOptions& opts = {});

// Intrinsic module-count scale of the map equation for a graph with
// `edges` links. Base 2 matches the reported detection-limit column;
// the natural-log variant is exposed through log_base.
int64_t predict_module_count(int64_t edges, double log_base = 2.0);

// Edge-balance view of a partition: cut(i)+vol(i) per module, their
// coefficient of variation, and nu = max_i cut(i)/vol(i). Modules of zero
// volume are flagged and excluded from nu.
struct BalanceDiagnostic {
  std::vector<int64_t> cut_plus_vol;
  double dispersion = 0.0;
  double nu = 0.0;
  std::vector<int> undefined_modules;
};
BalanceDiagnostic balance_diagnostic(const UGraph& g, const Partition& p);

// Angular coherence xi_g of each module: resultant length of the members'
// unit vectors, in [0, 1]. Empty modules are skipped and flagged.
struct CoherenceResult {
  std::vector<double> per_module;
  std::vector<int> skipped_empty;
  double mean = 0.0;  // unweighted over nonempty modules
};
CoherenceResult coherence(const std::vector<int>& assignment, int num_modules,
                          const std::vector<double>& angles);
CoherenceResult coherence(const Partition& p, const std::vector<double>& angles);

}  // namespace hypermux
