#pragma once
#include <cmath>
#include <cstdint>
#include <set>
#include <tuple>
#include <utility>
#include <vector>

#include "hypermux/graph.hpp"

namespace hypermux {

// x * log2(x) with the 0 log 0 := 0 convention. Codelengths are in bits.
inline double plogp(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

// Node-level stationary flows of a random walk, the common input to the
// two-level map equation. Undirected graphs induce degree- (or strength-)
// proportional visit rates; the multiplex supra walk supplies rates from
// power iteration. Edges store the combined two-way flow
// c(u,v) = F(u->v) + F(v->u) for u != v; self-flow never leaves the node
// and is excluded from exit_flow.
struct FlowGraph {
  std::vector<double> visit;                             // p_alpha, sums to 1
  std::vector<double> exit_flow;                         // flow to other nodes
  std::vector<std::vector<std::pair<int, double>>> adj;  // symmetric (v, c_uv)

  int size() const { return static_cast<int>(visit.size()); }

  static FlowGraph from_graph(const UGraph& g);
  // Undirected weighted; self-loops allowed, their weight counts once
  // toward strength and never toward exit.
  static FlowGraph from_weighted(int n, const std::vector<std::tuple<int, int, double>>& wedges);
  // Directed row-stochastic transitions with given visit rates:
  // F(u->v) = visit[u] * prob, aggregated into the symmetric c weights.
  static FlowGraph from_directed(const std::vector<double>& visit,
                                 const std::vector<std::vector<std::pair<int, double>>>& out);

  // Collapses modules to single nodes; exit/visit/edge flows aggregate
  // exactly, so partition-dependent codelength terms are preserved.
  FlowGraph aggregate(const std::vector<int>& dense_assignment, int num_modules) const;
};

// Per-module exit/visit bookkeeping for the two-level map equation,
// maintained incrementally under single-node moves. Module ids live in
// slots [0, n); empty slots are reusable.
class FlowPartition {
 public:
  FlowPartition(const FlowGraph& g, std::vector<int> assignment);

  // Full two-level codelength in bits, incrementally maintained.
  double codelength() const;
  // From-scratch recomputation (drift control and tests).
  double codelength_fresh() const;

  // L(after) - L(before) for moving u into `to`, given u's combined flow
  // to its current module (excluding itself) and to the target.
  double move_gain(int u, int to, double c_from, double c_to) const;
  void move(int u, int to);

  // Combined flow weight between u and the members of each module it
  // touches; results appended as (slot, c) pairs, deterministic order.
  void gather_links(int u, std::vector<double>& scratch, std::vector<int>& touched) const;

  int module_of(int u) const { return assignment_[static_cast<size_t>(u)]; }
  const std::vector<int>& assignment() const { return assignment_; }
  std::vector<int> dense_assignment() const;  // relabel 0..m-1, first appearance
  int num_modules() const { return num_modules_; }
  int size() const { return static_cast<int>(assignment_.size()); }

  double module_exit(int slot) const { return mod_exit_[static_cast<size_t>(slot)]; }
  double module_visit(int slot) const { return mod_visit_[static_cast<size_t>(slot)]; }
  int module_size(int slot) const { return mod_size_[static_cast<size_t>(slot)]; }
  // Lowest empty slot, or -1. Candidate target for split moves.
  int lowest_free_slot() const;

  // Refresh aggregate sums from per-module stats; called once per sweep
  // to keep incremental float drift below the move-acceptance threshold.
  void resync();

  // Index-level and module-level entropy components (bits); their sum is
  // codelength().
  std::pair<double, double> components() const;

 private:
  const FlowGraph* g_;
  std::vector<int> assignment_;
  std::vector<double> mod_exit_, mod_visit_;
  std::vector<int> mod_size_;
  int num_modules_ = 0;
  std::set<int> free_slots_;
  double sum_exit_ = 0.0;
  double sum_plogp_exit_ = 0.0;
  double sum_plogp_exit_visit_ = 0.0;
  double node_plogp_ = 0.0;  // partition-independent
};

}  // namespace hypermux
