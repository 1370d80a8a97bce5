#include "hypermux/mapeq.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "hypermux/rng.hpp"

namespace hypermux {

Partition::Partition(const UGraph& g, std::vector<int> assignment) {
  const int n = g.num_nodes();
  assignment_.resize(static_cast<size_t>(n));
  std::vector<int> relabel;
  relabel.assign(assignment.size() + 1, -1);
  int next = 0;
  for (int u = 0; u < n; ++u) {
    const int raw = assignment[static_cast<size_t>(u)];
    if (raw < 0 || static_cast<size_t>(raw) >= relabel.size())
      relabel.resize(static_cast<size_t>(raw) + 1, -1);
    if (relabel[static_cast<size_t>(raw)] == -1) relabel[static_cast<size_t>(raw)] = next++;
    assignment_[static_cast<size_t>(u)] = relabel[static_cast<size_t>(raw)];
  }
  cut_.assign(static_cast<size_t>(next), 0);
  vol_.assign(static_cast<size_t>(next), 0);
  for (int u = 0; u < n; ++u) {
    const int m = assignment_[static_cast<size_t>(u)];
    vol_[static_cast<size_t>(m)] += g.degree(u);
    for (int v : g.neighbors(u))
      if (assignment_[static_cast<size_t>(v)] != m) ++cut_[static_cast<size_t>(m)];
  }
#ifndef NDEBUG
  validate(g);
#endif
}

std::vector<int> Partition::module_members(int m) const {
  std::vector<int> out;
  for (int u = 0; u < num_nodes(); ++u)
    if (assignment_[static_cast<size_t>(u)] == m) out.push_back(u);
  return out;
}

void Partition::validate(const UGraph& g) const {
  std::vector<int64_t> cut2(cut_.size(), 0), vol2(vol_.size(), 0);
  for (int u = 0; u < g.num_nodes(); ++u) {
    const int m = assignment_[static_cast<size_t>(u)];
    vol2[static_cast<size_t>(m)] += g.degree(u);
    for (int v : g.neighbors(u))
      if (assignment_[static_cast<size_t>(v)] != m) ++cut2[static_cast<size_t>(m)];
  }
  assert(cut2 == cut_ && vol2 == vol_);
  (void)g;
}

Codelength codelength(const UGraph& g, const Partition& p) {
  Codelength out;
  const double d = static_cast<double>(g.total_degree());
  if (d <= 0.0) return out;

  double sum_q = 0.0, sum_plogp_q = 0.0, sum_plogp_qv = 0.0;
  for (int m = 0; m < p.num_modules(); ++m) {
    const double q = static_cast<double>(p.module_cut(m)) / d;
    const double v = static_cast<double>(p.module_vol(m)) / d;
    sum_q += q;
    sum_plogp_q += plogp(q);
    sum_plogp_qv += plogp(q + v);
  }
  double node_plogp = 0.0;
  for (int u = 0; u < g.num_nodes(); ++u) node_plogp += plogp(g.degree(u) / d);

  out.index_bits = plogp(sum_q) - sum_plogp_q;
  out.module_bits = sum_plogp_qv - sum_plogp_q - node_plogp;
  out.bits = out.index_bits + out.module_bits;
  return out;
}

namespace {

// One pass of seeded local moving; returns true if any node moved.
// Acceptance requires a codelength drop larger than eps; gain ties break
// toward the lowest candidate module id.
bool local_moving(const FlowGraph& g, FlowPartition& part, Rng& rng,
                  const OptimizeOptions& opts) {
  const int n = g.size();
  std::vector<int> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> scratch(static_cast<size_t>(n), 0.0);
  std::vector<int> touched;
  bool any = false;
  for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
    part.resync();
    rng.shuffle(order);
    bool moved = false;
    for (int u : order) {
      const int from = part.module_of(u);
      touched.clear();
      part.gather_links(u, scratch, touched);
      const double c_from = scratch[static_cast<size_t>(from)];

      int best_to = from;
      double best_gain = -opts.eps;
      for (int to : touched) {
        if (to == from) continue;
        const double gain = part.move_gain(u, to, c_from, scratch[static_cast<size_t>(to)]);
        if (gain < best_gain || (gain == best_gain && to < best_to)) {
          best_gain = gain;
          best_to = to;
        }
      }
      // Splitting off into an empty module is also a candidate move.
      if (part.module_size(from) > 1) {
        const int free = part.lowest_free_slot();
        if (free >= 0) {
          const double gain = part.move_gain(u, free, c_from, 0.0);
          if (gain < best_gain || (gain == best_gain && free < best_to)) {
            best_gain = gain;
            best_to = free;
          }
        }
      }
      for (int m : touched) scratch[static_cast<size_t>(m)] = 0.0;
      if (best_to != from) {
        part.move(u, best_to);
        moved = true;
      }
    }
    any = any || moved;
    if (!moved) break;
  }
  return any;
}

// Local moving on the current graph followed by repeated aggregation, all
// starting from the supplied flat assignment. Returns the improved flat
// assignment.
std::vector<int> louvain_round(const FlowGraph& flat, std::vector<int> assignment, Rng& rng,
                               const OptimizeOptions& opts) {
  FlowPartition part(flat, std::move(assignment));
  local_moving(flat, part, rng, opts);

  std::vector<int> composed = part.dense_assignment();
  FlowGraph level = flat.aggregate(composed, part.num_modules());
  while (level.size() > 1) {
    std::vector<int> singles(static_cast<size_t>(level.size()));
    std::iota(singles.begin(), singles.end(), 0);
    FlowPartition agg_part(level, std::move(singles));
    if (!local_moving(level, agg_part, rng, opts)) break;
    const std::vector<int> dense = agg_part.dense_assignment();
    for (int& m : composed) m = dense[static_cast<size_t>(m)];
    if (agg_part.num_modules() == level.size()) break;
    level = level.aggregate(dense, agg_part.num_modules());
  }
  return composed;
}

}  // namespace

std::vector<int> optimize_flow(const FlowGraph& f, uint64_t seed, const OptimizeOptions& opts) {
  const int n = f.size();
  if (n == 0) return {};
  Rng rng(seed);
  std::vector<int> assignment(static_cast<size_t>(n));
  std::iota(assignment.begin(), assignment.end(), 0);

  double best = FlowPartition(f, assignment).codelength();
  for (int outer = 0; outer < opts.max_outer_iters; ++outer) {
    std::vector<int> next = louvain_round(f, assignment, rng, opts);
    const double len = FlowPartition(f, next).codelength();
    if (len < best - opts.eps) {
      assignment = std::move(next);
      best = len;
    } else {
      break;
    }
  }
  return FlowPartition(f, assignment).dense_assignment();
}

OptimizeResult optimize(const UGraph& g, uint64_t seed, const OptimizeOptions& opts) {
  if (g.num_edges() < 1) throw std::invalid_argument("optimize: graph has no edges");
  const FlowGraph f = FlowGraph::from_graph(g);

  // Same loop as optimize_flow but with a per-round codelength trace.
  Rng rng(seed);
  std::vector<int> assignment(static_cast<size_t>(g.num_nodes()));
  std::iota(assignment.begin(), assignment.end(), 0);
  std::vector<double> trace;
  double best = FlowPartition(f, assignment).codelength();
  for (int outer = 0; outer < opts.max_outer_iters; ++outer) {
    std::vector<int> next = louvain_round(f, assignment, rng, opts);
    const double len = FlowPartition(f, next).codelength();
    if (len < best - opts.eps) {
      assignment = std::move(next);
      best = len;
      trace.push_back(len);
    } else {
      break;
    }
  }

  OptimizeResult out;
  out.partition = Partition(g, assignment);
  out.length = codelength(g, out.partition);
  out.trace = std::move(trace);
  return out;
}

int64_t predict_module_count(int64_t edges, double log_base) {
  const double logl = std::log(static_cast<double>(edges)) / std::log(log_base);
  return std::llround(static_cast<double>(edges) / logl);
}

BalanceDiagnostic balance_diagnostic(const UGraph& g, const Partition& p) {
  (void)g;
  BalanceDiagnostic out;
  const int m = p.num_modules();
  out.cut_plus_vol.reserve(static_cast<size_t>(m));
  double mean = 0.0;
  for (int i = 0; i < m; ++i) {
    const int64_t cv = p.module_cut(i) + p.module_vol(i);
    out.cut_plus_vol.push_back(cv);
    mean += static_cast<double>(cv);
    if (p.module_vol(i) == 0) {
      out.undefined_modules.push_back(i);
    } else {
      const double cond =
          static_cast<double>(p.module_cut(i)) / static_cast<double>(p.module_vol(i));
      out.nu = std::max(out.nu, cond);
    }
  }
  if (m == 0) return out;
  mean /= m;
  double var = 0.0;
  for (int64_t cv : out.cut_plus_vol) {
    const double dd = static_cast<double>(cv) - mean;
    var += dd * dd;
  }
  var /= m;
  out.dispersion = mean > 0.0 ? std::sqrt(var) / mean : 0.0;
  return out;
}

CoherenceResult coherence(const std::vector<int>& assignment, int num_modules,
                          const std::vector<double>& angles) {
  std::vector<double> sum_cos(static_cast<size_t>(num_modules), 0.0);
  std::vector<double> sum_sin(static_cast<size_t>(num_modules), 0.0);
  std::vector<int64_t> count(static_cast<size_t>(num_modules), 0);
  for (size_t u = 0; u < assignment.size(); ++u) {
    const size_t m = static_cast<size_t>(assignment[u]);
    sum_cos[m] += std::cos(angles[u]);
    sum_sin[m] += std::sin(angles[u]);
    ++count[m];
  }
  CoherenceResult out;
  double total = 0.0;
  int nonempty = 0;
  for (int m = 0; m < num_modules; ++m) {
    if (count[static_cast<size_t>(m)] == 0) {
      out.skipped_empty.push_back(m);
      continue;
    }
    const double xi = std::hypot(sum_cos[static_cast<size_t>(m)], sum_sin[static_cast<size_t>(m)]) /
                      static_cast<double>(count[static_cast<size_t>(m)]);
    out.per_module.push_back(xi > 1.0 ? 1.0 : xi);
    total += out.per_module.back();
    ++nonempty;
  }
  out.mean = nonempty > 0 ? total / nonempty : 0.0;
  return out;
}

CoherenceResult coherence(const Partition& p, const std::vector<double>& angles) {
  return coherence(p.assignment(), p.num_modules(), angles);
}

}  // namespace hypermux
