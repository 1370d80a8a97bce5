#include "hypermux/flow.hpp"

#include <algorithm>
#include <cstdint>
#include <unordered_map>

namespace hypermux {

namespace {

inline double clamp0(double x) { return x > 0.0 ? x : 0.0; }

// Packs an unordered node pair for cross-weight accumulation.
inline uint64_t pair_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<uint64_t>(static_cast<uint32_t>(a)) << 32) | static_cast<uint32_t>(b);
}

void build_sorted_adj(FlowGraph& f, const std::unordered_map<uint64_t, double>& cross) {
  for (const auto& [key, c] : cross) {
    if (c <= 0.0) continue;  // zero flow carries no codelength signal
    const int a = static_cast<int>(key >> 32);
    const int b = static_cast<int>(key & 0xffffffffu);
    f.adj[static_cast<size_t>(a)].emplace_back(b, c);
    f.adj[static_cast<size_t>(b)].emplace_back(a, c);
  }
  for (auto& list : f.adj) std::sort(list.begin(), list.end());
}

}  // namespace

FlowGraph FlowGraph::from_graph(const UGraph& g) {
  const int n = g.num_nodes();
  FlowGraph f;
  f.visit.assign(static_cast<size_t>(n), 0.0);
  f.exit_flow.assign(static_cast<size_t>(n), 0.0);
  f.adj.resize(static_cast<size_t>(n));
  const double d = static_cast<double>(g.total_degree());
  if (d <= 0.0) return f;
  for (int u = 0; u < n; ++u) {
    const double p = g.degree(u) / d;
    f.visit[static_cast<size_t>(u)] = p;
    f.exit_flow[static_cast<size_t>(u)] = p;
    auto& list = f.adj[static_cast<size_t>(u)];
    list.reserve(static_cast<size_t>(g.degree(u)));
    for (int v : g.neighbors(u)) list.emplace_back(v, 2.0 / d);
  }
  return f;
}

FlowGraph FlowGraph::from_weighted(int n,
                                   const std::vector<std::tuple<int, int, double>>& wedges) {
  std::vector<double> strength(static_cast<size_t>(n), 0.0);
  std::vector<double> self_weight(static_cast<size_t>(n), 0.0);
  std::unordered_map<uint64_t, double> cross;
  cross.reserve(wedges.size() * 2);
  for (const auto& [u, v, w] : wedges) {
    if (w <= 0.0) continue;
    if (u == v) {
      strength[static_cast<size_t>(u)] += w;
      self_weight[static_cast<size_t>(u)] += w;
    } else {
      strength[static_cast<size_t>(u)] += w;
      strength[static_cast<size_t>(v)] += w;
      cross[pair_key(u, v)] += w;
    }
  }
  double total = 0.0;
  for (double s : strength) total += s;

  FlowGraph f;
  f.visit.assign(static_cast<size_t>(n), 0.0);
  f.exit_flow.assign(static_cast<size_t>(n), 0.0);
  f.adj.resize(static_cast<size_t>(n));
  if (total <= 0.0) return f;
  for (int u = 0; u < n; ++u) {
    f.visit[static_cast<size_t>(u)] = strength[static_cast<size_t>(u)] / total;
    f.exit_flow[static_cast<size_t>(u)] =
        clamp0(strength[static_cast<size_t>(u)] - self_weight[static_cast<size_t>(u)]) / total;
  }
  for (auto& [key, w] : cross) w = 2.0 * w / total;  // c = F_uv + F_vu
  build_sorted_adj(f, cross);
  return f;
}

FlowGraph FlowGraph::from_directed(
    const std::vector<double>& visit,
    const std::vector<std::vector<std::pair<int, double>>>& out) {
  const int n = static_cast<int>(visit.size());
  FlowGraph f;
  f.visit = visit;
  f.exit_flow.assign(static_cast<size_t>(n), 0.0);
  f.adj.resize(static_cast<size_t>(n));
  std::unordered_map<uint64_t, double> cross;
  for (int u = 0; u < n; ++u) {
    for (const auto& [v, p] : out[static_cast<size_t>(u)]) {
      const double flow = visit[static_cast<size_t>(u)] * p;
      if (v == u) continue;  // self-flow never exits
      f.exit_flow[static_cast<size_t>(u)] += flow;
      cross[pair_key(u, v)] += flow;
    }
  }
  build_sorted_adj(f, cross);
  return f;
}

FlowGraph FlowGraph::aggregate(const std::vector<int>& dense, int num_modules) const {
  FlowGraph a;
  a.visit.assign(static_cast<size_t>(num_modules), 0.0);
  a.exit_flow.assign(static_cast<size_t>(num_modules), 0.0);
  a.adj.resize(static_cast<size_t>(num_modules));
  const int n = size();
  for (int u = 0; u < n; ++u) {
    const int m = dense[static_cast<size_t>(u)];
    a.visit[static_cast<size_t>(m)] += visit[static_cast<size_t>(u)];
    a.exit_flow[static_cast<size_t>(m)] += exit_flow[static_cast<size_t>(u)];
  }
  std::unordered_map<uint64_t, double> cross;
  for (int u = 0; u < n; ++u) {
    const int mu = dense[static_cast<size_t>(u)];
    for (const auto& [v, c] : adj[static_cast<size_t>(u)]) {
      if (v <= u) continue;  // each unordered pair once
      const int mv = dense[static_cast<size_t>(v)];
      if (mu == mv)
        a.exit_flow[static_cast<size_t>(mu)] -= c;  // becomes internal flow
      else
        cross[pair_key(mu, mv)] += c;
    }
  }
  for (double& e : a.exit_flow) e = clamp0(e);
  build_sorted_adj(a, cross);
  return a;
}

FlowPartition::FlowPartition(const FlowGraph& g, std::vector<int> assignment)
    : g_(&g), assignment_(std::move(assignment)) {
  const size_t n = static_cast<size_t>(g.size());
  mod_exit_.assign(n, 0.0);
  mod_visit_.assign(n, 0.0);
  mod_size_.assign(n, 0);
  for (double p : g.visit) node_plogp_ += plogp(p);

  // Module exit = member exits minus internal two-way flows.
  for (int u = 0; u < g.size(); ++u) {
    const size_t m = static_cast<size_t>(assignment_[static_cast<size_t>(u)]);
    mod_visit_[m] += g.visit[static_cast<size_t>(u)];
    mod_exit_[m] += g.exit_flow[static_cast<size_t>(u)];
    mod_size_[m] += 1;
  }
  for (int u = 0; u < g.size(); ++u) {
    const int mu = assignment_[static_cast<size_t>(u)];
    for (const auto& [v, c] : g.adj[static_cast<size_t>(u)]) {
      if (v <= u) continue;
      if (assignment_[static_cast<size_t>(v)] == mu)
        mod_exit_[static_cast<size_t>(mu)] -= c;
    }
  }
  for (double& q : mod_exit_) q = clamp0(q);
  for (size_t m = 0; m < mod_size_.size(); ++m)
    if (mod_size_[m] == 0) free_slots_.insert(static_cast<int>(m));
  resync();
}

void FlowPartition::resync() {
  num_modules_ = 0;
  sum_exit_ = 0.0;
  sum_plogp_exit_ = 0.0;
  sum_plogp_exit_visit_ = 0.0;
  for (size_t m = 0; m < mod_size_.size(); ++m) {
    if (mod_size_[m] == 0) continue;
    ++num_modules_;
    sum_exit_ += mod_exit_[m];
    sum_plogp_exit_ += plogp(mod_exit_[m]);
    sum_plogp_exit_visit_ += plogp(mod_exit_[m] + mod_visit_[m]);
  }
}

double FlowPartition::codelength() const {
  return plogp(sum_exit_) - 2.0 * sum_plogp_exit_ + sum_plogp_exit_visit_ - node_plogp_;
}

double FlowPartition::codelength_fresh() const {
  FlowPartition fresh(*g_, assignment_);
  return fresh.codelength();
}

std::pair<double, double> FlowPartition::components() const {
  const double index = plogp(sum_exit_) - sum_plogp_exit_;
  const double modules = sum_plogp_exit_visit_ - sum_plogp_exit_ - node_plogp_;
  return {index, modules};
}

void FlowPartition::gather_links(int u, std::vector<double>& scratch,
                                 std::vector<int>& touched) const {
  for (const auto& [v, c] : g_->adj[static_cast<size_t>(u)]) {
    const int m = assignment_[static_cast<size_t>(v)];
    if (scratch[static_cast<size_t>(m)] == 0.0) touched.push_back(m);
    scratch[static_cast<size_t>(m)] += c;
  }
}

double FlowPartition::move_gain(int u, int to, double c_from, double c_to) const {
  const int from = assignment_[static_cast<size_t>(u)];
  if (to == from) return 0.0;
  const double pu = g_->visit[static_cast<size_t>(u)];
  const double eu = g_->exit_flow[static_cast<size_t>(u)];
  const double qf = mod_exit_[static_cast<size_t>(from)];
  const double vf = mod_visit_[static_cast<size_t>(from)];
  const double qt = mod_exit_[static_cast<size_t>(to)];
  const double vt = mod_visit_[static_cast<size_t>(to)];
  const double qf2 = clamp0(qf - eu + c_from);
  const double qt2 = clamp0(qt + eu - c_to);
  const double q2 = clamp0(sum_exit_ + (qf2 - qf) + (qt2 - qt));
  return plogp(q2) - plogp(sum_exit_) -
         2.0 * (plogp(qf2) - plogp(qf) + plogp(qt2) - plogp(qt)) +
         plogp(qf2 + clamp0(vf - pu)) - plogp(qf + vf) + plogp(qt2 + vt + pu) -
         plogp(qt + vt);
}

void FlowPartition::move(int u, int to) {
  const int from = assignment_[static_cast<size_t>(u)];
  if (to == from) return;
  double c_from = 0.0, c_to = 0.0;
  for (const auto& [v, c] : g_->adj[static_cast<size_t>(u)]) {
    const int m = assignment_[static_cast<size_t>(v)];
    if (m == from) c_from += c;
    if (m == to) c_to += c;
  }
  const double pu = g_->visit[static_cast<size_t>(u)];
  const double eu = g_->exit_flow[static_cast<size_t>(u)];
  const double qf = mod_exit_[static_cast<size_t>(from)];
  const double vf = mod_visit_[static_cast<size_t>(from)];
  const double qt = mod_exit_[static_cast<size_t>(to)];
  const double vt = mod_visit_[static_cast<size_t>(to)];
  const double qf2 = clamp0(qf - eu + c_from);
  const double qt2 = clamp0(qt + eu - c_to);

  sum_exit_ = clamp0(sum_exit_ + (qf2 - qf) + (qt2 - qt));
  sum_plogp_exit_ += plogp(qf2) - plogp(qf) + plogp(qt2) - plogp(qt);
  sum_plogp_exit_visit_ += plogp(qf2 + clamp0(vf - pu)) - plogp(qf + vf) +
                           plogp(qt2 + vt + pu) - plogp(qt + vt);

  mod_exit_[static_cast<size_t>(from)] = qf2;
  mod_visit_[static_cast<size_t>(from)] = clamp0(vf - pu);
  mod_size_[static_cast<size_t>(from)] -= 1;
  mod_exit_[static_cast<size_t>(to)] = qt2;
  mod_visit_[static_cast<size_t>(to)] = vt + pu;
  mod_size_[static_cast<size_t>(to)] += 1;
  assignment_[static_cast<size_t>(u)] = to;
  if (mod_size_[static_cast<size_t>(from)] == 0) {
    --num_modules_;
    free_slots_.insert(from);
  }
  if (mod_size_[static_cast<size_t>(to)] == 1) {
    ++num_modules_;
    free_slots_.erase(to);
  }
}

std::vector<int> FlowPartition::dense_assignment() const {
  std::vector<int> relabel(assignment_.size(), -1);
  std::vector<int> dense(assignment_.size());
  int next = 0;
  for (size_t u = 0; u < assignment_.size(); ++u) {
    const size_t slot = static_cast<size_t>(assignment_[u]);
    if (relabel[slot] == -1) relabel[slot] = next++;
    dense[u] = relabel[slot];
  }
  return dense;
}

int FlowPartition::lowest_free_slot() const {
  return free_slots_.empty() ? -1 : *free_slots_.begin();
}

}  // namespace hypermux
