#include "hypermux/graph.hpp"

#include <algorithm>

#include "hypermux/errors.hpp"

namespace hypermux {

UGraph UGraph::from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
  UGraph g(n);
  for (auto [u, v] : edges) {
    if (u == v) continue;
    g.adj_[static_cast<size_t>(u)].push_back(v);
    g.adj_[static_cast<size_t>(v)].push_back(u);
  }
  for (auto& nbrs : g.adj_) {
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
    g.total_degree_ += static_cast<int64_t>(nbrs.size());
  }
  return g;
}

bool UGraph::has_edge(int u, int v) const {
  const auto& nbrs = adj_[static_cast<size_t>(u)];
  return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

std::vector<std::pair<int, int>> UGraph::edges() const {
  std::vector<std::pair<int, int>> out;
  out.reserve(static_cast<size_t>(num_edges()));
  for (int u = 0; u < num_nodes(); ++u)
    for (int v : adj_[static_cast<size_t>(u)])
      if (u < v) out.emplace_back(u, v);
  return out;
}

std::vector<int> UGraph::component_labels() const {
  const int n = num_nodes();
  std::vector<int> label(static_cast<size_t>(n), -1);
  std::vector<int> stack;
  int next = 0;
  for (int s = 0; s < n; ++s) {
    if (label[static_cast<size_t>(s)] != -1) continue;
    stack.push_back(s);
    label[static_cast<size_t>(s)] = next;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (int v : adj_[static_cast<size_t>(u)]) {
        if (label[static_cast<size_t>(v)] == -1) {
          label[static_cast<size_t>(v)] = next;
          stack.push_back(v);
        }
      }
    }
    ++next;
  }
  return label;
}

int UGraph::num_components() const {
  const auto labels = component_labels();
  int m = 0;
  for (int l : labels) m = std::max(m, l + 1);
  return m;
}

void NodeSet::add(int v) {
  if (mask_[static_cast<size_t>(v)]) return;
  mask_[static_cast<size_t>(v)] = 1;
  ids_.insert(std::lower_bound(ids_.begin(), ids_.end(), v), v);
}

int64_t volume(const UGraph& g, const NodeSet& s) {
  int64_t vol = 0;
  for (int v : s.ids()) vol += g.degree(v);
  return vol;
}

int64_t cut(const UGraph& g, const NodeSet& s) {
  int64_t c = 0;
  for (int u : s.ids())
    for (int v : g.neighbors(u))
      if (!s.contains(v)) ++c;
  return c;
}

int64_t edges_between(const UGraph& g, const NodeSet& a, const NodeSet& b) {
  for (int v : a.ids())
    if (b.contains(v)) throw OverlappingSets("edges_between: sets share node " + std::to_string(v));
  int64_t c = 0;
  for (int u : a.ids())
    for (int v : g.neighbors(u))
      if (b.contains(v)) ++c;
  return c;
}

double conductance(const UGraph& g, const NodeSet& s) {
  const int64_t vol_s = volume(g, s);
  const int64_t vol_rest = g.total_degree() - vol_s;
  if (vol_s == 0 || vol_rest == 0)
    throw DegenerateSet("conductance: set or complement has zero volume");
  return static_cast<double>(cut(g, s)) / static_cast<double>(std::min(vol_s, vol_rest));
}

double relative_conductance(const UGraph& g, const NodeSet& a, const NodeSet& b) {
  const int64_t cross = edges_between(g, a, b);
  const int64_t va = volume(g, a), vb = volume(g, b);
  if (va == 0 || vb == 0) throw DegenerateSet("relative_conductance: zero-volume set");
  return static_cast<double>(cross) / static_cast<double>(std::min(va, vb));
}

}  // namespace hypermux
