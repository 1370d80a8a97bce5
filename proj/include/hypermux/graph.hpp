#pragma once
#include <cstdint>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace hypermux {

// Undirected unweighted simple graph over dense node ids 0..n-1.
// Immutable after construction; adjacency lists are sorted.
class UGraph {
 public:
  explicit UGraph(int n = 0) : adj_(static_cast<size_t>(n)) {}

  // Drops self-loops and duplicate edges silently; callers that need the
  // drop counts (the edge-list loader) count them up front.
  static UGraph from_edges(int n, const std::vector<std::pair<int, int>>& edges);

  int num_nodes() const { return static_cast<int>(adj_.size()); }
  int64_t num_edges() const { return total_degree_ / 2; }
  int64_t total_degree() const { return total_degree_; }  // = 2|E|
  int degree(int v) const { return static_cast<int>(adj_[static_cast<size_t>(v)].size()); }
  std::span<const int> neighbors(int v) const { return adj_[static_cast<size_t>(v)]; }
  bool has_edge(int u, int v) const;

  // Unordered (u < v) edge list in lexicographic order.
  std::vector<std::pair<int, int>> edges() const;

  std::vector<int> component_labels() const;
  int num_components() const;
  bool connected() const { return num_components() <= 1; }

 private:
  std::vector<std::vector<int>> adj_;
  int64_t total_degree_ = 0;
};

// Node subset over a fixed universe [0, n). Sorted id list plus a
// membership mask for O(1) contains.
class NodeSet {
 public:
  explicit NodeSet(int universe) : mask_(static_cast<size_t>(universe), 0) {}
  NodeSet(int universe, std::initializer_list<int> ids) : NodeSet(universe) {
    for (int v : ids) add(v);
  }
  static NodeSet from_ids(int universe, const std::vector<int>& ids) {
    NodeSet s(universe);
    for (int v : ids) s.add(v);
    return s;
  }

  void add(int v);
  bool contains(int v) const { return mask_[static_cast<size_t>(v)] != 0; }
  int size() const { return static_cast<int>(ids_.size()); }
  bool empty() const { return ids_.empty(); }
  int universe() const { return static_cast<int>(mask_.size()); }
  const std::vector<int>& ids() const { return ids_; }  // sorted

 private:
  std::vector<uint8_t> mask_;
  std::vector<int> ids_;
};

// vol(S) = sum of degrees of members.
int64_t volume(const UGraph& g, const NodeSet& s);

// |{uv in E : u in S, v not in S}|.
int64_t cut(const UGraph& g, const NodeSet& s);

// Unordered cross-pair count |E(A, B)|; throws OverlappingSets.
int64_t edges_between(const UGraph& g, const NodeSet& a, const NodeSet& b);

// cut(S) / min(vol(S), vol(compl S)); throws DegenerateSet on zero volume.
double conductance(const UGraph& g, const NodeSet& s);

// |E(A,B)| / min(vol(A), vol(B)); throws as above.
double relative_conductance(const UGraph& g, const NodeSet& a, const NodeSet& b);

}  // namespace hypermux
