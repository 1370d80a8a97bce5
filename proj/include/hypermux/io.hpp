#pragma once
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "hypermux/embed.hpp"
#include "hypermux/geometry.hpp"
#include "hypermux/graph.hpp"
#include "hypermux/multiplex.hpp"

namespace hypermux {

// Shortest round-trip decimal representation (std::to_chars); locale-free.
std::string format_double(double x);

// Write-to-temp-then-rename; every writer below goes through this.
void atomic_write(const std::filesystem::path& path, const std::string& content);

// FNV-1a 64 over the file bytes, as 16 hex chars. Throws DataError.
std::string file_digest(const std::filesystem::path& path);

// ---- edge lists ------------------------------------------------------
// Format: "u v" whitespace-separated labels, '#' comments and blank lines
// ignored. Labels are remapped to dense ids in first-appearance order.
struct LoadedGraph {
  UGraph graph;
  std::vector<std::string> labels;  // dense id -> original label
  int64_t dropped_duplicates = 0;
  int64_t dropped_self_loops = 0;
};
LoadedGraph load_edge_list(const std::filesystem::path& path);
void write_edge_list(const std::filesystem::path& path, const UGraph& g,
                     const std::vector<std::string>& labels);

// ---- multiplex edge lists: "layer u v [w]" ---------------------------
struct LoadedMultiplex {
  MultiplexNet net;
  std::vector<std::string> layer_labels;  // dense layer id -> original token
  int64_t dropped_duplicates = 0;
  int64_t dropped_self_loops = 0;
  int64_t weighted_lines = 0;  // weights are ignored with a warning
};
LoadedMultiplex load_multiplex(const std::filesystem::path& path);
void write_multiplex(const std::filesystem::path& path, const MultiplexNet& net,
                     const std::vector<std::string>& layer_labels);

// ---- coordinates (CSV, header node_id,r,theta) ------------------------
void write_coords_csv(const std::filesystem::path& path, const std::vector<PolarPoint>& coords,
                      const std::vector<std::string>& labels);
struct LoadedCoords {
  std::vector<PolarPoint> coords;
  std::vector<std::string> labels;
};
LoadedCoords load_coords_csv(const std::filesystem::path& path);

// ---- per-layer coordinates (CSV, header node_id,layer,r,theta) --------
void write_multiplex_coords_csv(const std::filesystem::path& path,
                                const MultiplexEmbedding& emb, const MultiplexNet& net,
                                const std::vector<std::string>& layer_labels);
struct LoadedMultiplexCoords {
  // [layer][row]: (label, point); layers keyed by label token
  std::vector<std::string> layer_labels;
  std::vector<std::vector<std::pair<std::string, PolarPoint>>> rows;
};
LoadedMultiplexCoords load_multiplex_coords_csv(const std::filesystem::path& path);

// ---- partitions ("node_id module_id" lines; .tree-style import) -------
void write_partition(const std::filesystem::path& path, const std::vector<int>& assignment,
                     const std::vector<std::string>& labels);
std::vector<std::pair<std::string, int>> load_partition(const std::filesystem::path& path);

// ---- loss trace CSV ----------------------------------------------------
void write_trace_csv(const std::filesystem::path& path, const std::vector<TraceRow>& trace);

// ---- long-format report CSV (metric,x,y,seed) --------------------------
struct ReportRow {
  std::string metric;
  std::string x;
  double y = 0.0;
  uint64_t seed = 0;
};
void write_report_csv(const std::filesystem::path& path, const std::vector<ReportRow>& rows);

// label -> dense id mapping persisted alongside outputs
void write_label_map(const std::filesystem::path& path, const std::vector<std::string>& labels);

}  // namespace hypermux
