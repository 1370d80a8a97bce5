#include "hypermux/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "hypermux/errors.hpp"

namespace hypermux {

namespace fs = std::filesystem;

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

void atomic_write(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open for writing: " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw DataError("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string file_digest(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open: " + path.string());
  uint64_t hash = 0xcbf29ce484222325ULL;
  char buf[65536];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    const std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      hash ^= static_cast<unsigned char>(buf[i]);
      hash *= 0x100000001b3ULL;
    }
    if (got < static_cast<std::streamsize>(sizeof(buf))) break;
  }
  char out[17];
  std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(hash));
  return std::string(out, 16);
}

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string token;
  while (ss >> token) out.push_back(token);
  return out;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      out.push_back(field);
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  out.push_back(field);
  return out;
}

double parse_double(const std::string& s, const fs::path& path, int64_t line_no) {
  double value = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw DataError(path.string() + ":" + std::to_string(line_no) + ": bad number '" + s + "'");
  return value;
}

bool skip_line(const std::string& line) {
  for (char c : line) {
    if (c == '#') return true;
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;  // blank
}

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open: " + path.string());
  return in;
}

}  // namespace

LoadedGraph load_edge_list(const fs::path& path) {
  std::ifstream in = open_input(path);
  LoadedGraph out;
  std::unordered_map<std::string, int> ids;
  auto intern = [&](const std::string& label) {
    const auto [it, inserted] = ids.emplace(label, static_cast<int>(out.labels.size()));
    if (inserted) out.labels.push_back(label);
    return it->second;
  };

  std::vector<std::pair<int, int>> edges;
  std::unordered_map<uint64_t, char> seen;
  std::string line;
  int64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skip_line(line)) continue;
    const auto tokens = split_ws(line);
    if (tokens.size() != 2)
      throw DataError(path.string() + ":" + std::to_string(line_no) +
                      ": expected 'u v', got " + std::to_string(tokens.size()) + " tokens");
    const int u = intern(tokens[0]);
    const int v = intern(tokens[1]);
    if (u == v) {
      ++out.dropped_self_loops;
      continue;
    }
    const uint64_t key = (static_cast<uint64_t>(std::min(u, v)) << 32) |
                         static_cast<uint64_t>(std::max(u, v));
    if (!seen.emplace(key, 1).second) {
      ++out.dropped_duplicates;
      continue;
    }
    edges.emplace_back(u, v);
  }
  if (edges.empty()) throw DataError(path.string() + ": no edges");
  out.graph = UGraph::from_edges(static_cast<int>(out.labels.size()), edges);
  return out;
}

void write_edge_list(const fs::path& path, const UGraph& g,
                     const std::vector<std::string>& labels) {
  std::string content;
  for (const auto& [u, v] : g.edges()) {
    content += labels[static_cast<size_t>(u)];
    content += ' ';
    content += labels[static_cast<size_t>(v)];
    content += '\n';
  }
  atomic_write(path, content);
}

LoadedMultiplex load_multiplex(const fs::path& path) {
  std::ifstream in = open_input(path);
  LoadedMultiplex out;
  std::unordered_map<std::string, int> node_ids, layer_ids;
  std::vector<std::string> labels;
  auto intern_node = [&](const std::string& label) {
    const auto [it, inserted] = node_ids.emplace(label, static_cast<int>(labels.size()));
    if (inserted) labels.push_back(label);
    return it->second;
  };
  auto intern_layer = [&](const std::string& label) {
    const auto [it, inserted] = layer_ids.emplace(label, static_cast<int>(out.layer_labels.size()));
    if (inserted) out.layer_labels.push_back(label);
    return it->second;
  };

  std::vector<std::vector<std::pair<int, int>>> layer_edges;
  std::vector<std::unordered_map<uint64_t, char>> seen;
  std::string line;
  int64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skip_line(line)) continue;
    const auto tokens = split_ws(line);
    if (tokens.size() != 3 && tokens.size() != 4)
      throw DataError(path.string() + ":" + std::to_string(line_no) +
                      ": expected 'layer u v [w]', got " + std::to_string(tokens.size()) +
                      " tokens");
    if (tokens.size() == 4) ++out.weighted_lines;
    const int layer = intern_layer(tokens[0]);
    const int u = intern_node(tokens[1]);
    const int v = intern_node(tokens[2]);
    if (static_cast<size_t>(layer) >= layer_edges.size()) {
      layer_edges.resize(static_cast<size_t>(layer) + 1);
      seen.resize(static_cast<size_t>(layer) + 1);
    }
    if (u == v) {
      ++out.dropped_self_loops;
      continue;
    }
    const uint64_t key = (static_cast<uint64_t>(std::min(u, v)) << 32) |
                         static_cast<uint64_t>(std::max(u, v));
    if (!seen[static_cast<size_t>(layer)].emplace(key, 1).second) {
      ++out.dropped_duplicates;
      continue;
    }
    layer_edges[static_cast<size_t>(layer)].emplace_back(u, v);
  }
  if (layer_edges.empty()) throw DataError(path.string() + ": no edges");

  const int n = static_cast<int>(labels.size());
  std::vector<UGraph> layers;
  layers.reserve(layer_edges.size());
  for (const auto& edges : layer_edges) layers.push_back(UGraph::from_edges(n, edges));
  out.net = MultiplexNet::from_layers(std::move(layers), std::move(labels));
  return out;
}

void write_multiplex(const fs::path& path, const MultiplexNet& net,
                     const std::vector<std::string>& layer_labels) {
  std::string content;
  for (int l = 0; l < net.num_layers(); ++l) {
    for (const auto& [u, v] : net.layers[static_cast<size_t>(l)].edges()) {
      content += layer_labels[static_cast<size_t>(l)];
      content += ' ';
      content += net.labels[static_cast<size_t>(u)];
      content += ' ';
      content += net.labels[static_cast<size_t>(v)];
      content += '\n';
    }
  }
  atomic_write(path, content);
}

void write_coords_csv(const fs::path& path, const std::vector<PolarPoint>& coords,
                      const std::vector<std::string>& labels) {
  std::string content = "node_id,r,theta\n";
  for (size_t u = 0; u < coords.size(); ++u) {
    content += labels[u];
    content += ',';
    content += format_double(coords[u].r);
    content += ',';
    content += format_double(coords[u].theta);
    content += '\n';
  }
  atomic_write(path, content);
}

LoadedCoords load_coords_csv(const fs::path& path) {
  std::ifstream in = open_input(path);
  LoadedCoords out;
  std::string line;
  int64_t line_no = 0;
  bool header = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (skip_line(line)) continue;
    if (header) {
      header = false;
      continue;
    }
    const auto fields = split_csv(line);
    if (fields.size() != 3)
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": expected 3 CSV fields");
    out.labels.push_back(fields[0]);
    out.coords.push_back(
        {parse_double(fields[1], path, line_no), parse_double(fields[2], path, line_no)});
  }
  if (out.coords.empty()) throw DataError(path.string() + ": no coordinate rows");
  return out;
}

void write_multiplex_coords_csv(const fs::path& path, const MultiplexEmbedding& emb,
                                const MultiplexNet& net,
                                const std::vector<std::string>& layer_labels) {
  std::string content = "node_id,layer,r,theta\n";
  for (int l = 0; l < net.num_layers(); ++l) {
    for (int u = 0; u < net.universe(); ++u) {
      if (!net.present(l, u)) continue;
      const PolarPoint& p = emb.layers[static_cast<size_t>(l)].coords[static_cast<size_t>(u)];
      content += net.labels[static_cast<size_t>(u)];
      content += ',';
      content += layer_labels[static_cast<size_t>(l)];
      content += ',';
      content += format_double(p.r);
      content += ',';
      content += format_double(p.theta);
      content += '\n';
    }
  }
  atomic_write(path, content);
}

LoadedMultiplexCoords load_multiplex_coords_csv(const fs::path& path) {
  std::ifstream in = open_input(path);
  LoadedMultiplexCoords out;
  std::unordered_map<std::string, int> layer_ids;
  std::string line;
  int64_t line_no = 0;
  bool header = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (skip_line(line)) continue;
    if (header) {
      header = false;
      continue;
    }
    const auto fields = split_csv(line);
    if (fields.size() != 4)
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": expected 4 CSV fields");
    const auto [it, inserted] =
        layer_ids.emplace(fields[1], static_cast<int>(out.layer_labels.size()));
    if (inserted) {
      out.layer_labels.push_back(fields[1]);
      out.rows.emplace_back();
    }
    out.rows[static_cast<size_t>(it->second)].emplace_back(
        fields[0], PolarPoint{parse_double(fields[2], path, line_no),
                              parse_double(fields[3], path, line_no)});
  }
  if (out.rows.empty()) throw DataError(path.string() + ": no coordinate rows");
  return out;
}

void write_partition(const fs::path& path, const std::vector<int>& assignment,
                     const std::vector<std::string>& labels) {
  std::string content;
  for (size_t u = 0; u < assignment.size(); ++u) {
    content += labels[u];
    content += ' ';
    content += std::to_string(assignment[u]);
    content += '\n';
  }
  atomic_write(path, content);
}

std::vector<std::pair<std::string, int>> load_partition(const fs::path& path) {
  std::ifstream in = open_input(path);
  std::vector<std::pair<std::string, int>> out;
  std::string line;
  int64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skip_line(line)) continue;
    const auto tokens = split_ws(line);
    if (tokens.size() != 2)
      throw DataError(path.string() + ":" + std::to_string(line_no) +
                      ": expected 'node_id module_id'");
    int module = 0;
    const auto res =
        std::from_chars(tokens[1].data(), tokens[1].data() + tokens[1].size(), module);
    if (res.ec != std::errc() || res.ptr != tokens[1].data() + tokens[1].size())
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": bad module id");
    out.emplace_back(tokens[0], module);
  }
  if (out.empty()) throw DataError(path.string() + ": empty partition");
  return out;
}

void write_trace_csv(const fs::path& path, const std::vector<TraceRow>& trace) {
  std::string content = "iter,o1,mean_coherence,codelength_bits\n";
  for (const auto& row : trace) {
    content += std::to_string(row.iter);
    content += ',';
    content += format_double(row.loss);
    content += ',';
    content += format_double(row.mean_coherence);
    content += ',';
    content += format_double(row.codelength_bits);
    content += '\n';
  }
  atomic_write(path, content);
}

void write_report_csv(const fs::path& path, const std::vector<ReportRow>& rows) {
  std::string content = "metric,x,y,seed\n";
  for (const auto& row : rows) {
    content += row.metric;
    content += ',';
    content += row.x;
    content += ',';
    content += format_double(row.y);
    content += ',';
    content += std::to_string(row.seed);
    content += '\n';
  }
  atomic_write(path, content);
}

void write_label_map(const fs::path& path, const std::vector<std::string>& labels) {
  std::string content = "label,id\n";
  for (size_t i = 0; i < labels.size(); ++i) {
    content += labels[i];
    content += ',';
    content += std::to_string(i);
    content += '\n';
  }
  atomic_write(path, content);
}

}  // namespace hypermux
