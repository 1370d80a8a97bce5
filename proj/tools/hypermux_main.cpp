#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "hypermux/embed.hpp"
#include "hypermux/errors.hpp"
#include "hypermux/eval.hpp"
#include "hypermux/io.hpp"
#include "hypermux/manifest.hpp"
#include "hypermux/mapeq.hpp"
#include "hypermux/multiplex.hpp"
#include "hypermux/powerlaw.hpp"
#include "hypermux/rhg.hpp"
#include "hypermux/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace hypermux;

namespace {

int run_args(const std::vector<std::string>& args);  // forward, for replay

// ---- shared option bundles -------------------------------------------

struct TrainOpts {
  int outer = 10;
  int epochs = 5;
  int negatives = 5;
  double lambda = 0.1;
  double lr0 = 0.001;
  double lr1 = 0.0001;
  std::string config_path;
};

void add_train_flags(CLI::App* cmd, TrainOpts& opts) {
  cmd->add_option("--config", opts.config_path, "JSON file with training parameters");
  cmd->add_option("--outer", opts.outer, "outer alternating rounds");
  cmd->add_option("--epochs", opts.epochs, "edge passes per round");
  cmd->add_option("--negatives", opts.negatives, "negative samples per endpoint");
  cmd->add_option("--lambda", opts.lambda, "coherence step weight");
  cmd->add_option("--lr0", opts.lr0, "initial learning rate");
  cmd->add_option("--lr1", opts.lr1, "final learning rate");
}

// Resolution order: defaults, then the config file, then explicit flags.
TrainConfig resolve_train(const CLI::App* cmd, const TrainOpts& opts, uint64_t seed) {
  TrainConfig cfg;
  if (!opts.config_path.empty()) {
    std::ifstream in(opts.config_path);
    if (!in) throw DataError("cannot open config: " + opts.config_path);
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw DataError("bad config JSON: " + std::string(e.what()));
    }
    cfg.outer_iters = j.value("outer_iters", cfg.outer_iters);
    cfg.epochs = j.value("epochs", cfg.epochs);
    cfg.negatives = j.value("negatives", cfg.negatives);
    cfg.coherence_weight = j.value("coherence_weight", cfg.coherence_weight);
    cfg.lr0 = j.value("lr0", cfg.lr0);
    cfg.lr1 = j.value("lr1", cfg.lr1);
  }
  if (cmd->count("--outer")) cfg.outer_iters = opts.outer;
  if (cmd->count("--epochs")) cfg.epochs = opts.epochs;
  if (cmd->count("--negatives")) cfg.negatives = opts.negatives;
  if (cmd->count("--lambda")) cfg.coherence_weight = opts.lambda;
  if (cmd->count("--lr0")) cfg.lr0 = opts.lr0;
  if (cmd->count("--lr1")) cfg.lr1 = opts.lr1;
  if (cfg.outer_iters < 1 || cfg.epochs < 1 || cfg.negatives < 1)
    throw std::invalid_argument("training parameters must be positive");
  cfg.seed = seed;
  return cfg;
}

json train_to_json(const TrainConfig& cfg) {
  return json{{"outer_iters", cfg.outer_iters}, {"epochs", cfg.epochs},
              {"negatives", cfg.negatives},     {"coherence_weight", cfg.coherence_weight},
              {"lr0", cfg.lr0},                 {"lr1", cfg.lr1}};
}

void warn_drops(const std::string& what, int64_t duplicates, int64_t self_loops) {
  if (duplicates > 0)
    std::cerr << "warning: " << what << ": dropped " << duplicates << " duplicate edge(s)\n";
  if (self_loops > 0)
    std::cerr << "warning: " << what << ": dropped " << self_loops << " self-loop(s)\n";
}

// ---- generate ----------------------------------------------------------

int cmd_generate(const std::vector<std::string>& argv, int n, double alpha, double c, double t,
                 uint64_t seed, const std::string& prefix) {
  if (n < 2) throw std::invalid_argument("--n must be >= 2");
  if (!(alpha > 0.5)) throw std::invalid_argument("--alpha must be > 1/2");
  if (!(t > 0.0 && t < 1.0)) throw std::invalid_argument("--t must be in (0, 1)");
  RunManifest manifest("generate", argv);
  const DiskParams params(n, alpha, c, t);

  StageClock gen_clock;
  const RhgSample sample = generate(params, seed);
  manifest.add_timing("generate", gen_clock.elapsed_ms());

  std::vector<std::string> labels(static_cast<size_t>(n));
  for (int u = 0; u < n; ++u) labels[static_cast<size_t>(u)] = std::to_string(u);

  StageClock write_clock;
  const fs::path edges = prefix + ".edges";
  const fs::path coords = prefix + ".coords.csv";
  write_edge_list(edges, sample.graph, labels);
  write_coords_csv(coords, sample.coords, labels);
  manifest.add_timing("write", write_clock.elapsed_ms());

  manifest.set_config(json{{"n", n},
                           {"alpha", alpha},
                           {"c", c},
                           {"t", t},
                           {"R", params.R},
                           {"seed", seed},
                           {"edges", sample.graph.num_edges()}});
  manifest.add_output(edges);
  manifest.add_output(coords);
  manifest.write(prefix + ".manifest.json");
  std::cout << "n=" << n << " edges=" << sample.graph.num_edges() << "\n";
  return 0;
}

// ---- infomap ------------------------------------------------------------

int cmd_infomap(const std::vector<std::string>& argv, const std::string& graph_path,
                uint64_t seed, const std::string& prefix, const std::string& eval_partition) {
  RunManifest manifest("infomap", argv);
  StageClock load_clock;
  const LoadedGraph loaded = load_edge_list(graph_path);
  manifest.add_input(graph_path);
  manifest.add_timing("load", load_clock.elapsed_ms());
  warn_drops(graph_path, loaded.dropped_duplicates, loaded.dropped_self_loops);
  if (!loaded.graph.connected())
    std::cerr << "warning: graph has " << loaded.graph.num_components()
              << " components; visit rates remain degree-proportional\n";

  if (!eval_partition.empty()) {
    // cross-validation of an externally produced assignment
    std::map<std::string, int> ids;
    for (size_t i = 0; i < loaded.labels.size(); ++i)
      ids[loaded.labels[i]] = static_cast<int>(i);
    std::vector<int> assignment(loaded.labels.size(), -1);
    for (const auto& [label, module] : load_partition(eval_partition)) {
      const auto it = ids.find(label);
      if (it == ids.end()) throw DataError("partition references unknown node '" + label + "'");
      assignment[static_cast<size_t>(it->second)] = module;
    }
    for (size_t u = 0; u < assignment.size(); ++u)
      if (assignment[u] < 0)
        throw DataError("partition misses node '" + loaded.labels[u] + "'");
    manifest.add_input(eval_partition);
    const Codelength len = codelength(loaded.graph, Partition(loaded.graph, assignment));
    std::cout << "imported codelength_bits=" << format_double(len.bits) << "\n";
  }

  StageClock opt_clock;
  const OptimizeResult res = optimize(loaded.graph, seed);
  manifest.add_timing("optimize", opt_clock.elapsed_ms());

  const fs::path part_path = prefix + ".partition";
  const fs::path labels_path = prefix + ".labelmap.csv";
  write_partition(part_path, res.partition.assignment(), loaded.labels);
  write_label_map(labels_path, loaded.labels);
  manifest.add_output(part_path);
  manifest.add_output(labels_path);
  manifest.set_config(json{{"graph", graph_path}, {"seed", seed}});
  manifest.write(prefix + ".manifest.json");
  std::cout << "codelength_bits=" << format_double(res.length.bits)
            << " modules=" << res.partition.num_modules() << "\n";
  return 0;
}

// ---- embed ---------------------------------------------------------------

int cmd_embed(const std::vector<std::string>& argv, const CLI::App* cmd,
              const std::string& graph_path, double alpha, double t, double c,
              const TrainOpts& train_opts, uint64_t seed, const std::string& prefix) {
  RunManifest manifest("embed", argv);
  StageClock load_clock;
  const LoadedGraph loaded = load_edge_list(graph_path);
  manifest.add_input(graph_path);
  manifest.add_timing("load", load_clock.elapsed_ms());
  warn_drops(graph_path, loaded.dropped_duplicates, loaded.dropped_self_loops);

  bool alpha_estimated = false;
  if (alpha <= 0.0) {
    std::vector<int> degrees(static_cast<size_t>(loaded.graph.num_nodes()));
    for (int u = 0; u < loaded.graph.num_nodes(); ++u)
      degrees[static_cast<size_t>(u)] = loaded.graph.degree(u);
    alpha = alpha_from_degrees(degrees);
    alpha_estimated = true;
  }
  const DiskParams params(loaded.graph.num_nodes(), alpha, c, t);
  const TrainConfig cfg = resolve_train(cmd, train_opts, seed);

  StageClock fit_clock;
  const FitResult res = fit(loaded.graph, params, cfg);
  manifest.add_timing("fit", fit_clock.elapsed_ms());
  if (res.disconnected_warning)
    std::cerr << "warning: graph is disconnected; components share the disk by volume\n";

  StageClock write_clock;
  const fs::path emb_path = prefix + ".embedding.csv";
  const fs::path part_path = prefix + ".partition";
  const fs::path trace_path = prefix + ".trace.csv";
  const fs::path labels_path = prefix + ".labelmap.csv";
  write_coords_csv(emb_path, res.state.coords, loaded.labels);
  write_partition(part_path, res.partition.assignment(), loaded.labels);
  write_trace_csv(trace_path, res.trace);
  write_label_map(labels_path, loaded.labels);
  manifest.add_timing("write", write_clock.elapsed_ms());

  manifest.set_config(json{{"graph", graph_path},
                           {"alpha", alpha},
                           {"alpha_estimated", alpha_estimated},
                           {"t", t},
                           {"c", c},
                           {"R", params.R},
                           {"seed", seed},
                           {"train", train_to_json(cfg)}});
  for (const auto& p : {emb_path, part_path, trace_path, labels_path}) manifest.add_output(p);
  manifest.write(prefix + ".manifest.json");
  std::cout << "embedded n=" << loaded.graph.num_nodes()
            << " modules=" << res.partition.num_modules() << "\n";
  return 0;
}

// ---- embed-multiplex -------------------------------------------------------

int cmd_embed_multiplex(const std::vector<std::string>& argv, const CLI::App* cmd,
                        const std::string& multiplex_path, double omega, double lambda_cross,
                        double alpha, double t, double c, const TrainOpts& train_opts,
                        uint64_t seed, const std::string& prefix) {
  if (!(omega >= 0.0 && omega <= 1.0))
    throw std::invalid_argument("--omega must be in [0, 1]");
  RunManifest manifest("embed-multiplex", argv);
  StageClock load_clock;
  const LoadedMultiplex loaded = load_multiplex(multiplex_path);
  manifest.add_input(multiplex_path);
  manifest.add_timing("load", load_clock.elapsed_ms());
  warn_drops(multiplex_path, loaded.dropped_duplicates, loaded.dropped_self_loops);
  if (loaded.weighted_lines > 0)
    std::cerr << "warning: " << loaded.weighted_lines << " weighted line(s); weights ignored\n";

  // Per-layer disk parameters; alpha estimated per layer when not given.
  std::vector<DiskParams> params;
  json alpha_log = json::array();
  for (int l = 0; l < loaded.net.num_layers(); ++l) {
    int present = 0;
    std::vector<int> degrees;
    for (int u = 0; u < loaded.net.universe(); ++u)
      if (loaded.net.present(l, u)) {
        ++present;
        degrees.push_back(loaded.net.layers[static_cast<size_t>(l)].degree(u));
      }
    double layer_alpha = alpha;
    if (layer_alpha <= 0.0) layer_alpha = alpha_from_degrees(degrees);
    params.emplace_back(std::max(2, present), layer_alpha, c, t);
    alpha_log.push_back(layer_alpha);
  }
  const TrainConfig cfg = resolve_train(cmd, train_opts, seed);

  StageClock fit_clock;
  const MultiplexEmbedding res = fit_multiplex(loaded.net, params, cfg, omega, lambda_cross);
  manifest.add_timing("fit", fit_clock.elapsed_ms());

  StageClock write_clock;
  const fs::path emb_path = prefix + ".embedding.csv";
  const fs::path part_path = prefix + ".partition";
  const fs::path labels_path = prefix + ".labelmap.csv";
  write_multiplex_coords_csv(emb_path, res, loaded.net, loaded.layer_labels);
  write_partition(part_path, res.partition, loaded.net.labels);
  write_label_map(labels_path, loaded.net.labels);
  manifest.add_timing("write", write_clock.elapsed_ms());

  manifest.set_config(json{{"multiplex", multiplex_path},
                           {"omega", omega},
                           {"lambda_cross", lambda_cross},
                           {"alpha_per_layer", alpha_log},
                           {"t", t},
                           {"c", c},
                           {"seed", seed},
                           {"train", train_to_json(cfg)}});
  for (const auto& p : {emb_path, part_path, labels_path}) manifest.add_output(p);
  manifest.write(prefix + ".manifest.json");
  std::cout << "embedded layers=" << loaded.net.num_layers()
            << " universe=" << loaded.net.universe() << "\n";
  return 0;
}

// ---- eval reports ----------------------------------------------------------

void write_report(const std::string& prefix, RunManifest& manifest,
                  const std::vector<ReportRow>& rows, const json& config, json extra = {}) {
  const fs::path csv = prefix + ".csv";
  const fs::path jsn = prefix + ".json";
  write_report_csv(csv, rows);
  json j;
  j["config"] = config;
  j["rows"] = json::array();
  for (const auto& row : rows)
    j["rows"].push_back({{"metric", row.metric}, {"x", row.x}, {"y", row.y}, {"seed", row.seed}});
  if (!extra.is_null() && !extra.empty()) j["detail"] = extra;
  atomic_write(jsn, j.dump(2) + "\n");
  manifest.set_config(config);
  manifest.add_output(csv);
  manifest.add_output(jsn);
  manifest.write(prefix + ".manifest.json");
}

int cmd_eval_hdcorr(const std::vector<std::string>& argv, const std::string& truth_path,
                    const std::string& inferred_path, const std::string& prefix) {
  RunManifest manifest("eval hdcorr", argv);
  const LoadedCoords truth = load_coords_csv(truth_path);
  const LoadedCoords inferred = load_coords_csv(inferred_path);
  manifest.add_input(truth_path);
  manifest.add_input(inferred_path);

  std::map<std::string, PolarPoint> by_label;
  for (size_t i = 0; i < inferred.labels.size(); ++i) by_label[inferred.labels[i]] = inferred.coords[i];
  std::vector<PolarPoint> a, b;
  for (size_t i = 0; i < truth.labels.size(); ++i) {
    const auto it = by_label.find(truth.labels[i]);
    if (it == by_label.end()) continue;
    a.push_back(truth.coords[i]);
    b.push_back(it->second);
  }
  if (a.size() < 3) throw DataError("fewer than 3 shared nodes between the coordinate files");

  StageClock clock;
  const PearsonResult r = hd_correlation(a, b);
  manifest.add_timing("hdcorr", clock.elapsed_ms());
  if (!r.defined) std::cerr << "warning: correlation undefined (zero distance variance)\n";

  std::vector<ReportRow> rows;
  rows.push_back({"hd_correlation", std::to_string(a.size()),
                  r.defined ? r.value : std::numeric_limits<double>::quiet_NaN(), 0});
  write_report(prefix, manifest, rows,
               json{{"truth", truth_path},
                    {"inferred", inferred_path},
                    {"shared_nodes", a.size()},
                    {"defined", r.defined}});
  std::cout << "hd_correlation=" << (r.defined ? format_double(r.value) : "undefined") << "\n";
  return 0;
}

int cmd_eval_linkpred(const std::vector<std::string>& argv, const CLI::App* cmd,
                      const std::string& graph_path, const std::string& scorer_name,
                      double holdout, double alpha, double t, double c,
                      const TrainOpts& train_opts, uint64_t seed, const std::string& prefix) {
  RunManifest manifest("eval linkpred", argv);
  const LoadedGraph loaded = load_edge_list(graph_path);
  manifest.add_input(graph_path);
  warn_drops(graph_path, loaded.dropped_duplicates, loaded.dropped_self_loops);

  LinkPredictionConfig cfg;
  cfg.scorer = scorer_from_name(scorer_name);
  cfg.holdout = holdout;
  cfg.alpha = alpha;
  cfg.temperature = t;
  cfg.C = c;
  cfg.train = resolve_train(cmd, train_opts, seed);

  StageClock clock;
  const LinkPredictionResult res = link_prediction(loaded.graph, cfg, seed);
  manifest.add_timing("linkpred", clock.elapsed_ms());
  if (res.connectivity_warning)
    std::cerr << "warning: holdout kept fragmenting the graph; proceeding anyway\n";

  std::vector<ReportRow> rows;
  rows.push_back({"auc", scorer_name, res.auc, seed});
  write_report(prefix, manifest, rows,
               json{{"graph", graph_path},
                    {"scorer", scorer_name},
                    {"holdout", holdout},
                    {"alpha", alpha},
                    {"t", t},
                    {"c", c},
                    {"seed", seed},
                    {"removed_edges", res.removed_edges},
                    {"connectivity_warning", res.connectivity_warning},
                    {"train", train_to_json(cfg.train)}});
  std::cout << "auc=" << format_double(res.auc) << "\n";
  return 0;
}

int cmd_eval_coherence(const std::vector<std::string>& argv, const std::vector<int>& sizes,
                       const std::string& clusterer_name, int instances, double alpha, double c,
                       double t, uint64_t seed, const std::string& prefix) {
  if (instances < 1) throw std::invalid_argument("--instances must be >= 1");
  Clusterer clusterer;
  if (clusterer_name == "infomap")
    clusterer = Clusterer::kInfomap;
  else if (clusterer_name == "random")
    clusterer = Clusterer::kRandomAssign;
  else
    throw DataError("unknown clusterer '" + clusterer_name + "' (expected infomap|random)");

  RunManifest manifest("eval coherence", argv);
  StageClock clock;
  const auto table = coherence_table(sizes, clusterer, instances, alpha, c, t, seed);
  manifest.add_timing("coherence", clock.elapsed_ms());

  std::vector<ReportRow> rows;
  for (const auto& row : table)
    rows.push_back({"mean_coherence", std::to_string(row.n), row.mean_coherence, seed});
  write_report(prefix, manifest, rows,
               json{{"sizes", sizes},
                    {"clusterer", clusterer_name},
                    {"instances", instances},
                    {"alpha", alpha},
                    {"c", c},
                    {"t", t},
                    {"seed", seed}});
  for (const auto& row : table)
    std::cout << "n=" << row.n << " mean_coherence=" << format_double(row.mean_coherence) << "\n";
  return 0;
}

int cmd_eval_resolution(const std::vector<std::string>& argv,
                        const std::vector<std::string>& graph_paths, uint64_t seed,
                        const std::string& prefix) {
  RunManifest manifest("eval resolution", argv);
  std::vector<ReportRow> rows;
  json detail = json::array();
  StageClock clock;
  for (const auto& path : graph_paths) {
    const LoadedGraph loaded = load_edge_list(path);
    manifest.add_input(path);
    const ResolutionRow row = resolution_row(loaded.graph, path, seed);
    rows.push_back({"detected_modules", path, static_cast<double>(row.detected), seed});
    rows.push_back({"predicted_modules", path, static_cast<double>(row.predicted), seed});
    detail.push_back({{"graph", path},
                      {"nodes", row.nodes},
                      {"edges", row.edges},
                      {"detected", row.detected},
                      {"predicted", row.predicted}});
    std::cout << path << ": nodes=" << row.nodes << " edges=" << row.edges
              << " detected=" << row.detected << " predicted=" << row.predicted << "\n";
  }
  manifest.add_timing("resolution", clock.elapsed_ms());
  write_report(prefix, manifest, rows, json{{"graphs", graph_paths}, {"seed", seed}}, detail);
  return 0;
}

int cmd_eval_violation(const std::vector<std::string>& argv, const std::string& multiplex_path,
                       const std::string& embedding_path, bool no_degree_filter,
                       const std::string& cn_mode_name, const std::string& prefix) {
  RunManifest manifest("eval violation", argv);
  const LoadedMultiplex loaded = load_multiplex(multiplex_path);
  const LoadedMultiplexCoords coords = load_multiplex_coords_csv(embedding_path);
  manifest.add_input(multiplex_path);
  manifest.add_input(embedding_path);

  CnMode mode;
  if (cn_mode_name == "intersection")
    mode = CnMode::kCrossLayerIntersection;
  else if (cn_mode_name == "pairsum")
    mode = CnMode::kLayerPairSum;
  else
    throw DataError("unknown cn mode '" + cn_mode_name + "' (expected intersection|pairsum)");

  // layer and node labels of the embedding must match the multiplex file
  std::map<std::string, int> layer_ids, node_ids;
  for (size_t l = 0; l < loaded.layer_labels.size(); ++l)
    layer_ids[loaded.layer_labels[l]] = static_cast<int>(l);
  for (size_t u = 0; u < loaded.net.labels.size(); ++u)
    node_ids[loaded.net.labels[u]] = static_cast<int>(u);

  std::vector<LayerEmbedding> emb(static_cast<size_t>(loaded.net.num_layers()));
  for (auto& layer : emb) {
    layer.params = DiskParams(std::max(2, loaded.net.universe()), 0.75, 0.0, 0.3);
    layer.coords.assign(static_cast<size_t>(loaded.net.universe()), PolarPoint{});
  }
  std::vector<std::vector<char>> have(static_cast<size_t>(loaded.net.num_layers()),
                                      std::vector<char>(static_cast<size_t>(loaded.net.universe()), 0));
  for (size_t l = 0; l < coords.layer_labels.size(); ++l) {
    const auto lit = layer_ids.find(coords.layer_labels[l]);
    if (lit == layer_ids.end())
      throw DataError("embedding references unknown layer '" + coords.layer_labels[l] + "'");
    for (const auto& [label, point] : coords.rows[l]) {
      const auto nit = node_ids.find(label);
      if (nit == node_ids.end())
        throw DataError("embedding references unknown node '" + label + "'");
      emb[static_cast<size_t>(lit->second)].coords[static_cast<size_t>(nit->second)] = point;
      have[static_cast<size_t>(lit->second)][static_cast<size_t>(nit->second)] = 1;
    }
  }
  for (int l = 0; l < loaded.net.num_layers(); ++l)
    for (int u = 0; u < loaded.net.universe(); ++u)
      if (loaded.net.present(l, u) && !have[static_cast<size_t>(l)][static_cast<size_t>(u)])
        throw DataError("embedding misses node '" + loaded.net.labels[static_cast<size_t>(u)] +
                        "' in layer '" + loaded.layer_labels[static_cast<size_t>(l)] + "'");

  StageClock clock;
  const ViolationResult res = violation_ratio(loaded.net, emb, !no_degree_filter, mode);
  manifest.add_timing("violation", clock.elapsed_ms());

  std::vector<ReportRow> rows;
  rows.push_back({"violation_ratio", no_degree_filter ? "no_degree" : "with_degree", res.ratio, 0});
  write_report(prefix, manifest, rows,
               json{{"multiplex", multiplex_path},
                    {"embedding", embedding_path},
                    {"degree_filter", !no_degree_filter},
                    {"cn_mode", cn_mode_name},
                    {"violations", res.violations},
                    {"qualifying", res.qualifying}});
  std::cout << "violation_ratio=" << format_double(res.ratio) << " (" << res.violations << "/"
            << res.qualifying << ")\n";
  return 0;
}

// ---- replay ------------------------------------------------------------------

int cmd_replay(const std::string& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw DataError("cannot open manifest: " + manifest_path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DataError("bad manifest JSON: " + std::string(e.what()));
  }
  if (!j.contains("argv") || !j["argv"].is_array())
    throw DataError("manifest has no argv to replay");
  std::vector<std::string> argv;
  for (const auto& a : j["argv"]) argv.push_back(a.get<std::string>());
  std::cerr << "replaying: hypermux";
  for (const auto& a : argv) std::cerr << " " << a;
  std::cerr << "\n";
  return run_args(argv);
}

int run_args(const std::vector<std::string>& args) {
  CLI::App app{"hyperbolic network embedding with map-equation communities"};
  app.set_version_flag("--version", std::string("hypermux ") + kVersion);
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "sample a random hyperbolic disk graph");
  int gen_n = 0;
  double gen_alpha = 0.75, gen_c = 0.0, gen_t = 0.3;
  uint64_t gen_seed = 0;
  std::string gen_prefix;
  gen->add_option("--n", gen_n, "node count")->required();
  gen->add_option("--alpha", gen_alpha, "radial density exponent (> 1/2)")->required();
  gen->add_option("--c", gen_c, "disk radius offset")->required();
  gen->add_option("--t", gen_t, "temperature in (0, 1)")->required();
  gen->add_option("--seed", gen_seed, "RNG seed")->required();
  gen->add_option("--out-prefix", gen_prefix, "output path prefix")->required();

  // infomap
  auto* info = app.add_subcommand("infomap", "map-equation community detection");
  std::string info_graph, info_prefix, info_eval;
  uint64_t info_seed = 0;
  info->add_option("--graph", info_graph, "edge-list file")->required();
  info->add_option("--seed", info_seed, "RNG seed")->required();
  info->add_option("--out", info_prefix, "output path prefix")->required();
  info->add_option("--eval-partition", info_eval,
                   "also report the codelength of this node_id/module_id file");

  // embed
  auto* emb = app.add_subcommand("embed", "single-layer hyperbolic embedding");
  std::string emb_graph, emb_prefix;
  double emb_alpha = 0.0, emb_t = 0.5, emb_c = 0.0;
  uint64_t emb_seed = 0;
  TrainOpts emb_train;
  emb->add_option("--graph", emb_graph, "edge-list file")->required();
  emb->add_option("--alpha", emb_alpha, "radial exponent; omit to estimate from degrees");
  emb->add_option("--t", emb_t, "temperature in (0, 1)");
  emb->add_option("--c", emb_c, "disk radius offset");
  add_train_flags(emb, emb_train);
  emb->add_option("--seed", emb_seed, "RNG seed")->required();
  emb->add_option("--out-prefix", emb_prefix, "output path prefix")->required();

  // embed-multiplex
  auto* membd = app.add_subcommand("embed-multiplex", "multiplex hyperbolic embedding");
  std::string membd_path, membd_prefix;
  double membd_omega = 0.15, membd_lambda_cross = 0.1, membd_alpha = 0.0, membd_t = 0.5,
         membd_c = 0.0;
  uint64_t membd_seed = 0;
  TrainOpts membd_train;
  membd->add_option("--multiplex", membd_path, "multiplex edge-list file (layer u v)")->required();
  membd->add_option("--omega", membd_omega, "relax rate in [0, 1]");
  membd->add_option("--lambda-cross", membd_lambda_cross, "cross-layer alignment step weight");
  membd->add_option("--alpha", membd_alpha, "radial exponent; omit to estimate per layer");
  membd->add_option("--t", membd_t, "temperature in (0, 1)");
  membd->add_option("--c", membd_c, "disk radius offset");
  add_train_flags(membd, membd_train);
  membd->add_option("--seed", membd_seed, "RNG seed")->required();
  membd->add_option("--out-prefix", membd_prefix, "output path prefix")->required();

  // eval
  auto* eval = app.add_subcommand("eval", "experiment harness");
  eval->require_subcommand(1);

  auto* hd = eval->add_subcommand("hdcorr", "pairwise hyperbolic distance correlation");
  std::string hd_truth, hd_inferred, hd_prefix;
  hd->add_option("--truth", hd_truth, "reference coordinates CSV")->required();
  hd->add_option("--inferred", hd_inferred, "inferred coordinates CSV")->required();
  hd->add_option("--out", hd_prefix, "report path prefix")->required();

  auto* lp = eval->add_subcommand("linkpred", "holdout link prediction AUC");
  std::string lp_graph, lp_scorer = "cn", lp_prefix;
  double lp_holdout = 0.1, lp_alpha = 0.0, lp_t = 0.5, lp_c = 0.0;
  uint64_t lp_seed = 0;
  TrainOpts lp_train;
  lp->add_option("--graph", lp_graph, "edge-list file")->required();
  lp->add_option("--scorer", lp_scorer, "cn|jaccard|aa|hyperbolic");
  lp->add_option("--holdout", lp_holdout, "removed edge fraction (0, 0.5]");
  lp->add_option("--alpha", lp_alpha, "hyperbolic scorer: radial exponent (omit to estimate)");
  lp->add_option("--t", lp_t, "hyperbolic scorer: temperature");
  lp->add_option("--c", lp_c, "hyperbolic scorer: disk offset");
  add_train_flags(lp, lp_train);
  lp->add_option("--seed", lp_seed, "RNG seed")->required();
  lp->add_option("--out", lp_prefix, "report path prefix")->required();

  auto* coh = eval->add_subcommand("coherence", "module coherence on fresh disk samples");
  std::vector<int> coh_sizes;
  std::string coh_clusterer = "infomap", coh_prefix;
  int coh_instances = 20;
  double coh_alpha = 0.6, coh_c = 2.0, coh_t = 0.1;
  uint64_t coh_seed = 0;
  coh->add_option("--sizes", coh_sizes, "network sizes (comma separated)")
      ->required()
      ->delimiter(',');
  coh->add_option("--instances", coh_instances, "samples per size");
  coh->add_option("--clusterer", coh_clusterer, "infomap|random");
  coh->add_option("--alpha", coh_alpha, "radial exponent");
  coh->add_option("--c", coh_c, "disk radius offset");
  coh->add_option("--t", coh_t, "temperature");
  coh->add_option("--seed", coh_seed, "RNG seed")->required();
  coh->add_option("--out", coh_prefix, "report path prefix")->required();

  auto* res = eval->add_subcommand("resolution", "detected vs predicted module counts");
  std::vector<std::string> res_graphs;
  std::string res_prefix;
  uint64_t res_seed = 0;
  res->add_option("--graph", res_graphs, "edge-list file (repeatable)")->required();
  res->add_option("--seed", res_seed, "RNG seed")->required();
  res->add_option("--out", res_prefix, "report path prefix")->required();

  auto* vio = eval->add_subcommand("violation", "cross-layer angular violation ratio");
  std::string vio_multiplex, vio_embedding, vio_prefix, vio_cn_mode = "intersection";
  bool vio_no_degree = false;
  vio->add_option("--multiplex", vio_multiplex, "multiplex edge-list file")->required();
  vio->add_option("--embedding", vio_embedding, "per-layer coordinates CSV")->required();
  vio->add_flag("--no-degree-filter", vio_no_degree, "drop the degree-interleaving condition");
  vio->add_option("--cn-mode", vio_cn_mode, "intersection|pairsum");
  vio->add_option("--out", vio_prefix, "report path prefix")->required();

  // replay
  auto* rep = app.add_subcommand("replay", "re-run the command recorded in a manifest");
  std::string rep_manifest;
  rep->add_option("manifest", rep_manifest, "manifest JSON path")->required();

  std::vector<const char*> argv;
  argv.push_back("hypermux");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (gen->parsed())
    return cmd_generate(args, gen_n, gen_alpha, gen_c, gen_t, gen_seed, gen_prefix);
  if (info->parsed()) return cmd_infomap(args, info_graph, info_seed, info_prefix, info_eval);
  if (emb->parsed())
    return cmd_embed(args, emb, emb_graph, emb_alpha, emb_t, emb_c, emb_train, emb_seed,
                     emb_prefix);
  if (membd->parsed())
    return cmd_embed_multiplex(args, membd, membd_path, membd_omega, membd_lambda_cross,
                               membd_alpha, membd_t, membd_c, membd_train, membd_seed,
                               membd_prefix);
  if (eval->parsed()) {
    if (hd->parsed()) return cmd_eval_hdcorr(args, hd_truth, hd_inferred, hd_prefix);
    if (lp->parsed())
      return cmd_eval_linkpred(args, lp, lp_graph, lp_scorer, lp_holdout, lp_alpha, lp_t, lp_c,
                               lp_train, lp_seed, lp_prefix);
    if (coh->parsed())
      return cmd_eval_coherence(args, coh_sizes, coh_clusterer, coh_instances, coh_alpha, coh_c,
                                coh_t, coh_seed, coh_prefix);
    if (res->parsed()) return cmd_eval_resolution(args, res_graphs, res_seed, res_prefix);
    if (vio->parsed())
      return cmd_eval_violation(args, vio_multiplex, vio_embedding, vio_no_degree, vio_cn_mode,
                                vio_prefix);
  }
  if (rep->parsed()) return cmd_replay(rep_manifest);
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  try {
    return run_args(args);
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const PowerIterationDivergence& e) {
    std::cerr << "numeric failure: " << e.what() << " (residual " << e.residual << ")\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  }
}
