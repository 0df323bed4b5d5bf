// Copyright 2026 The GraphReach Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "graphreach/experiment.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "json.hpp"

namespace graphreach {
namespace {

using json = nlohmann::json;

std::string Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = Trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

const ConfigKey* FindKey(const std::string& name) {
  for (const auto& key : ConfigSchema()) {
    if (key.name == name) return &key;
  }
  return nullptr;
}

std::string WalkCachePath(const std::filesystem::path& dir, std::uint64_t graph_hash,
                          const WalkConfig& config) {
  return (dir / ("walks-" + HexDigest(graph_hash) + "-" + HexDigest(config.Hash()) + ".bin"))
      .string();
}

}  // namespace

const std::vector<ConfigKey>& ConfigSchema() {
  static const std::vector<ConfigKey> schema = {
      {"dataset", "communities", "communities | grid | caveman | files"},
      {"dataset.rows", "20", "grid rows"},
      {"dataset.cols", "20", "grid columns"},
      {"dataset.cliques", "20", "caveman clique count"},
      {"dataset.clique_size", "20", "caveman clique size"},
      {"dataset.edges", "", "comma-separated edge files (one per graph)"},
      {"dataset.attributes", "", "comma-separated attribute CSVs, aligned with dataset.edges"},
      {"dataset.labels", "", "comma-separated label CSVs, aligned with dataset.edges"},
      {"task", "pnc", "lp | pnc | nc"},
      {"setting", "inductive", "inductive | transductive"},
      {"seed", "0", "root seed; run r uses seed + r"},
      {"seeds", "3", "number of runs"},
      {"jobs", "1", "runs executed concurrently"},
      {"walks.num", "50", "walks per node"},
      {"walks.length", "diameter", "steps per walk, or diameter"},
      {"walks.threads", "1", "walk sampling threads"},
      {"walks.cache", "", "directory for cached walk sets"},
      {"anchors.strategy", "greedy", "greedy | frequency | random"},
      {"anchors.k", "log2n", "anchor count: integer, log2n for ceil((ln n)^2), or percent like 2.5%"},
      {"anchors.fraction", "0.3", "walk fraction per round for frequency selection"},
      {"anchors.rounds", "5", "rounds for frequency selection"},
      {"anchors.file", "", "use anchors from this file instead of selecting"},
      {"model.layers", "2", "message-passing layers"},
      {"model.hidden", "32", "hidden width"},
      {"model.aggregator", "attention", "mean | attention | equal"},
      {"model.similarity", "count", "count | ordered"},
      {"model.normalize_ordered", "false", "divide order-weighted similarity by walks.num"},
      {"model.dropout", "0.5", "dropout on hidden layers"},
      {"model.final", "identity", "identity | sigmoid on the output layer"},
      {"model.attention_slope", "0.2", "LeakyReLU slope in attention scores"},
      {"train.epochs", "2000", "training epochs"},
      {"train.lr", "0.01", "learning rate before train.lr_switch"},
      {"train.lr_late", "0.001", "learning rate from train.lr_switch on"},
      {"train.lr_switch", "200", "epoch at which the rate drops"},
      {"train.batch_size", "1", "graphs per optimizer step"},
      {"train.eval_interval", "10", "epochs between validation checks"},
      {"train.resample_negatives", "true", "lp: fresh training negatives every epoch"},
      {"train.beta1", "0.9", "Adam beta1"},
      {"train.beta2", "0.999", "Adam beta2"},
      {"train.eps", "1e-8", "Adam epsilon"},
      {"attack.fraction", "0.1", "colluding node (pnc) or pair (lp) fraction"},
      {"attack.hub_fraction", "0.02", "lp hub fraction of colluders"},
      {"attack.samples", "5", "colluding groups per attack"},
      {"attack.targets", "test", "test (test pairs touching a colluder) | clique (pnc: all colluder pairs)"},
      {"output", "runs", "output directory"},
  };
  return schema;
}

ExperimentConfig::ExperimentConfig() {
  for (const auto& key : ConfigSchema()) values_[key.name] = key.default_value;
}

ExperimentConfig ExperimentConfig::FromFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  ExperimentConfig config;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (Trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected key = value");
    }
    try {
      config.Set(Trim(line.substr(0, eq)), Trim(line.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return config;
}

void ExperimentConfig::Set(const std::string& key, const std::string& value) {
  if (!FindKey(key)) throw ConfigError("unknown config key '" + key + "'");
  values_[key] = value;
}

void ExperimentConfig::SetAssignment(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("expected key=value, got '" + assignment + "'");
  Set(Trim(assignment.substr(0, eq)), Trim(assignment.substr(eq + 1)));
}

const std::string& ExperimentConfig::Get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("unknown config key '" + key + "'");
  return it->second;
}

std::size_t ExperimentConfig::GetSize(const std::string& key) const {
  const std::string& text = Get(key);
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError(key + ": expected a non-negative integer, got '" + text + "'");
  }
  return value;
}

std::uint64_t ExperimentConfig::GetU64(const std::string& key) const {
  const std::string& text = Get(key);
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError(key + ": expected an unsigned integer, got '" + text + "'");
  }
  return value;
}

double ExperimentConfig::GetDouble(const std::string& key) const {
  const std::string& text = Get(key);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
    throw ConfigError(key + ": expected a number, got '" + text + "'");
  }
  return value;
}

bool ExperimentConfig::GetBool(const std::string& key) const {
  const std::string& text = Get(key);
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError(key + ": expected true or false, got '" + text + "'");
}

TaskKind ExperimentConfig::task() const { return ParseTaskKind(Get("task")); }
Setting ExperimentConfig::setting() const { return ParseSetting(Get("setting")); }

ModelConfig ExperimentConfig::model() const {
  ModelConfig m;
  m.layers = GetSize("model.layers");
  m.hidden = GetSize("model.hidden");
  m.aggregator = ParseAggregator(Get("model.aggregator"));
  const std::string& sim = Get("model.similarity");
  if (sim == "count") {
    m.similarity = SimilarityKind::kCount;
  } else if (sim == "ordered") {
    m.similarity = SimilarityKind::kOrdered;
  } else {
    throw ConfigError("model.similarity: expected count or ordered, got '" + sim + "'");
  }
  m.normalize_ordered = GetBool("model.normalize_ordered");
  m.dropout = GetDouble("model.dropout");
  const std::string& fin = Get("model.final");
  if (fin == "identity") {
    m.final_activation = FinalActivation::kIdentity;
  } else if (fin == "sigmoid") {
    m.final_activation = FinalActivation::kSigmoid;
  } else {
    throw ConfigError("model.final: expected identity or sigmoid, got '" + fin + "'");
  }
  m.attention_slope = GetDouble("model.attention_slope");
  m.Validate();
  return m;
}

TrainConfig ExperimentConfig::train() const {
  TrainConfig t;
  t.epochs = GetSize("train.epochs");
  if (t.epochs < 1) throw ConfigError("train.epochs must be >= 1");
  t.lr = GetDouble("train.lr");
  t.lr_late = GetDouble("train.lr_late");
  t.lr_switch_epoch = GetSize("train.lr_switch");
  t.batch_size = GetSize("train.batch_size");
  t.eval_interval = GetSize("train.eval_interval");
  t.resample_negatives = GetBool("train.resample_negatives");
  t.adam.beta1 = GetDouble("train.beta1");
  t.adam.beta2 = GetDouble("train.beta2");
  t.adam.eps = GetDouble("train.eps");
  t.Validate();
  return t;
}

WalkConfig ExperimentConfig::walks() const {
  WalkConfig w;
  w.num_walks = GetSize("walks.num");
  if (w.num_walks < 1) throw ConfigError("walks.num must be >= 1");
  w.walk_length = Get("walks.length") == "diameter" ? 0 : GetSize("walks.length");
  if (Get("walks.length") != "diameter" && w.walk_length < 1) {
    throw ConfigError("walks.length must be >= 1 or 'diameter'");
  }
  w.threads = GetSize("walks.threads");
  return w;
}

AnchorStrategy ExperimentConfig::anchor_strategy() const {
  return ParseAnchorStrategy(Get("anchors.strategy"));
}

AttackOptions ExperimentConfig::attack() const {
  AttackOptions a;
  a.fraction = GetDouble("attack.fraction");
  a.hub_fraction = GetDouble("attack.hub_fraction");
  a.samples = GetSize("attack.samples");
  if (!(a.fraction > 0.0 && a.fraction <= 1.0)) throw ConfigError("attack.fraction must be in (0, 1]");
  if (!(a.hub_fraction > 0.0 && a.hub_fraction <= 1.0)) {
    throw ConfigError("attack.hub_fraction must be in (0, 1]");
  }
  if (a.samples < 1) throw ConfigError("attack.samples must be >= 1");
  const std::string targets = Get("attack.targets");
  if (targets == "test") {
    a.targets = AttackTargets::kTestPairs;
  } else if (targets == "clique") {
    a.targets = AttackTargets::kClique;
  } else {
    throw ConfigError("attack.targets must be test or clique");
  }
  return a;
}

std::filesystem::path ExperimentConfig::output_dir() const { return Get("output"); }

std::vector<std::uint64_t> ExperimentConfig::run_seeds() const {
  const std::uint64_t root = GetU64("seed");
  const std::size_t count = GetSize("seeds");
  if (count < 1) throw ConfigError("seeds must be >= 1");
  std::vector<std::uint64_t> out;
  for (std::size_t r = 0; r < count; ++r) out.push_back(root + r);
  return out;
}

void ExperimentConfig::Validate() const {
  const std::string& ds = Get("dataset");
  if (ds != "communities" && ds != "grid" && ds != "caveman" && ds != "files") {
    throw ConfigError("dataset: expected communities, grid, caveman or files, got '" + ds + "'");
  }
  for (const char* key : {"dataset.rows", "dataset.cols", "dataset.cliques",
                          "dataset.clique_size", "anchors.rounds", "jobs"}) {
    if (GetSize(key) < 1) throw ConfigError(std::string(key) + " must be >= 1");
  }
  if (ds == "files" && SplitList(Get("dataset.edges")).empty()) {
    throw ConfigError("dataset=files needs dataset.edges");
  }
  const double fraction = GetDouble("anchors.fraction");
  if (!(fraction > 0.0 && fraction <= 1.0)) throw ConfigError("anchors.fraction must be in (0, 1]");
  ResolveAnchorCount(Get("anchors.k"), 1000);  // syntax check
  task();
  setting();
  model();
  train();
  walks();
  anchor_strategy();
  attack();
  run_seeds();
}

std::string ExperimentConfig::Canonical() const {
  std::string out;
  for (const auto& [key, value] : values_) out += key + " = " + value + "\n";
  return out;
}

std::uint64_t ExperimentConfig::Hash() const {
  // Keys that only steer execution stay out of the hash.
  static const std::set<std::string> kExecution = {"output", "jobs", "walks.threads",
                                                   "walks.cache"};
  std::string text;
  for (const auto& [key, value] : values_) {
    if (!kExecution.count(key)) text += key + " = " + value + "\n";
  }
  return Fnv1a(text);
}

Dataset BuildDataset(const ExperimentConfig& config) {
  Dataset out;
  out.name = config.Get("dataset");
  if (out.name == "communities") {
    out.graphs.push_back(GenerateConnectedCaveman(20, 20));
  } else if (out.name == "grid") {
    out.graphs.push_back(GenerateGrid(config.GetSize("dataset.rows"), config.GetSize("dataset.cols")));
  } else if (out.name == "caveman") {
    out.graphs.push_back(GenerateConnectedCaveman(config.GetSize("dataset.cliques"),
                                                  config.GetSize("dataset.clique_size")));
  } else if (out.name == "files") {
    const auto edges = SplitList(config.Get("dataset.edges"));
    const auto attrs = SplitList(config.Get("dataset.attributes"));
    const auto labels = SplitList(config.Get("dataset.labels"));
    if (edges.empty()) throw ConfigError("dataset=files needs dataset.edges");
    if ((!attrs.empty() && attrs.size() != edges.size()) ||
        (!labels.empty() && labels.size() != edges.size())) {
      throw ConfigError("dataset.attributes and dataset.labels must list one file per edge file");
    }
    for (std::size_t i = 0; i < edges.size(); ++i) {
      std::optional<std::filesystem::path> a, l;
      if (!attrs.empty()) a = attrs[i];
      if (!labels.empty()) l = labels[i];
      LoadedGraph loaded = LoadGraph(edges[i], a, l);
      out.graphs.push_back(std::move(loaded.graph));
      out.original_ids.push_back(std::move(loaded.original_ids));
    }
  } else {
    throw ConfigError("unknown dataset '" + out.name + "'");
  }
  return out;
}

AnchorSet SelectAnchors(AnchorStrategy strategy, const WalkSet& walks, std::size_t k,
                        std::uint64_t seed, const ExperimentConfig& config) {
  switch (strategy) {
    case AnchorStrategy::kGreedy:
      return GreedySelect(BuildBipartite(walks), k);
    case AnchorStrategy::kFrequency: {
      FrequencyOptions options;
      options.sample_fraction = config.GetDouble("anchors.fraction");
      options.rounds = config.GetSize("anchors.rounds");
      options.seed = seed;
      options.threads = config.GetSize("walks.threads");
      return FrequencySelect(walks, k, options);
    }
    case AnchorStrategy::kRandom:
      return RandomSelect(walks.num_nodes(), k, seed);
  }
  throw ConfigError("unknown anchor strategy");
}

std::uint64_t HashAnchors(const AnchorSet& anchors) {
  std::uint64_t h = Mix64(anchors.ids.size());
  for (NodeId id : anchors.ids) h = Mix64(h ^ id);
  return h;
}

std::uint64_t HashWalks(const WalkSet& walks) {
  std::uint64_t h = Mix64(walks.num_nodes() ^ (walks.num_walks() << 20) ^ (walks.walk_length() << 40));
  for (std::uint32_t len : walks.raw_lengths()) h = Mix64(h ^ len);
  for (NodeId id : walks.raw_traces()) h = Mix64(h ^ id);
  return h;
}

std::vector<PreparedGraph> PrepareGraphs(const ExperimentConfig& config,
                                         const Dataset& dataset, std::uint64_t seed,
                                         std::vector<RunGraph>* run_graphs,
                                         const std::optional<AnchorSet>& anchor_override) {
  config.Validate();
  if (dataset.graphs.empty()) throw DataError("dataset has no graphs");
  const std::string anchor_file = config.Get("anchors.file");
  if ((anchor_override || !anchor_file.empty()) && dataset.graphs.size() > 1) {
    throw ConfigError("fixed anchors need a single-graph dataset");
  }
  const TaskKind task = config.task();
  const Setting setting = config.setting();
  const ModelConfig model = config.model();
  const AnchorStrategy strategy = config.anchor_strategy();
  const std::string cache_dir = config.Get("walks.cache");

  // Graphs of one dataset share k so the class head has one shape.
  std::size_t k = std::numeric_limits<std::size_t>::max();
  for (const auto& g : dataset.graphs) {
    k = std::min(k, ResolveAnchorCount(config.Get("anchors.k"), g.num_nodes()));
  }

  std::vector<PreparedGraph> out;
  if (run_graphs) run_graphs->clear();
  for (std::size_t i = 0; i < dataset.graphs.size(); ++i) {
    PreparedGraph p;
    p.data = MakeSplits(dataset.graphs[i], task, setting, DeriveSeed(seed, "splits", i));
    const Graph& g = p.data.message_graph;

    WalkConfig wc = config.walks();
    wc.seed = DeriveSeed(seed, "walks", i);
    wc = ResolveWalkConfig(g, wc);
    std::optional<WalkSet> walks;
    if (!cache_dir.empty()) {
      const auto path = WalkCachePath(cache_dir, g.StructureHash(), wc);
      walks = LoadWalkCache(path, g.StructureHash(), wc);
      if (!walks) {
        walks = SampleWalks(g, wc);
        std::filesystem::create_directories(cache_dir);
        SaveWalkCache(*walks, g.StructureHash(), wc, path);
      }
    } else {
      walks = SampleWalks(g, wc);
    }

    AnchorSet anchors;
    if (anchor_override) {
      anchors = *anchor_override;
    } else if (!anchor_file.empty()) {
      anchors = LoadAnchors(anchor_file);
    } else {
      anchors = SelectAnchors(strategy, *walks, k, DeriveSeed(seed, "anchors", i), config);
    }
    for (NodeId a : anchors.ids) {
      if (a >= g.num_nodes()) {
        throw DataError("anchor " + std::to_string(a) + " is not a node of a " +
                        std::to_string(g.num_nodes()) + "-node graph");
      }
    }
    p.input = MakeModelInput(g, *walks, anchors, model, setting == Setting::kTransductive);
    if (run_graphs) run_graphs->push_back({wc, HashWalks(*walks), HashAnchors(anchors)});
    out.push_back(std::move(p));
  }
  return out;
}

ModelParams InitialParams(const ExperimentConfig& config,
                          const std::vector<PreparedGraph>& prepared, std::uint64_t seed) {
  if (prepared.empty()) throw ConfigError("no prepared graphs");
  const std::size_t dim = prepared.front().input.features.cols();
  const std::size_t k = prepared.front().input.num_anchors();
  std::size_t classes = 0;
  const bool nc = config.task() == TaskKind::kNodeClassification;
  for (const auto& p : prepared) {
    if (p.input.features.cols() != dim) {
      throw ConfigError("graphs have different feature widths; use the inductive setting");
    }
    if (nc && p.input.num_anchors() != k) throw ConfigError("graphs have different anchor counts");
    if (nc) classes = std::max(classes, p.data.message_graph.num_classes());
  }
  return ModelParams::Init(config.model(), dim, k, classes, seed);
}

RunOutcome RunOnce(const ExperimentConfig& config, const Dataset& dataset, std::uint64_t seed,
                   const std::optional<AnchorSet>& anchor_override) {
  RunOutcome run;
  run.seed = seed;
  run.prepared = PrepareGraphs(config, dataset, seed, &run.graphs, anchor_override);
  const ModelConfig model = config.model();
  TrainConfig train = config.train();
  train.seed = DeriveSeed(seed, "dropout");
  run.train = Train(run.prepared, InitialParams(config, run.prepared, seed), model, train);
  run.test_auc = EvaluateAuc(run.prepared, run.train.params, model, Split::kTest);
  return run;
}

Summary Summarize(const std::vector<double>& values) {
  Summary s;
  if (values.empty()) return s;
  for (double v : values) s.mean += v;
  s.mean /= static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) var += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(var / static_cast<double>(values.size()));
  return s;
}

void SaveRun(const std::filesystem::path& dir, const ExperimentConfig& config,
             const Dataset& dataset, const RunOutcome& run) {
  std::filesystem::create_directories(dir);
  ad::SaveTensors(run.train.params.Named(), dir / "model.grt");
  json manifest;
  manifest["format"] = "graphreach-run";
  manifest["version"] = 1;
  manifest["config"] = config.values();
  manifest["config_hash"] = HexDigest(config.Hash());
  manifest["dataset"] = dataset.name;
  manifest["seed"] = run.seed;
  manifest["test_auc"] = run.test_auc;
  manifest["best_val_auc"] = run.train.best_val_auc;
  manifest["best_epoch"] = run.train.best_epoch;
  json graphs = json::array();
  for (std::size_t i = 0; i < run.graphs.size(); ++i) {
    graphs.push_back({{"walk_hash", HexDigest(run.graphs[i].walk_hash)},
                      {"anchor_hash", HexDigest(run.graphs[i].anchor_hash)},
                      {"num_walks", run.graphs[i].walk_config.num_walks},
                      {"walk_length", run.graphs[i].walk_config.walk_length},
                      {"anchors", run.prepared[i].input.anchors}});
  }
  manifest["graphs"] = graphs;
  std::ofstream out(dir / "manifest.json");
  out << manifest.dump(2) << "\n";
  if (!out) throw DataError("failed writing " + (dir / "manifest.json").string());
}

LoadedRun LoadRun(const std::filesystem::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw DataError("no manifest.json in " + dir.string());
  json manifest;
  try {
    in >> manifest;
  } catch (const json::exception& e) {
    throw DataError("malformed manifest in " + dir.string() + ": " + e.what());
  }
  LoadedRun run;
  try {
    if (manifest.at("format") != "graphreach-run" || manifest.at("version") != 1) {
      throw DataError("unsupported manifest format in " + dir.string());
    }
    for (const auto& [key, value] : manifest.at("config").items()) {
      run.config.Set(key, value.get<std::string>());
    }
    if (HexDigest(run.config.Hash()) != manifest.at("config_hash").get<std::string>()) {
      throw DataError("manifest config hash does not match its config");
    }
    run.seed = manifest.at("seed").get<std::uint64_t>();
    run.test_auc = manifest.at("test_auc").get<double>();
    const Dataset dataset = BuildDataset(run.config);
    run.prepared = PrepareGraphs(run.config, dataset, run.seed, &run.graphs);
    const auto& graphs = manifest.at("graphs");
    if (graphs.size() != run.graphs.size()) throw DataError("manifest graph count mismatch");
    for (std::size_t i = 0; i < graphs.size(); ++i) {
      if (graphs[i].at("walk_hash").get<std::string>() != HexDigest(run.graphs[i].walk_hash)) {
        throw DataError("walk hash mismatch for graph " + std::to_string(i));
      }
      if (graphs[i].at("anchor_hash").get<std::string>() != HexDigest(run.graphs[i].anchor_hash)) {
        throw DataError("anchor hash mismatch for graph " + std::to_string(i));
      }
    }
  } catch (const json::exception& e) {
    throw DataError("malformed manifest in " + dir.string() + ": " + e.what());
  }
  run.params = ModelParams::FromNamed(ad::LoadTensors(dir / "model.grt"));
  return run;
}

std::string EpochRecordJson(const ExperimentConfig& config, const std::string& dataset,
                            std::uint64_t seed, const EpochRecord& record) {
  json j = {{"type", "epoch"},
            {"task", ToString(config.task())},
            {"dataset", dataset},
            {"seed", seed},
            {"epoch", record.epoch},
            {"lr", record.lr},
            {"val_auc", record.val_auc},
            {"config_hash", HexDigest(config.Hash())}};
  j["loss"] = std::isfinite(record.loss) ? json(record.loss) : json(nullptr);
  return j.dump();
}

std::string FinalRecordJson(const ExperimentConfig& config, const std::string& dataset,
                            const RunOutcome& run) {
  std::size_t sizes[3] = {0, 0, 0};
  for (const auto& p : run.prepared) {
    for (int s = 0; s < 3; ++s) {
      sizes[s] += p.data.task == TaskKind::kNodeClassification ? p.data.nodes[s].size()
                                                                : p.data.pairs[s].size();
    }
  }
  json j = {{"type", "final"},
            {"task", ToString(config.task())},
            {"dataset", dataset},
            {"seed", run.seed},
            {"split_sizes", {{"train", sizes[0]}, {"val", sizes[1]}, {"test", sizes[2]}}},
            {"best_epoch", run.train.best_epoch},
            {"val_auc", run.train.best_val_auc},
            {"test_auc", run.test_auc},
            {"config_hash", HexDigest(config.Hash())}};
  return j.dump();
}

std::string SummaryRecordJson(const ExperimentConfig& config, const std::string& dataset,
                              const std::vector<double>& test_aucs) {
  const Summary s = Summarize(test_aucs);
  json j = {{"type", "summary"},
            {"task", ToString(config.task())},
            {"dataset", dataset},
            {"runs", test_aucs.size()},
            {"auc_mean", s.mean},
            {"auc_std", s.std},
            {"config_hash", HexDigest(config.Hash())}};
  return j.dump();
}

}  // namespace graphreach
