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

// graphreach: command-line entry point.
//
// Exit codes: 0 success, 2 configuration error, 3 data error, 4 numeric or
// runtime error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "graphreach/anchors.h"
#include "graphreach/common.h"
#include "graphreach/experiment.h"
#include "graphreach/graph.h"
#include "graphreach/train.h"
#include "graphreach/walks.h"
#include "json.hpp"

namespace fs = std::filesystem;
using graphreach::ExperimentConfig;
using json = nlohmann::json;

namespace {

struct CommonFlags {
  std::string config_file;
  std::vector<std::string> sets;
  std::optional<std::string> output, dataset, task, setting, strategy, k, aggregator;
  std::optional<std::size_t> epochs, seeds, jobs;
  std::optional<std::uint64_t> seed;
  bool paper = false;
};

void AddCommon(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("-c,--config", f.config_file, "key = value config file");
  cmd->add_option("--set", f.sets, "override a config key (key=value); repeatable");
  cmd->add_option("-o,--output", f.output, "output directory (config key: output)");
  cmd->add_option("--dataset", f.dataset, "communities | grid | caveman | files");
  cmd->add_option("--task", f.task, "lp | pnc | nc");
  cmd->add_option("--setting", f.setting, "inductive | transductive");
  cmd->add_option("--strategy", f.strategy, "anchor strategy: greedy | frequency | random");
  cmd->add_option("--k", f.k, "anchor count: integer, log2n, or percent such as 2.5%");
  cmd->add_option("--aggregator", f.aggregator, "mean | attention | equal");
  cmd->add_option("--epochs", f.epochs, "training epochs");
  cmd->add_option("--seed", f.seed, "root seed");
  cmd->add_option("--seeds", f.seeds, "number of runs");
  cmd->add_option("--jobs", f.jobs, "runs executed concurrently");
  cmd->add_flag("--paper", f.paper, "10 runs per experiment");
}

ExperimentConfig BuildConfig(const CommonFlags& f) {
  ExperimentConfig c = f.config_file.empty() ? ExperimentConfig()
                                             : ExperimentConfig::FromFile(f.config_file);
  auto put = [&c](const char* key, const auto& value) {
    if (value) {
      if constexpr (std::is_same_v<std::decay_t<decltype(*value)>, std::string>) {
        c.Set(key, *value);
      } else {
        c.Set(key, std::to_string(*value));
      }
    }
  };
  if (f.paper) c.Set("seeds", "10");
  put("output", f.output);
  put("dataset", f.dataset);
  put("task", f.task);
  put("setting", f.setting);
  put("anchors.strategy", f.strategy);
  put("anchors.k", f.k);
  put("model.aggregator", f.aggregator);
  put("train.epochs", f.epochs);
  put("seed", f.seed);
  put("seeds", f.seeds);
  put("jobs", f.jobs);
  for (const auto& s : f.sets) c.SetAssignment(s);
  c.Validate();
  return c;
}

std::ofstream OpenOutput(const fs::path& path) {
  fs::create_directories(path.parent_path().empty() ? fs::path(".") : path.parent_path());
  std::ofstream out(path);
  if (!out) throw graphreach::DataError("cannot write " + path.string());
  return out;
}

void WriteConfigCopy(const ExperimentConfig& c, const fs::path& dir) {
  auto out = OpenOutput(dir / "config.txt");
  out << "# config_hash " << graphreach::HexDigest(c.Hash()) << "\n" << c.Canonical();
}

int CmdGen(const ExperimentConfig& c) {
  const auto dataset = graphreach::BuildDataset(c);
  const fs::path dir = c.output_dir();
  fs::create_directories(dir);
  json manifest = {{"config_hash", graphreach::HexDigest(c.Hash())}, {"dataset", dataset.name}};
  json files = json::array();
  for (std::size_t i = 0; i < dataset.graphs.size(); ++i) {
    const auto& g = dataset.graphs[i];
    const std::string stem = dataset.graphs.size() == 1 ? dataset.name
                                                        : dataset.name + "-" + std::to_string(i);
    const auto written = graphreach::SaveGraph(g, dir, stem);
    json entry = {{"edges", written.edges.string()},
                  {"nodes", g.num_nodes()},
                  {"num_edges", g.num_edges()},
                  {"structure_hash", graphreach::HexDigest(g.StructureHash())}};
    if (written.labels) entry["labels"] = written.labels->string();
    if (written.attributes) entry["attributes"] = written.attributes->string();
    files.push_back(entry);
    std::cout << "wrote " << written.edges.string() << "  n=" << g.num_nodes()
              << " |E|=" << g.num_edges();
    if (g.has_labels()) std::cout << " classes=" << g.num_classes();
    std::cout << "\n";
  }
  manifest["graphs"] = files;
  OpenOutput(dir / (dataset.name + ".manifest.json")) << manifest.dump(2) << "\n";
  return 0;
}

int CmdWalks(ExperimentConfig c) {
  if (c.Get("walks.cache").empty()) c.Set("walks.cache", (c.output_dir() / "walk-cache").string());
  const auto dataset = graphreach::BuildDataset(c);
  for (std::uint64_t seed : c.run_seeds()) {
    std::vector<graphreach::RunGraph> graphs;
    graphreach::PrepareGraphs(c, dataset, seed, &graphs);
    for (std::size_t i = 0; i < graphs.size(); ++i) {
      std::cout << "seed " << seed << " graph " << i << ": n_w=" << graphs[i].walk_config.num_walks
                << " l_w=" << graphs[i].walk_config.walk_length
                << " walk_hash=" << graphreach::HexDigest(graphs[i].walk_hash) << "\n";
    }
  }
  std::cout << "cache: " << c.Get("walks.cache") << "  config_hash "
            << graphreach::HexDigest(c.Hash()) << "\n";
  return 0;
}

int CmdAnchors(const ExperimentConfig& c) {
  const auto dataset = graphreach::BuildDataset(c);
  if (dataset.graphs.size() != 1) {
    throw graphreach::ConfigError("anchors writes one anchor file; use a single-graph dataset");
  }
  const std::uint64_t seed = c.run_seeds().front();
  const auto prepared = graphreach::PrepareGraphs(c, dataset, seed, nullptr);
  graphreach::AnchorSet anchors;
  anchors.ids = prepared.front().input.anchors;
  anchors.provenance = c.anchor_strategy();
  graphreach::AnchorFileHeader header;
  header.provenance = anchors.provenance;
  header.seed = seed;
  header.config_hash = c.Hash();
  const fs::path path = c.output_dir() / "anchors.txt";
  fs::create_directories(c.output_dir());
  graphreach::SaveAnchors(anchors, header, path);
  std::cout << "wrote " << path.string() << "  k=" << anchors.size() << " strategy="
            << graphreach::ToString(anchors.provenance) << "\n";
  return 0;
}

std::vector<graphreach::RunOutcome> RunAll(const ExperimentConfig& c,
                                           const graphreach::Dataset& dataset) {
  const auto seeds = c.run_seeds();
  std::vector<graphreach::RunOutcome> runs(seeds.size());
  graphreach::ParallelFor(seeds.size(), c.GetSize("jobs"), [&](std::size_t i) {
    runs[i] = graphreach::RunOnce(c, dataset, seeds[i]);
  });
  return runs;
}

int CmdTrain(const ExperimentConfig& c) {
  const auto dataset = graphreach::BuildDataset(c);
  const fs::path dir = c.output_dir();
  fs::create_directories(dir);
  WriteConfigCopy(c, dir);
  const auto runs = RunAll(c, dataset);
  auto metrics = OpenOutput(dir / "metrics.jsonl");
  std::vector<double> aucs;
  std::cout << std::left << std::setw(8) << "seed" << std::setw(12) << "best_epoch"
            << std::setw(10) << "val_auc" << "test_auc\n";
  for (const auto& run : runs) {
    for (const auto& rec : run.train.history) {
      metrics << graphreach::EpochRecordJson(c, dataset.name, run.seed, rec) << "\n";
    }
    metrics << graphreach::FinalRecordJson(c, dataset.name, run) << "\n";
    graphreach::SaveRun(dir / ("run-" + std::to_string(run.seed)), c, dataset, run);
    aucs.push_back(run.test_auc);
    std::cout << std::setw(8) << run.seed << std::setw(12) << run.train.best_epoch
              << std::setw(10) << std::fixed << std::setprecision(4) << run.train.best_val_auc
              << run.test_auc << "\n";
  }
  metrics << graphreach::SummaryRecordJson(c, dataset.name, aucs) << "\n";
  const auto s = graphreach::Summarize(aucs);
  std::cout << graphreach::ToString(c.task()) << " on " << dataset.name << ": test ROC AUC "
            << std::setprecision(4) << s.mean << " +/- " << s.std << " over " << aucs.size()
            << " runs  (config " << graphreach::HexDigest(c.Hash()) << ")\n";
  return 0;
}

int CmdEval(const fs::path& run_dir, const std::string& split_name) {
  graphreach::Split split;
  if (split_name == "train") {
    split = graphreach::Split::kTrain;
  } else if (split_name == "val") {
    split = graphreach::Split::kVal;
  } else if (split_name == "test") {
    split = graphreach::Split::kTest;
  } else {
    throw graphreach::ConfigError("--split must be train, val or test");
  }
  auto run = graphreach::LoadRun(run_dir);
  const double auc =
      graphreach::EvaluateAuc(run.prepared, run.params, run.config.model(), split);
  json j = {{"type", "eval"},
            {"split", split_name},
            {"seed", run.seed},
            {"auc", auc},
            {"config_hash", graphreach::HexDigest(run.config.Hash())}};
  if (split == graphreach::Split::kTest) j["matches_recorded"] = auc == run.test_auc;
  std::cout << j.dump() << "\n";
  return 0;
}

json AttackJson(const ExperimentConfig& c, std::uint64_t seed,
                const graphreach::AttackResult& r) {
  json samples = json::array();
  for (const auto& s : r.samples) {
    samples.push_back({{"colluders", s.colluders},
                       {"added_edges", s.added_edges},
                       {"targets", s.targets},
                       {"before", s.before},
                       {"after", s.after}});
  }
  return {{"type", "attack"},         {"task", graphreach::ToString(c.task())},
          {"seed", seed},             {"before", r.before},
          {"after", r.after},         {"delta", r.delta},
          {"targets", c.Get("attack.targets")},
          {"samples", samples},       {"config_hash", graphreach::HexDigest(c.Hash())}};
}

int CmdAttack(const ExperimentConfig& flags_config, const std::optional<fs::path>& run_dir) {
  std::vector<json> records;
  std::vector<double> deltas;
  auto attack_one = [&](const ExperimentConfig& c, std::uint64_t seed,
                        const graphreach::PreparedGraph& prepared, graphreach::ModelParams& params,
                        const graphreach::WalkConfig& walks) {
    auto options = c.attack();
    options.seed = graphreach::DeriveSeed(seed, "attack");
    const auto r = graphreach::EvaluateAttack(prepared, params, c.model(), walks, options);
    records.push_back(AttackJson(c, seed, r));
    deltas.push_back(r.delta);
    std::cout << "seed " << seed << ": before " << std::fixed << std::setprecision(4) << r.before
              << " after " << r.after << " delta " << r.delta << "\n";
  };
  fs::path out_dir;
  if (run_dir) {
    auto run = graphreach::LoadRun(*run_dir);
    if (run.prepared.size() != 1) throw graphreach::ConfigError("attack needs a single-graph run");
    // attack.* comes from this invocation, the rest from the saved run.
    for (const auto& [key, value] : flags_config.values()) {
      if (key.rfind("attack.", 0) == 0) run.config.Set(key, value);
    }
    attack_one(run.config, run.seed, run.prepared[0], run.params, run.graphs[0].walk_config);
    out_dir = *run_dir;
  } else {
    const auto dataset = graphreach::BuildDataset(flags_config);
    if (dataset.graphs.size() != 1) throw graphreach::ConfigError("attack needs a single-graph dataset");
    auto runs = RunAll(flags_config, dataset);
    for (auto& run : runs) {
      attack_one(flags_config, run.seed, run.prepared[0], run.train.params,
                 run.graphs[0].walk_config);
    }
    out_dir = flags_config.output_dir();
  }
  auto out = OpenOutput(out_dir / "attack.jsonl");
  for (const auto& r : records) out << r.dump() << "\n";
  const auto s = graphreach::Summarize(deltas);
  std::cout << "mean delta " << std::setprecision(4) << s.mean << " +/- " << s.std << "\n";
  return 0;
}

int CmdSweep(const ExperimentConfig& c, const std::string& key,
             const std::vector<std::string>& values) {
  if (key != "walks.length" && key != "walks.num" && key != "anchors.k" &&
      key != "anchors.strategy") {
    throw graphreach::ConfigError(
        "--key must be walks.length, walks.num, anchors.k or anchors.strategy");
  }
  if (values.empty()) throw graphreach::ConfigError("--values needs at least one value");
  std::vector<ExperimentConfig> configs;
  for (const auto& v : values) {
    ExperimentConfig vc = c;
    vc.Set(key, v);
    vc.Validate();
    configs.push_back(vc);
  }
  const auto dataset = graphreach::BuildDataset(c);
  const auto seeds = c.run_seeds();
  std::vector<double> aucs(configs.size() * seeds.size());
  graphreach::ParallelFor(aucs.size(), c.GetSize("jobs"), [&](std::size_t job) {
    const auto& vc = configs[job / seeds.size()];
    aucs[job] = graphreach::RunOnce(vc, dataset, seeds[job % seeds.size()]).test_auc;
  });
  fs::create_directories(c.output_dir());
  auto out = OpenOutput(c.output_dir() / "sweep.jsonl");
  std::cout << std::left << std::setw(14) << key << std::setw(10) << "mean" << "std\n";
  for (std::size_t i = 0; i < configs.size(); ++i) {
    std::vector<double> row(aucs.begin() + static_cast<std::ptrdiff_t>(i * seeds.size()),
                            aucs.begin() + static_cast<std::ptrdiff_t>((i + 1) * seeds.size()));
    const auto s = graphreach::Summarize(row);
    out << json({{"type", "sweep"},
                 {"key", key},
                 {"value", values[i]},
                 {"runs", row.size()},
                 {"auc_mean", s.mean},
                 {"auc_std", s.std},
                 {"test_aucs", row},
                 {"config_hash", graphreach::HexDigest(configs[i].Hash())}})
               .dump()
        << "\n";
    std::cout << std::setw(14) << values[i] << std::setw(10) << std::fixed << std::setprecision(4)
              << s.mean << s.std << "\n";
  }
  return 0;
}

void PrintKeys() {
  for (const auto& key : graphreach::ConfigSchema()) {
    std::cout << std::left << std::setw(26) << key.name << std::setw(14)
              << (key.default_value.empty() ? "\"\"" : key.default_value) << key.help << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GraphReach: position-aware graph neural networks over random-walk reachability"};
  app.require_subcommand(0, 1);
  bool list_keys = false;
  app.add_flag("--list-keys", list_keys, "print every config key with its default and exit");

  CommonFlags gen_f, walks_f, anchors_f, train_f, eval_f, attack_f, sweep_f;
  auto* gen = app.add_subcommand("gen", "write a synthetic dataset as edge and label files");
  AddCommon(gen, gen_f);
  auto* walks = app.add_subcommand("walks", "sample walks and cache them under the output directory");
  AddCommon(walks, walks_f);
  auto* anchors = app.add_subcommand("anchors", "select anchors and write an anchor file");
  AddCommon(anchors, anchors_f);
  auto* train = app.add_subcommand("train", "train, write checkpoints and metrics.jsonl");
  AddCommon(train, train_f);
  auto* eval = app.add_subcommand("eval", "score a saved run on one split");
  std::string run_dir, split = "test";
  eval->add_option("--run", run_dir, "run directory written by train")->required();
  eval->add_option("--split", split, "train | val | test");
  auto* attack = app.add_subcommand("attack", "collusion attack on a trained model");
  AddCommon(attack, attack_f);
  std::string attack_run;
  attack->add_option("--run", attack_run, "attack this saved run instead of training");
  auto* sweep = app.add_subcommand("sweep", "vary one parameter and report mean test AUC");
  AddCommon(sweep, sweep_f);
  std::string sweep_key;
  std::vector<std::string> sweep_values;
  sweep->add_option("--key", sweep_key, "walks.length | walks.num | anchors.k | anchors.strategy")
      ->required();
  sweep->add_option("--values", sweep_values, "values to try, comma separated")
      ->required()
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (list_keys) {
      PrintKeys();
      return 0;
    }
    if (*gen) return CmdGen(BuildConfig(gen_f));
    if (*walks) return CmdWalks(BuildConfig(walks_f));
    if (*anchors) return CmdAnchors(BuildConfig(anchors_f));
    if (*train) return CmdTrain(BuildConfig(train_f));
    if (*eval) return CmdEval(run_dir, split);
    if (*attack) {
      std::optional<fs::path> dir;
      if (!attack_run.empty()) dir = attack_run;
      return CmdAttack(BuildConfig(attack_f), dir);
    }
    if (*sweep) return CmdSweep(BuildConfig(sweep_f), sweep_key, sweep_values);
    std::cout << app.help();
    return 0;
  } catch (const graphreach::ConfigError& e) {
    std::cerr << "graphreach: config error: " << e.what() << "\n";
    return 2;
  } catch (const graphreach::DataError& e) {
    std::cerr << "graphreach: data error: " << e.what() << "\n";
    return 3;
  } catch (const graphreach::NumericError& e) {
    std::cerr << "graphreach: numeric error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "graphreach: error: " << e.what() << "\n";
    return 4;
  }
}
