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

// Experiment configuration and the end-to-end run pipeline shared by the
// command-line tool and the acceptance suite.
//
// Config files hold one "key = value" per line; '#' starts a comment. Keys
// outside the schema are rejected. Every key and default is listed by
// ConfigSchema().

#ifndef GRAPHREACH_EXPERIMENT_H_
#define GRAPHREACH_EXPERIMENT_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "graphreach/anchors.h"
#include "graphreach/graph.h"
#include "graphreach/model.h"
#include "graphreach/train.h"
#include "graphreach/walks.h"

namespace graphreach {

struct ConfigKey {
  std::string name;
  std::string default_value;
  std::string help;
};

const std::vector<ConfigKey>& ConfigSchema();

class ExperimentConfig {
 public:
  ExperimentConfig();  // all defaults

  static ExperimentConfig FromFile(const std::filesystem::path& path);
  // Parses "key=value" overrides, e.g. from the command line.
  void Set(const std::string& key, const std::string& value);
  void SetAssignment(const std::string& assignment);
  const std::string& Get(const std::string& key) const;

  // Parses every typed field; throws ConfigError on the first bad value.
  void Validate() const;

  std::size_t GetSize(const std::string& key) const;
  double GetDouble(const std::string& key) const;
  bool GetBool(const std::string& key) const;
  std::uint64_t GetU64(const std::string& key) const;

  TaskKind task() const;
  Setting setting() const;
  ModelConfig model() const;
  TrainConfig train() const;    // seed left at 0
  WalkConfig walks() const;     // seed left at 0; walk_length 0 means diameter
  AnchorStrategy anchor_strategy() const;
  AttackOptions attack() const;  // seed left at 0
  std::filesystem::path output_dir() const;
  std::vector<std::uint64_t> run_seeds() const;

  // Sorted "key = value" lines.
  std::string Canonical() const;
  // Hash of the canonical lines, leaving out output, jobs, walks.threads and
  // walks.cache, which do not change results.
  std::uint64_t Hash() const;
  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

struct Dataset {
  std::string name;
  std::vector<Graph> graphs;
  std::vector<std::vector<std::string>> original_ids;  // empty for generators
};

// Builds the configured dataset: communities, grid, caveman or files.
Dataset BuildDataset(const ExperimentConfig& config);

AnchorSet SelectAnchors(AnchorStrategy strategy, const WalkSet& walks, std::size_t k,
                        std::uint64_t seed, const ExperimentConfig& config);

std::uint64_t HashAnchors(const AnchorSet& anchors);
std::uint64_t HashWalks(const WalkSet& walks);

// Per-graph state of one run.
struct RunGraph {
  WalkConfig walk_config;  // resolved
  std::uint64_t walk_hash = 0;
  std::uint64_t anchor_hash = 0;
};

struct RunOutcome {
  std::uint64_t seed = 0;
  std::vector<PreparedGraph> prepared;
  std::vector<RunGraph> graphs;
  TrainResult train;
  double test_auc = 0.0;
};

// Splits, walks, anchors and inputs for every graph, derived from `seed`.
// `anchor_override` replaces selection (single-graph datasets only).
std::vector<PreparedGraph> PrepareGraphs(const ExperimentConfig& config,
                                         const Dataset& dataset, std::uint64_t seed,
                                         std::vector<RunGraph>* run_graphs,
                                         const std::optional<AnchorSet>& anchor_override = {});

ModelParams InitialParams(const ExperimentConfig& config,
                          const std::vector<PreparedGraph>& prepared, std::uint64_t seed);

RunOutcome RunOnce(const ExperimentConfig& config, const Dataset& dataset,
                   std::uint64_t seed, const std::optional<AnchorSet>& anchor_override = {});

struct Summary {
  double mean = 0.0;
  double std = 0.0;  // population standard deviation
};
Summary Summarize(const std::vector<double>& values);

// Writes model.grt and manifest.json into `dir`.
void SaveRun(const std::filesystem::path& dir, const ExperimentConfig& config,
             const Dataset& dataset, const RunOutcome& run);

struct LoadedRun {
  ExperimentConfig config;
  std::uint64_t seed = 0;
  ModelParams params;
  double test_auc = 0.0;
  std::vector<PreparedGraph> prepared;
  std::vector<RunGraph> graphs;
};

// Rebuilds a saved run and checks the walk and anchor hashes against the
// manifest. Throws DataError on any mismatch.
LoadedRun LoadRun(const std::filesystem::path& dir);

// JSON line writers. Each record carries the config hash.
std::string EpochRecordJson(const ExperimentConfig& config, const std::string& dataset,
                            std::uint64_t seed, const EpochRecord& record);
std::string FinalRecordJson(const ExperimentConfig& config, const std::string& dataset,
                            const RunOutcome& run);
std::string SummaryRecordJson(const ExperimentConfig& config, const std::string& dataset,
                              const std::vector<double>& test_aucs);

}  // namespace graphreach

#endif  // GRAPHREACH_EXPERIMENT_H_
