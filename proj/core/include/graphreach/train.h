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

// Task construction, training, scoring and the collusion attacks.

#ifndef GRAPHREACH_TRAIN_H_
#define GRAPHREACH_TRAIN_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "graphreach/graph.h"
#include "graphreach/model.h"
#include "graphreach/tensor.h"
#include "graphreach/walks.h"

namespace graphreach {

// Link prediction, pairwise node classification, node classification.
enum class TaskKind { kLinkPrediction, kPairwiseNodeClassification, kNodeClassification };
enum class Setting { kInductive, kTransductive };

std::string ToString(TaskKind task);     // lp | pnc | nc
TaskKind ParseTaskKind(const std::string& name);
std::string ToString(Setting setting);   // inductive | transductive
Setting ParseSetting(const std::string& name);

struct PairSet {
  std::vector<NodeId> u;
  std::vector<NodeId> v;
  std::vector<double> label;  // 1 positive, 0 negative

  std::size_t size() const { return label.size(); }
  void Add(NodeId a, NodeId b, double y) {
    u.push_back(a);
    v.push_back(b);
    label.push_back(y);
  }
};

struct NodeSet {
  std::vector<NodeId> nodes;
  std::vector<int> label;

  std::size_t size() const { return nodes.size(); }
};

enum class Split { kTrain, kVal, kTest };

struct TaskDataset {
  TaskKind task = TaskKind::kLinkPrediction;
  Setting setting = Setting::kInductive;
  // Graph used for walks and message passing. For LP it holds only the
  // training positives.
  Graph message_graph;
  PairSet pairs[3];  // indexed by Split; LP and PNC
  NodeSet nodes[3];  // indexed by Split; NC
  // LP only: sorted keys of every edge of the full graph and every held-out
  // pair. Resampled training negatives avoid them.
  std::vector<std::uint64_t> reserved;

  const PairSet& pair_split(Split s) const { return pairs[static_cast<int>(s)]; }
  const NodeSet& node_split(Split s) const { return nodes[static_cast<int>(s)]; }
  bool transductive() const { return setting == Setting::kTransductive; }
};

// Key of an ordered pair, canonicalised to u < v for undirected graphs.
std::uint64_t PairKey(NodeId u, NodeId v, bool directed);

// 80:10:10 split of edges (LP), labelled pairs (PNC) or labelled nodes (NC).
// LP negatives are non-edges of `graph`, balanced per split and disjoint.
// PNC positives are all same-class pairs, sampled down to 10 n when larger;
// negatives are an equal number of differing-class pairs.
TaskDataset MakeSplits(const Graph& graph, TaskKind task, Setting setting,
                       std::uint64_t seed);

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::size_t step = 0;
};

// One bias-corrected Adam update of `param` in place.
void AdamStep(std::span<double> param, std::span<const double> grad, AdamState& state,
              double lr, const AdamConfig& config = {});

class Adam {
 public:
  Adam(std::vector<ad::Tensor*> params, AdamConfig config = {});

  void Step(double lr);
  void ZeroGrad();

 private:
  std::vector<ad::Tensor*> params_;
  std::vector<AdamState> states_;
  AdamConfig config_;
};

struct TrainConfig {
  std::size_t epochs = 2000;
  double lr = 0.01;
  double lr_late = 0.001;
  std::size_t lr_switch_epoch = 200;
  std::size_t batch_size = 1;  // graphs per optimizer step
  AdamConfig adam;
  std::uint64_t seed = 0;
  std::size_t eval_interval = 10;
  // LP: draw fresh training negatives every epoch instead of reusing the
  // split's fixed set.
  bool resample_negatives = true;

  void Validate() const;
  double LearningRate(std::size_t epoch) const;  // epoch is 0-based
};

// One graph ready for the network.
struct PreparedGraph {
  TaskDataset data;
  ModelInput input;
};

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based; 0 is the initial evaluation
  double loss = 0.0;      // NaN for the initial record
  double lr = 0.0;
  double val_auc = 0.0;
};

struct TrainResult {
  ModelParams params;  // at the best validation AUC
  std::vector<EpochRecord> history;
  std::size_t best_epoch = 0;
  double best_val_auc = 0.0;
};

// Adam on the task loss, evaluating validation AUC every eval_interval epochs
// and at the last epoch. Returns the parameters of the best evaluation.
TrainResult Train(std::span<const PreparedGraph> graphs, ModelParams initial,
                  const ModelConfig& model, const TrainConfig& train);

// Decoded scores of one split: pair probabilities or per-node class
// probabilities (rows of an n x C tensor flattened).
std::vector<double> ScorePairs(const ModelInput& input, ModelParams& params,
                               const ModelConfig& config, const PairSet& pairs);
ad::Tensor ClassProbabilities(const ModelInput& input, ModelParams& params,
                              const ModelConfig& config, std::span<const NodeId> nodes);

// Task AUC over every graph's `split`.
double EvaluateAuc(std::span<const PreparedGraph> graphs, ModelParams& params,
                   const ModelConfig& config, Split split);

// Mann-Whitney AUC with average ranks for ties.
double RocAuc(std::span<const double> scores, std::span<const double> labels);
// Mean one-vs-rest AUC over classes present with both outcomes.
double MacroRocAuc(const ad::Tensor& probs, std::span<const int> labels);

struct Collusion {
  Graph graph;
  std::vector<NodeId> colluders;  // sorted
  std::vector<NodeId> hubs;       // LP only, sorted
  std::size_t added_edges = 0;
};

// Samples ceil(fraction * n) nodes and completes them into a clique.
Collusion CollusionAttackPnc(const Graph& graph, double fraction, std::uint64_t seed);

// Samples ceil(pair_fraction * |candidates|) of the candidate non-adjacent
// pairs (all non-adjacent pairs of `graph` when `candidates` is empty). Their
// endpoints collude: the max(1, ceil(hub_fraction * |C|)) highest-degree
// colluders become hubs and every other colluder links to every hub.
Collusion CollusionAttackLp(const Graph& graph, double pair_fraction, double hub_fraction,
                            std::uint64_t seed, const PairSet* candidates = nullptr);

// Pairs scored before and after collusion. kTestPairs: test pairs with a
// colluding endpoint (both tasks). kClique: every pair inside the colluding
// set (pnc only).
enum class AttackTargets { kTestPairs, kClique };

struct AttackOptions {
  AttackTargets targets = AttackTargets::kTestPairs;
  double fraction = 0.10;
  double hub_fraction = 0.02;
  std::size_t samples = 5;
  std::uint64_t seed = 0;
};

struct AttackSample {
  std::size_t colluders = 0;
  std::size_t added_edges = 0;
  std::size_t targets = 0;
  double before = 0.0;
  double after = 0.0;
};

struct AttackResult {
  double before = 0.0;
  double after = 0.0;
  double delta = 0.0;  // before - after
  std::vector<AttackSample> samples;
};

// Attacks the message graph of a trained single-graph task and rescoring with
// frozen parameters and anchors. Walks are resampled on the perturbed graph
// with `walk_config` (fully resolved). PNC targets are all colluder pairs;
// LP targets are test pairs touching a colluder.
AttackResult EvaluateAttack(const PreparedGraph& prepared, ModelParams& params,
                            const ModelConfig& model, const WalkConfig& walk_config,
                            const AttackOptions& options);

}  // namespace graphreach

#endif  // GRAPHREACH_TRAIN_H_
