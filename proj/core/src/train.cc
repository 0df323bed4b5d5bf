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

#include "graphreach/train.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <unordered_set>
#include <utility>

#include "graphreach/anchors.h"

namespace graphreach {
namespace {

using ad::Tape;
using ad::Tensor;
using ad::Var;

struct SplitSizes {
  std::size_t train, val, test;
};

SplitSizes EightyTenTen(std::size_t total, const char* unit) {
  const auto tenth = static_cast<std::size_t>(std::llround(0.1 * static_cast<double>(total)));
  if (tenth == 0 || total < 2 * tenth + 1) {
    throw DataError("too few " + std::string(unit) + " to split 80:10:10 (" +
                    std::to_string(total) + ")");
  }
  return {total - 2 * tenth, tenth, tenth};
}

// Uniform ordered pair of distinct nodes, canonicalised to u < v when undirected.
std::pair<NodeId, NodeId> RandomPair(std::size_t n, bool directed, std::mt19937_64& rng) {
  std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(n - 1));
  for (;;) {
    NodeId u = pick(rng), v = pick(rng);
    if (u == v) continue;
    if (!directed && u > v) std::swap(u, v);
    return {u, v};
  }
}

double PairCount(std::size_t n, bool directed) {
  const double nn = static_cast<double>(n);
  return directed ? nn * (nn - 1.0) : nn * (nn - 1.0) / 2.0;
}

// Distributes `items` over the three splits in order.
template <typename T, typename Emit>
void Distribute(const std::vector<T>& items, const SplitSizes& sizes, Emit emit) {
  for (std::size_t i = 0; i < items.size(); ++i) {
    const Split s = i < sizes.train                ? Split::kTrain
                    : i < sizes.train + sizes.val ? Split::kVal
                                                  : Split::kTest;
    emit(s, items[i]);
  }
}

void LinkPredictionSplits(const Graph& graph, std::mt19937_64& rng, TaskDataset& out) {
  std::vector<Edge> edges = graph.edges();
  const SplitSizes sizes = EightyTenTen(edges.size(), "edges");
  std::shuffle(edges.begin(), edges.end(), rng);

  const double available = PairCount(graph.num_nodes(), graph.directed()) -
                           static_cast<double>(graph.num_edges());
  if (available < static_cast<double>(edges.size())) {
    throw DataError("graph is too dense to sample " + std::to_string(edges.size()) +
                    " negative pairs");
  }
  std::unordered_set<std::uint64_t> used;
  std::vector<std::pair<NodeId, NodeId>> negatives;
  while (negatives.size() < edges.size()) {
    auto [u, v] = RandomPair(graph.num_nodes(), graph.directed(), rng);
    if (graph.HasEdge(u, v) || !used.insert(PairKey(u, v, true)).second) continue;
    negatives.emplace_back(u, v);
  }

  std::vector<Edge> kept;
  Distribute(edges, sizes, [&](Split s, const Edge& e) {
    out.pairs[static_cast<int>(s)].Add(e.u, e.v, 1.0);
    if (s == Split::kTrain) kept.push_back(e);
  });
  Distribute(negatives, sizes, [&](Split s, const std::pair<NodeId, NodeId>& p) {
    out.pairs[static_cast<int>(s)].Add(p.first, p.second, 0.0);
  });
  out.message_graph = graph.WithEdges(std::move(kept));
  for (const Edge& e : graph.edges()) out.reserved.push_back(PairKey(e.u, e.v, graph.directed()));
  for (Split s : {Split::kVal, Split::kTest}) {
    const PairSet& set = out.pair_split(s);
    for (std::size_t i = 0; i < set.size(); ++i) {
      out.reserved.push_back(PairKey(set.u[i], set.v[i], graph.directed()));
    }
  }
  std::sort(out.reserved.begin(), out.reserved.end());
  out.reserved.erase(std::unique(out.reserved.begin(), out.reserved.end()), out.reserved.end());
}

// Replaces the negatives of an LP training set with fresh non-reserved pairs.
void ResampleNegatives(const TaskDataset& data, PairSet& train, std::uint64_t seed) {
  const Graph& g = data.message_graph;
  std::mt19937_64 rng(seed);
  std::unordered_set<std::uint64_t> used;
  for (std::size_t i = 0; i < train.size(); ++i) {
    if (train.label[i] < 0.5) {
      for (;;) {
        auto [u, v] = RandomPair(g.num_nodes(), g.directed(), rng);
        const std::uint64_t key = PairKey(u, v, g.directed());
        if (std::binary_search(data.reserved.begin(), data.reserved.end(), key) ||
            !used.insert(key).second) {
          continue;
        }
        train.u[i] = u;
        train.v[i] = v;
        break;
      }
    }
  }
}

void PairwiseClassSplits(const Graph& graph, std::mt19937_64& rng, TaskDataset& out) {
  if (!graph.has_labels()) throw DataError("pairwise node classification needs labels");
  const auto& labels = graph.labels();
  const std::size_t n = graph.num_nodes();
  if (graph.num_classes() < 2) throw DataError("pairwise node classification needs two classes");

  std::vector<std::size_t> class_size(graph.num_classes(), 0);
  for (int c : labels) ++class_size[static_cast<std::size_t>(c)];
  double same = 0.0;
  for (std::size_t c : class_size) same += static_cast<double>(c) * (c - 1.0) / 2.0;
  const double differ = PairCount(n, false) - same;
  const std::size_t cap = 10 * n;

  std::vector<std::pair<NodeId, NodeId>> positives;
  if (same <= static_cast<double>(cap)) {
    for (NodeId u = 0; u < n; ++u) {
      for (NodeId v = u + 1; v < n; ++v) {
        if (labels[u] == labels[v]) positives.emplace_back(u, v);
      }
    }
  } else {
    std::unordered_set<std::uint64_t> used;
    while (positives.size() < cap) {
      auto [u, v] = RandomPair(n, false, rng);
      if (labels[u] != labels[v] || !used.insert(PairKey(u, v, true)).second) continue;
      positives.emplace_back(u, v);
    }
  }
  if (differ < static_cast<double>(positives.size())) {
    throw DataError("not enough differing-class pairs to balance " +
                    std::to_string(positives.size()) + " positives");
  }
  std::vector<std::pair<NodeId, NodeId>> negatives;
  std::unordered_set<std::uint64_t> used;
  while (negatives.size() < positives.size()) {
    auto [u, v] = RandomPair(n, false, rng);
    if (labels[u] == labels[v] || !used.insert(PairKey(u, v, true)).second) continue;
    negatives.emplace_back(u, v);
  }
  std::shuffle(positives.begin(), positives.end(), rng);
  const SplitSizes sizes = EightyTenTen(positives.size(), "labelled pairs");
  auto emit = [&out](double y) {
    return [&out, y](Split s, const std::pair<NodeId, NodeId>& p) {
      out.pairs[static_cast<int>(s)].Add(p.first, p.second, y);
    };
  };
  Distribute(positives, sizes, emit(1.0));
  Distribute(negatives, sizes, emit(0.0));
  out.message_graph = graph;
}

void NodeClassSplits(const Graph& graph, std::mt19937_64& rng, TaskDataset& out) {
  if (!graph.has_labels()) throw DataError("node classification needs labels");
  std::vector<NodeId> nodes(graph.num_nodes());
  std::iota(nodes.begin(), nodes.end(), 0);
  std::shuffle(nodes.begin(), nodes.end(), rng);
  const SplitSizes sizes = EightyTenTen(nodes.size(), "labelled nodes");
  Distribute(nodes, sizes, [&](Split s, NodeId v) {
    auto& set = out.nodes[static_cast<int>(s)];
    set.nodes.push_back(v);
    set.label.push_back(graph.labels()[v]);
  });
  out.message_graph = graph;
}

Var TaskLoss(Tape& tape, const PreparedGraph& g, const PairSet& train_pairs,
             ModelParams& params, const ModelConfig& config, bool training,
             std::uint64_t dropout_seed) {
  const ForwardResult fwd = Forward(tape, g.input, params, config, training, dropout_seed);
  if (g.data.task == TaskKind::kNodeClassification) {
    const NodeSet& train = g.data.node_split(Split::kTrain);
    Var log_probs = DecodeNode(ad::SelectRows(fwd.embeddings, train.nodes),
                               tape.Param(*params.class_weight),
                               tape.Param(*params.class_bias));
    return NllLoss(log_probs, train.label);
  }
  return BceWithLogitsLoss(PairLogits(fwd.embeddings, train_pairs.u, train_pairs.v),
                           train_pairs.label);
}

std::vector<NodeId> SampleNodes(std::size_t n, std::size_t m, std::mt19937_64& rng) {
  std::vector<NodeId> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  for (std::size_t i = 0; i < m; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(ids[i], ids[pick(rng)]);
  }
  ids.resize(m);
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::size_t CeilFraction(double fraction, std::size_t total) {
  return static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(total) - 1e-9));
}

void CheckFraction(double f, const char* what) {
  if (!(f > 0.0 && f <= 1.0)) throw ConfigError(std::string(what) + " must be in (0, 1]");
}

void AddEdge(std::vector<Edge>& edges, const Graph& graph, NodeId a, NodeId b,
             std::size_t& added) {
  if (!graph.HasEdge(a, b)) {
    edges.push_back({a, b, 1.0});
    ++added;
  }
  if (graph.directed() && !graph.HasEdge(b, a)) {
    edges.push_back({b, a, 1.0});
    ++added;
  }
}

}  // namespace

std::uint64_t PairKey(NodeId u, NodeId v, bool directed) {
  if (!directed && u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(u) << 32) | v;
}

std::string ToString(TaskKind task) {
  switch (task) {
    case TaskKind::kLinkPrediction:
      return "lp";
    case TaskKind::kPairwiseNodeClassification:
      return "pnc";
    case TaskKind::kNodeClassification:
      return "nc";
  }
  return "unknown";
}

TaskKind ParseTaskKind(const std::string& name) {
  if (name == "lp") return TaskKind::kLinkPrediction;
  if (name == "pnc") return TaskKind::kPairwiseNodeClassification;
  if (name == "nc") return TaskKind::kNodeClassification;
  throw ConfigError("unknown task '" + name + "' (expected lp, pnc or nc)");
}

std::string ToString(Setting setting) {
  return setting == Setting::kInductive ? "inductive" : "transductive";
}

Setting ParseSetting(const std::string& name) {
  if (name == "inductive") return Setting::kInductive;
  if (name == "transductive") return Setting::kTransductive;
  throw ConfigError("unknown setting '" + name + "' (expected inductive or transductive)");
}

TaskDataset MakeSplits(const Graph& graph, TaskKind task, Setting setting,
                       std::uint64_t seed) {
  TaskDataset out;
  out.task = task;
  out.setting = setting;
  std::mt19937_64 rng(DeriveSeed(seed, "splits"));
  switch (task) {
    case TaskKind::kLinkPrediction:
      LinkPredictionSplits(graph, rng, out);
      break;
    case TaskKind::kPairwiseNodeClassification:
      PairwiseClassSplits(graph, rng, out);
      break;
    case TaskKind::kNodeClassification:
      NodeClassSplits(graph, rng, out);
      break;
  }
  return out;
}

void AdamStep(std::span<double> param, std::span<const double> grad, AdamState& state,
              double lr, const AdamConfig& config) {
  if (param.size() != grad.size()) throw NumericError("adam: gradient size mismatch");
  if (state.m.empty()) {
    state.m.assign(param.size(), 0.0);
    state.v.assign(param.size(), 0.0);
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(config.beta1, t);
  const double c2 = 1.0 - std::pow(config.beta2, t);
  for (std::size_t i = 0; i < param.size(); ++i) {
    state.m[i] = config.beta1 * state.m[i] + (1.0 - config.beta1) * grad[i];
    state.v[i] = config.beta2 * state.v[i] + (1.0 - config.beta2) * grad[i] * grad[i];
    param[i] -= lr * (state.m[i] / c1) / (std::sqrt(state.v[i] / c2) + config.eps);
  }
}

Adam::Adam(std::vector<ad::Tensor*> params, AdamConfig config)
    : params_(std::move(params)), states_(params_.size()), config_(config) {}

void Adam::Step(double lr) {
  for (std::size_t i = 0; i < params_.size(); ++i) {
    AdamStep(params_[i]->values(), params_[i]->grad(), states_[i], lr, config_);
  }
}

void Adam::ZeroGrad() {
  for (Tensor* p : params_) p->ZeroGrad();
}

void TrainConfig::Validate() const {
  if (!(lr > 0.0) || !(lr_late > 0.0)) throw ConfigError("learning rates must be > 0");
  if (batch_size < 1) throw ConfigError("batch size must be >= 1");
  if (eval_interval < 1) throw ConfigError("eval interval must be >= 1");
  if (!(adam.beta1 >= 0.0 && adam.beta1 < 1.0 && adam.beta2 >= 0.0 && adam.beta2 < 1.0)) {
    throw ConfigError("Adam betas must be in [0, 1)");
  }
  if (!(adam.eps > 0.0)) throw ConfigError("Adam epsilon must be > 0");
}

double TrainConfig::LearningRate(std::size_t epoch) const {
  return epoch < lr_switch_epoch ? lr : lr_late;
}

TrainResult Train(std::span<const PreparedGraph> graphs, ModelParams initial,
                  const ModelConfig& model, const TrainConfig& train) {
  model.Validate();
  train.Validate();
  if (graphs.empty()) throw ConfigError("no graphs to train on");
  RetainFreedMemory();
  const TaskKind task = graphs.front().data.task;
  for (const auto& g : graphs) {
    if (g.data.task != task) throw ConfigError("graphs disagree on the task");
  }
  if (task == TaskKind::kNodeClassification && !initial.class_weight) {
    throw ConfigError("node classification needs a class head");
  }

  TrainResult result;
  result.params = initial;
  ModelParams params = std::move(initial);
  for (Tensor* p : params.Trainable()) p->ZeroGrad();
  Adam adam(params.Trainable(), train.adam);

  result.best_val_auc = EvaluateAuc(graphs, params, model, Split::kVal);
  result.history.push_back(
      {0, std::numeric_limits<double>::quiet_NaN(), train.LearningRate(0), result.best_val_auc});

  std::vector<PairSet> train_pairs;
  for (const auto& g : graphs) train_pairs.push_back(g.data.pair_split(Split::kTrain));
  const bool resample = task == TaskKind::kLinkPrediction && train.resample_negatives;

  std::vector<std::size_t> order(graphs.size());
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t epoch = 1; epoch <= train.epochs; ++epoch) {
    const double lr = train.LearningRate(epoch - 1);
    if (order.size() > 1) {
      std::mt19937_64 rng(DeriveSeed(train.seed, "batches", epoch));
      std::shuffle(order.begin(), order.end(), rng);
    }
    double epoch_loss = 0.0;
    try {
      for (std::size_t start = 0; start < order.size(); start += train.batch_size) {
        const std::size_t end = std::min(order.size(), start + train.batch_size);
        const double weight = 1.0 / static_cast<double>(end - start);
        for (std::size_t i = start; i < end; ++i) {
          Tape tape;
          const std::size_t gi = order[i];
          const std::uint64_t stream = epoch * order.size() + gi;
          if (resample) {
            ResampleNegatives(graphs[gi].data, train_pairs[gi],
                              DeriveSeed(train.seed, "negatives", stream));
          }
          Var loss = TaskLoss(tape, graphs[gi], train_pairs[gi], params, model, true,
                              DeriveSeed(train.seed, "dropout", stream));
          epoch_loss += loss.value()(0, 0);
          tape.Backward(ad::Scale(loss, weight));
        }
        adam.Step(lr);
        adam.ZeroGrad();
      }
    } catch (const NumericError& e) {
      throw NumericError("training diverged at epoch " + std::to_string(epoch) + ": " +
                         e.what());
    }
    epoch_loss /= static_cast<double>(order.size());
    if (!std::isfinite(epoch_loss)) {
      throw NumericError("training diverged at epoch " + std::to_string(epoch) +
                         ": non-finite loss");
    }
    if (epoch % train.eval_interval == 0 || epoch == train.epochs) {
      const double val = EvaluateAuc(graphs, params, model, Split::kVal);
      result.history.push_back({epoch, epoch_loss, lr, val});
      if (val > result.best_val_auc) {
        result.best_val_auc = val;
        result.best_epoch = epoch;
        result.params = params;
      }
    }
  }
  for (Tensor* p : result.params.Trainable()) p->ZeroGrad();
  return result;
}

std::vector<double> ScorePairs(const ModelInput& input, ModelParams& params,
                               const ModelConfig& config, const PairSet& pairs) {
  Tape tape;
  const ForwardResult fwd = Forward(tape, input, params, config, false);
  Var probs = ad::Sigmoid(PairLogits(fwd.embeddings, pairs.u, pairs.v));
  const auto values = probs.value().values();
  return {values.begin(), values.end()};
}

ad::Tensor ClassProbabilities(const ModelInput& input, ModelParams& params,
                              const ModelConfig& config, std::span<const NodeId> nodes) {
  if (!params.class_weight) throw ConfigError("model has no class head");
  Tape tape;
  const ForwardResult fwd = Forward(tape, input, params, config, false);
  Var log_probs = DecodeNode(ad::SelectRows(fwd.embeddings, nodes),
                             tape.Param(*params.class_weight), tape.Param(*params.class_bias));
  Tensor probs = log_probs.value();
  for (double& x : probs.values()) x = std::exp(x);
  return probs;
}

double EvaluateAuc(std::span<const PreparedGraph> graphs, ModelParams& params,
                   const ModelConfig& config, Split split) {
  if (graphs.empty()) throw ConfigError("no graphs to evaluate");
  if (graphs.front().data.task == TaskKind::kNodeClassification) {
    std::vector<double> rows;
    std::vector<int> labels;
    std::size_t classes = 0;
    for (const auto& g : graphs) {
      const NodeSet& set = g.data.node_split(split);
      if (set.size() == 0) continue;
      Tensor probs = ClassProbabilities(g.input, params, config, set.nodes);
      classes = probs.cols();
      rows.insert(rows.end(), probs.values().begin(), probs.values().end());
      labels.insert(labels.end(), set.label.begin(), set.label.end());
    }
    if (labels.empty()) throw DataError("evaluation split is empty");
    return MacroRocAuc(Tensor(labels.size(), classes, std::move(rows)), labels);
  }
  std::vector<double> scores, labels;
  for (const auto& g : graphs) {
    const PairSet& set = g.data.pair_split(split);
    if (set.size() == 0) continue;
    const auto s = ScorePairs(g.input, params, config, set);
    scores.insert(scores.end(), s.begin(), s.end());
    labels.insert(labels.end(), set.label.begin(), set.label.end());
  }
  return RocAuc(scores, labels);
}

double RocAuc(std::span<const double> scores, std::span<const double> labels) {
  if (scores.size() != labels.size()) throw DataError("roc_auc: scores and labels differ in size");
  std::vector<std::size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double positives = 0.0, rank_sum = 0.0;
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j < idx.size() && scores[idx[j]] == scores[idx[i]]) ++j;
    const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t t = i; t < j; ++t) {
      if (labels[idx[t]] > 0.5) {
        positives += 1.0;
        rank_sum += avg_rank;
      }
    }
    i = j;
  }
  const double negatives = static_cast<double>(scores.size()) - positives;
  if (positives == 0.0 || negatives == 0.0) {
    throw DataError("roc_auc needs at least one positive and one negative");
  }
  return (rank_sum - positives * (positives + 1.0) / 2.0) / (positives * negatives);
}

double MacroRocAuc(const ad::Tensor& probs, std::span<const int> labels) {
  if (probs.rows() != labels.size()) throw DataError("macro_auc: one label per row expected");
  double total = 0.0;
  std::size_t used = 0;
  std::vector<double> scores(labels.size()), binary(labels.size());
  for (std::size_t c = 0; c < probs.cols(); ++c) {
    std::size_t pos = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      scores[i] = probs(i, c);
      binary[i] = labels[i] == static_cast<int>(c) ? 1.0 : 0.0;
      pos += labels[i] == static_cast<int>(c);
    }
    if (pos == 0 || pos == labels.size()) continue;
    total += RocAuc(scores, binary);
    ++used;
  }
  if (used == 0) throw DataError("macro_auc needs at least two classes present");
  return total / static_cast<double>(used);
}

Collusion CollusionAttackPnc(const Graph& graph, double fraction, std::uint64_t seed) {
  CheckFraction(fraction, "collusion fraction");
  const std::size_t n = graph.num_nodes();
  std::mt19937_64 rng(DeriveSeed(seed, "collude-pnc"));
  Collusion out;
  out.colluders = SampleNodes(n, std::min(n, CeilFraction(fraction, n)), rng);
  std::vector<Edge> edges = graph.edges();
  for (std::size_t i = 0; i < out.colluders.size(); ++i) {
    for (std::size_t j = i + 1; j < out.colluders.size(); ++j) {
      AddEdge(edges, graph, out.colluders[i], out.colluders[j], out.added_edges);
    }
  }
  out.graph = graph.WithEdges(std::move(edges));
  return out;
}

Collusion CollusionAttackLp(const Graph& graph, double pair_fraction, double hub_fraction,
                            std::uint64_t seed, const PairSet* candidates) {
  CheckFraction(pair_fraction, "pair fraction");
  CheckFraction(hub_fraction, "hub fraction");
  std::mt19937_64 rng(DeriveSeed(seed, "collude-lp"));
  std::vector<NodeId> members;
  if (candidates) {
    std::vector<std::pair<NodeId, NodeId>> pool;
    for (std::size_t i = 0; i < candidates->size(); ++i) {
      const NodeId u = candidates->u[i], v = candidates->v[i];
      if (u != v && !graph.HasEdge(u, v) && !graph.HasEdge(v, u)) pool.emplace_back(u, v);
    }
    if (pool.empty()) throw DataError("no non-adjacent candidate pairs to collude on");
    const std::size_t take = std::min(pool.size(), CeilFraction(pair_fraction, pool.size()));
    for (NodeId idx : SampleNodes(pool.size(), take, rng)) {
      members.push_back(pool[idx].first);
      members.push_back(pool[idx].second);
    }
  } else {
    const double available = PairCount(graph.num_nodes(), false) -
                             static_cast<double>(graph.num_edges());
    if (graph.num_nodes() < 2 || available < 1.0) {
      throw DataError("graph has no non-adjacent pairs to collude on");
    }
    const auto take = static_cast<std::size_t>(std::ceil(pair_fraction * available - 1e-9));
    std::unordered_set<std::uint64_t> used;
    while (used.size() < take) {
      auto [u, v] = RandomPair(graph.num_nodes(), false, rng);
      if (graph.HasEdge(u, v) || graph.HasEdge(v, u) || !used.insert(PairKey(u, v, true)).second) {
        continue;
      }
      members.push_back(u);
      members.push_back(v);
    }
  }
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());

  const AdjacencyIndex adjacency(graph);
  std::vector<NodeId> by_degree = members;
  std::stable_sort(by_degree.begin(), by_degree.end(), [&](NodeId a, NodeId b) {
    return adjacency.degree(a) > adjacency.degree(b);
  });
  const std::size_t hubs = std::max<std::size_t>(1, CeilFraction(hub_fraction, members.size()));

  Collusion out;
  out.colluders = members;
  out.hubs.assign(by_degree.begin(), by_degree.begin() + static_cast<std::ptrdiff_t>(hubs));
  std::sort(out.hubs.begin(), out.hubs.end());
  std::vector<Edge> edges = graph.edges();
  for (NodeId c : members) {
    if (std::binary_search(out.hubs.begin(), out.hubs.end(), c)) continue;
    for (NodeId h : out.hubs) AddEdge(edges, graph, c, h, out.added_edges);
  }
  out.graph = graph.WithEdges(std::move(edges));
  return out;
}

AttackResult EvaluateAttack(const PreparedGraph& prepared, ModelParams& params,
                            const ModelConfig& model, const WalkConfig& walk_config,
                            const AttackOptions& options) {
  const TaskDataset& data = prepared.data;
  if (data.task == TaskKind::kNodeClassification) {
    throw ConfigError("collusion attacks apply to lp and pnc tasks");
  }
  if (options.samples < 1) throw ConfigError("attack needs at least one sample");
  if (options.targets == AttackTargets::kClique &&
      data.task != TaskKind::kPairwiseNodeClassification) {
    throw ConfigError("clique attack targets apply to pnc only");
  }
  walk_config.Validate();
  const Graph& graph = data.message_graph;

  PairSet test_negatives;
  const PairSet& test = data.pair_split(Split::kTest);
  for (std::size_t i = 0; i < test.size(); ++i) {
    if (test.label[i] < 0.5) test_negatives.Add(test.u[i], test.v[i], 0.0);
  }

  AnchorSet anchors;
  anchors.ids = prepared.input.anchors;
  AttackResult result;
  // Draws whose targets hold a single class are skipped; AUC is undefined there.
  const std::size_t max_draws = 20 * options.samples;
  for (std::size_t draw = 0; result.samples.size() < options.samples; ++draw) {
    if (draw == max_draws) {
      throw DataError("attack: no colluding group gives targets of both classes");
    }
    const std::uint64_t seed = DeriveSeed(options.seed, "attack", draw);
    Collusion col;
    PairSet targets;
    if (data.task == TaskKind::kPairwiseNodeClassification) {
      col = CollusionAttackPnc(graph, options.fraction, seed);
    } else {
      col = CollusionAttackLp(graph, options.fraction, options.hub_fraction, seed,
                              &test_negatives);
    }
    if (options.targets == AttackTargets::kClique) {
      const auto& labels = graph.labels();
      for (std::size_t i = 0; i < col.colluders.size(); ++i) {
        for (std::size_t j = i + 1; j < col.colluders.size(); ++j) {
          const NodeId a = col.colluders[i], b = col.colluders[j];
          targets.Add(a, b, labels[a] == labels[b] ? 1.0 : 0.0);
        }
      }
    } else {
      for (std::size_t i = 0; i < test.size(); ++i) {
        if (std::binary_search(col.colluders.begin(), col.colluders.end(), test.u[i]) ||
            std::binary_search(col.colluders.begin(), col.colluders.end(), test.v[i])) {
          targets.Add(test.u[i], test.v[i], test.label[i]);
        }
      }
    }
    const auto positives = std::count_if(targets.label.begin(), targets.label.end(),
                                         [](double y) { return y > 0.5; });
    if (positives == 0 || positives == static_cast<std::ptrdiff_t>(targets.size())) continue;
    AttackSample sample;
    sample.colluders = col.colluders.size();
    sample.added_edges = col.added_edges;
    sample.targets = targets.size();
    sample.before = RocAuc(ScorePairs(prepared.input, params, model, targets), targets.label);
    if (col.added_edges == 0) {
      sample.after = sample.before;
    } else {
      const WalkSet walks = SampleWalks(col.graph, walk_config);
      const ModelInput perturbed =
          MakeModelInput(col.graph, walks, anchors, model, data.transductive());
      sample.after = RocAuc(ScorePairs(perturbed, params, model, targets), targets.label);
    }
    result.samples.push_back(sample);
    result.before += sample.before;
    result.after += sample.after;
  }
  result.before /= static_cast<double>(options.samples);
  result.after /= static_cast<double>(options.samples);
  result.delta = result.before - result.after;
  return result;
}

}  // namespace graphreach
