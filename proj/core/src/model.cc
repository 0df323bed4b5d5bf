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

#include "graphreach/model.h"

#include <algorithm>
#include <cmath>
#include <random>

namespace graphreach {
namespace {

using ad::Tape;
using ad::Tensor;
using ad::Var;

Tensor GlorotUniform(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
  std::uniform_real_distribution<double> dist(-limit, limit);
  Tensor t(rows, cols);
  for (double& x : t.values()) x = dist(rng);
  t.set_requires_grad(true);
  return t;
}

bool UsesAttention(const ModelConfig& config, std::size_t layer) {
  return config.aggregator == Aggregator::kAttention && layer + 1 < config.layers;
}

// Outer product col (r x 1) with a ones row: r x cols.
Var RepeatCols(Var col, std::size_t cols) {
  return ad::MatMul(col, ad::Ones(col.tape(), 1, cols));
}

// Ones column times a row (1 x c): rows x c.
Var RepeatRows(Var row, std::size_t rows) {
  return ad::MatMul(ad::Ones(row.tape(), rows, 1), row);
}

}  // namespace

std::string ToString(Aggregator aggregator) {
  switch (aggregator) {
    case Aggregator::kMean:
      return "mean";
    case Aggregator::kAttention:
      return "attention";
    case Aggregator::kEqualMessages:
      return "equal";
  }
  return "unknown";
}

Aggregator ParseAggregator(const std::string& name) {
  if (name == "mean" || name == "M") return Aggregator::kMean;
  if (name == "attention" || name == "A") return Aggregator::kAttention;
  if (name == "equal" || name == "M-") return Aggregator::kEqualMessages;
  throw ConfigError("unknown aggregator '" + name + "' (expected mean, attention or equal)");
}

void ModelConfig::Validate() const {
  if (layers < 1) throw ConfigError("model needs at least one layer");
  if (hidden < 1) throw ConfigError("hidden width must be >= 1");
  if (dropout < 0.0 || dropout >= 1.0) throw ConfigError("dropout must be in [0, 1)");
  if (attention_slope < 0.0) throw ConfigError("attention slope must be >= 0");
}

ModelParams ModelParams::Init(const ModelConfig& config, std::size_t input_dim,
                              std::size_t num_anchors, std::size_t num_classes,
                              std::uint64_t seed) {
  config.Validate();
  if (input_dim < 1) throw ConfigError("input width must be >= 1");
  std::mt19937_64 rng(DeriveSeed(seed, "init"));
  ModelParams p;
  std::size_t width = input_dim;
  for (std::size_t l = 0; l < config.layers; ++l) {
    LayerParams layer;
    layer.message = GlorotUniform(2 * width, config.hidden, rng);
    if (UsesAttention(config, l)) {
      layer.attention_matrix = GlorotUniform(config.hidden, config.hidden, rng);
      layer.attention_vector = GlorotUniform(2 * config.hidden, 1, rng);
    }
    p.layers.push_back(std::move(layer));
    width = config.hidden;
  }
  p.output = GlorotUniform(config.hidden, 1, rng);
  if (num_classes > 0) {
    p.class_weight = GlorotUniform(num_anchors, num_classes, rng);
    p.class_bias = Tensor(1, num_classes, 0.0);
    p.class_bias->set_requires_grad(true);
  }
  return p;
}

std::vector<ad::Tensor*> ModelParams::Trainable() {
  std::vector<Tensor*> out;
  for (auto& l : layers) {
    out.push_back(&l.message);
    if (l.attention_matrix.size() > 0) out.push_back(&l.attention_matrix);
    if (l.attention_vector.size() > 0) out.push_back(&l.attention_vector);
  }
  out.push_back(&output);
  if (class_weight) out.push_back(&*class_weight);
  if (class_bias) out.push_back(&*class_bias);
  return out;
}

std::map<std::string, ad::Tensor> ModelParams::Named() const {
  std::map<std::string, Tensor> out;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const std::string prefix = "layer" + std::to_string(l) + ".";
    out.emplace(prefix + "message", layers[l].message);
    if (layers[l].attention_matrix.size() > 0) {
      out.emplace(prefix + "attention_matrix", layers[l].attention_matrix);
      out.emplace(prefix + "attention_vector", layers[l].attention_vector);
    }
  }
  out.emplace("output", output);
  if (class_weight) out.emplace("class_weight", *class_weight);
  if (class_bias) out.emplace("class_bias", *class_bias);
  return out;
}

ModelParams ModelParams::FromNamed(const std::map<std::string, ad::Tensor>& named) {
  auto fetch = [&named](const std::string& key) {
    auto it = named.find(key);
    if (it == named.end()) throw DataError("checkpoint is missing tensor '" + key + "'");
    Tensor t = it->second;
    t.set_requires_grad(true);
    return t;
  };
  ModelParams p;
  for (std::size_t l = 0;; ++l) {
    const std::string prefix = "layer" + std::to_string(l) + ".";
    if (!named.count(prefix + "message")) break;
    LayerParams layer;
    layer.message = fetch(prefix + "message");
    if (named.count(prefix + "attention_matrix")) {
      layer.attention_matrix = fetch(prefix + "attention_matrix");
      layer.attention_vector = fetch(prefix + "attention_vector");
    }
    p.layers.push_back(std::move(layer));
  }
  if (p.layers.empty()) throw DataError("checkpoint has no layers");
  p.output = fetch("output");
  if (named.count("class_weight")) {
    p.class_weight = fetch("class_weight");
    p.class_bias = fetch("class_bias");
  }
  return p;
}

ad::Tensor NodeFeatures(const Graph& graph, bool transductive) {
  const std::size_t n = graph.num_nodes();
  const std::size_t base = graph.has_attributes() ? graph.attribute_dim() : 1;
  const std::size_t width = base + (transductive ? n : 0);
  Tensor x(n, width, 0.0);
  for (NodeId v = 0; v < n; ++v) {
    if (graph.has_attributes()) {
      const auto row = graph.attribute_row(v);
      std::copy(row.begin(), row.end(), x.values().begin() + static_cast<std::ptrdiff_t>(v * width));
    } else {
      x(v, 0) = 1.0;
    }
    if (transductive) x(v, base + v) = 1.0;
  }
  return x;
}

ModelInput MakeModelInput(const Graph& graph, const WalkSet& walks,
                          const AnchorSet& anchors, const ModelConfig& config,
                          bool transductive) {
  if (walks.num_nodes() != graph.num_nodes()) {
    throw ConfigError("walk set and graph disagree on node count");
  }
  const auto sim = BuildSimilarityMatrix(walks, anchors.ids, config.similarity,
                                         config.normalize_ordered);
  ModelInput in;
  in.features = NodeFeatures(graph, transductive);
  in.sim_forward = Tensor(sim.num_nodes, sim.num_anchors, sim.forward);
  in.sim_backward = Tensor(sim.num_nodes, sim.num_anchors, sim.backward);
  in.anchors = anchors.ids;
  return in;
}

Var Message(Var h_v, Var h_a, double s_va, double s_av, bool equal) {
  if (h_v.cols() != h_a.cols() || h_v.rows() != 1 || h_a.rows() != 1) {
    throw NumericError("message: expected two 1 x w rows, got " +
                       h_v.value().ShapeString() + " and " + h_a.value().ShapeString());
  }
  if (equal) return ad::ConcatCols(h_v, h_a);
  return ad::ConcatCols(ad::Scale(h_v, s_va), ad::Scale(h_a, s_av));
}

Var MessageMatrix(NodeId v, std::span<const NodeId> anchors, Var hidden,
                  const SimilarityMatrix& sim, Var message_weight, bool equal) {
  if (sim.num_anchors != anchors.size()) {
    throw NumericError("message_matrix: similarity has " + std::to_string(sim.num_anchors) +
                       " anchors, expected " + std::to_string(anchors.size()));
  }
  Var h_v = ad::SelectRow(hidden, v);
  std::vector<Var> rows;
  rows.reserve(anchors.size());
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    rows.push_back(Message(h_v, ad::SelectRow(hidden, anchors[i]), sim.fwd(v, i),
                           sim.bwd(v, i), equal));
  }
  return ad::MatMul(ad::StackRows(rows), message_weight);
}

Var MeanPool(Var messages) {
  return ad::Transpose(ad::RowMean(ad::Transpose(messages)));
}

Var AttentionAggregate(Var self_row, Var messages, Var attention_matrix,
                       Var attention_vector, double slope, Var* alpha_out) {
  const std::size_t k = messages.rows();
  Var self_proj = ad::MatMul(self_row, attention_matrix);   // 1 x h
  Var msg_proj = ad::MatMul(messages, attention_matrix);    // k x h
  Var pairs = ad::ConcatCols(RepeatRows(self_proj, k), msg_proj);
  Var scores = ad::LeakyRelu(ad::MatMul(pairs, attention_vector), slope);  // k x 1
  Var alpha = ad::Softmax(ad::Transpose(scores));                          // 1 x k
  if (alpha_out) *alpha_out = alpha;
  return ad::Add(ad::MatMul(alpha, msg_proj), self_proj);
}

ForwardResult Forward(Tape& tape, const ModelInput& input, ModelParams& params,
                      const ModelConfig& config, bool training,
                      std::uint64_t dropout_seed) {
  config.Validate();
  const std::size_t n = input.num_nodes(), k = input.num_anchors();
  if (params.layers.size() != config.layers) {
    throw NumericError("forward: parameters have " + std::to_string(params.layers.size()) +
                       " layers, config expects " + std::to_string(config.layers));
  }
  if (input.sim_forward.rows() != n || input.sim_forward.cols() != k ||
      !input.sim_backward.SameShape(input.sim_forward)) {
    throw NumericError("forward: similarity matrices do not match the anchor set");
  }
  if (k == 0) throw NumericError("forward: no anchors");

  const bool equal = config.aggregator == Aggregator::kEqualMessages;
  Var fwd = equal ? ad::Ones(tape, n, k) : tape.Input(input.sim_forward);
  Var bwd = equal ? ad::Ones(tape, n, k) : tape.Input(input.sim_backward);
  Var h = tape.Input(input.features);
  const std::size_t dh = config.hidden;

  ForwardResult result;
  for (std::size_t l = 0; l < config.layers; ++l) {
    const std::size_t w = h.cols();
    Var weight = tape.Param(params.layers[l].message);
    if (weight.rows() != 2 * w || weight.cols() != dh) {
      throw NumericError("forward: layer " + std::to_string(l) + " message weight is " +
                         weight.value().ShapeString() + ", expected [" +
                         std::to_string(2 * w) + "x" + std::to_string(dh) + "]");
    }
    // Row i of M_v equals fwd(v,i) * P[v] + bwd(v,i) * Q[i].
    Var self_part = ad::MatMul(h, ad::SliceRows(weight, 0, w));                   // n x dh
    Var anchor_part = ad::MatMul(ad::SelectRows(h, input.anchors),
                                 ad::SliceRows(weight, w, 2 * w));                // k x dh

    if (l + 1 == config.layers) {
      Var out = tape.Param(params.output);
      Var self_score = ad::MatMul(self_part, out);      // n x 1
      Var anchor_score = ad::MatMul(anchor_part, out);  // k x 1
      Var z = ad::Add(ad::Mul(fwd, RepeatCols(self_score, k)),
                      ad::Mul(bwd, RepeatRows(ad::Transpose(anchor_score), n)));
      if (config.final_activation == FinalActivation::kSigmoid) z = ad::Sigmoid(z);
      result.embeddings = z;
      break;
    }

    if (config.aggregator == Aggregator::kAttention) {
      Var att = tape.Param(params.layers[l].attention_matrix);
      Var vec = tape.Param(params.layers[l].attention_vector);
      Var self_proj = ad::MatMul(self_part, att);      // n x dh
      Var anchor_proj = ad::MatMul(anchor_part, att);  // k x dh
      Var a_self = ad::SliceRows(vec, 0, dh);
      Var a_msg = ad::SliceRows(vec, dh, 2 * dh);
      Var self_score = ad::MatMul(self_proj, a_self);       // n x 1
      Var self_msg_score = ad::MatMul(self_proj, a_msg);    // n x 1
      Var anchor_msg_score = ad::MatMul(anchor_proj, a_msg);  // k x 1
      Var scores = ad::Add(
          ad::Add(RepeatCols(self_score, k), ad::Mul(fwd, RepeatCols(self_msg_score, k))),
          ad::Mul(bwd, RepeatRows(ad::Transpose(anchor_msg_score), n)));
      Var alpha = ad::Softmax(ad::LeakyRelu(scores, config.attention_slope));
      result.attention.push_back(alpha);
      h = ad::Add(ad::Add(ad::Mul(RepeatCols(ad::RowSum(ad::Mul(alpha, fwd)), dh), self_proj),
                          ad::MatMul(ad::Mul(alpha, bwd), anchor_proj)),
                  self_proj);
    } else {
      h = ad::Add(ad::Mul(RepeatCols(ad::RowMean(fwd), dh), self_part),
                  ad::Scale(ad::MatMul(bwd, anchor_part), 1.0 / static_cast<double>(k)));
    }
    h = ad::Dropout(h, config.dropout, training, DeriveSeed(dropout_seed, "dropout", l));
  }
  return result;
}

Var ForwardReference(Tape& tape, const ModelInput& input, ModelParams& params,
                     const ModelConfig& config) {
  config.Validate();
  const std::size_t n = input.num_nodes(), k = input.num_anchors();
  const bool equal = config.aggregator == Aggregator::kEqualMessages;
  SimilarityMatrix sim;
  sim.num_nodes = n;
  sim.num_anchors = k;
  sim.forward.assign(input.sim_forward.values().begin(), input.sim_forward.values().end());
  sim.backward.assign(input.sim_backward.values().begin(), input.sim_backward.values().end());

  Var h = tape.Input(input.features);
  for (std::size_t l = 0; l < config.layers; ++l) {
    Var weight = tape.Param(params.layers[l].message);
    const bool last = l + 1 == config.layers;
    std::vector<Var> rows;
    for (NodeId v = 0; v < n; ++v) {
      Var m = MessageMatrix(v, input.anchors, h, sim, weight, equal);
      if (last) {
        rows.push_back(ad::Transpose(ad::MatMul(m, tape.Param(params.output))));
      } else if (config.aggregator == Aggregator::kAttention) {
        Var self_row = ad::MatMul(ad::SelectRow(h, v), ad::SliceRows(weight, 0, h.cols()));
        rows.push_back(AttentionAggregate(self_row, m,
                                          tape.Param(params.layers[l].attention_matrix),
                                          tape.Param(params.layers[l].attention_vector),
                                          config.attention_slope));
      } else {
        rows.push_back(MeanPool(m));
      }
    }
    h = ad::StackRows(rows);
  }
  if (config.final_activation == FinalActivation::kSigmoid) h = ad::Sigmoid(h);
  return h;
}

Var PairLogits(Var embeddings, std::span<const NodeId> us, std::span<const NodeId> vs) {
  if (us.size() != vs.size()) throw NumericError("pair_logits: unequal endpoint lists");
  const Tensor& z = embeddings.value();
  const std::size_t d = z.cols();
  for (std::size_t i = 0; i < us.size(); ++i) {
    if (us[i] >= z.rows() || vs[i] >= z.rows()) {
      throw NumericError("pair_logits: node " + std::to_string(std::max(us[i], vs[i])) +
                         " outside " + z.ShapeString());
    }
  }
  // Fused gather-multiply-sum; the P x d intermediates are never formed.
  Tensor out(us.size(), 1);
  for (std::size_t i = 0; i < us.size(); ++i) {
    const auto zu = z.row(us[i]), zv = z.row(vs[i]);
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) s += zu[j] * zv[j];
    out(i, 0) = s;
  }
  const std::size_t iz = embeddings.id();
  std::vector<NodeId> u(us.begin(), us.end()), v(vs.begin(), vs.end());
  return embeddings.tape().Push(
      std::move(out), embeddings.requires_grad(),
      [iz, d, u = std::move(u), v = std::move(v)](Tape& t, std::size_t self) {
        const auto g = t.grad(self);
        const double* zv = t.value(iz).values().data();
        double* gz = t.grad(iz).data();
        for (std::size_t i = 0; i < u.size(); ++i) {
          const double gi = g[i];
          if (gi == 0.0) continue;
          double* gu = gz + u[i] * d;
          double* gv = gz + v[i] * d;
          const double* a = zv + u[i] * d;
          const double* b = zv + v[i] * d;
          for (std::size_t j = 0; j < d; ++j) {
            gu[j] += gi * b[j];
            gv[j] += gi * a[j];
          }
        }
      },
      "pair_logits");
}

Var DecodePair(Var z_u, Var z_v) {
  return ad::Sigmoid(ad::RowSum(ad::Mul(z_u, z_v)));
}

Var DecodeNode(Var embeddings, Var class_weight, Var class_bias) {
  Var logits = ad::Add(ad::MatMul(embeddings, class_weight),
                       RepeatRows(class_bias, embeddings.rows()));
  return ad::LogSoftmax(logits);
}

Var BceLoss(Var probs, std::span<const double> labels) {
  const Tensor& p = probs.value();
  if (p.cols() != 1 || p.rows() != labels.size() || labels.empty()) {
    throw NumericError("bce_loss: expected " + std::to_string(labels.size()) +
                       " x 1 probabilities, got " + p.ShapeString());
  }
  constexpr double kLo = 1e-12, kHi = 1.0 - 1e-12;
  const double inv_n = 1.0 / static_cast<double>(labels.size());
  double loss = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double q = std::clamp(p(i, 0), kLo, kHi);
    loss -= labels[i] * std::log(q) + (1.0 - labels[i]) * std::log(1.0 - q);
  }
  std::vector<double> y(labels.begin(), labels.end());
  const std::size_t ip = probs.id();
  return probs.tape().Push(
      Tensor(1, 1, loss * inv_n), probs.requires_grad(),
      [ip, y = std::move(y), inv_n](Tape& t, std::size_t self) {
        const double g = t.grad(self)[0];
        const auto pv = t.value(ip).values();
        auto gp = t.grad(ip);
        for (std::size_t i = 0; i < y.size(); ++i) {
          const double q = pv[i];
          if (q <= kLo || q >= kHi) continue;  // clamped region is flat
          gp[i] += g * inv_n * (-(y[i] / q) + (1.0 - y[i]) / (1.0 - q));
        }
      },
      "bce_loss");
}

Var BceWithLogitsLoss(Var logits, std::span<const double> labels) {
  const Tensor& x = logits.value();
  if (x.cols() != 1 || x.rows() != labels.size() || labels.empty()) {
    throw NumericError("bce_with_logits: expected " + std::to_string(labels.size()) +
                       " x 1 logits, got " + x.ShapeString());
  }
  const double inv_n = 1.0 / static_cast<double>(labels.size());
  double loss = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double v = x(i, 0);
    loss += std::max(v, 0.0) - v * labels[i] + std::log1p(std::exp(-std::abs(v)));
  }
  std::vector<double> y(labels.begin(), labels.end());
  const std::size_t ix = logits.id();
  return logits.tape().Push(
      Tensor(1, 1, loss * inv_n), logits.requires_grad(),
      [ix, y = std::move(y), inv_n](Tape& t, std::size_t self) {
        const double g = t.grad(self)[0];
        const auto xv = t.value(ix).values();
        auto gx = t.grad(ix);
        for (std::size_t i = 0; i < y.size(); ++i) {
          const double s = xv[i] >= 0.0 ? 1.0 / (1.0 + std::exp(-xv[i]))
                                        : std::exp(xv[i]) / (1.0 + std::exp(xv[i]));
          gx[i] += g * inv_n * (s - y[i]);
        }
      },
      "bce_with_logits");
}

Var NllLoss(Var log_probs, std::span<const int> labels) {
  const Tensor& lp = log_probs.value();
  if (lp.rows() != labels.size() || labels.empty()) {
    throw NumericError("nll_loss: " + std::to_string(labels.size()) + " labels for " +
                       lp.ShapeString() + " log-probabilities");
  }
  const std::size_t c = lp.cols();
  double loss = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || static_cast<std::size_t>(labels[i]) >= c) {
      throw NumericError("nll_loss: label " + std::to_string(labels[i]) + " outside [0, " +
                         std::to_string(c) + ")");
    }
    loss -= lp(i, static_cast<std::size_t>(labels[i]));
  }
  const double inv_n = 1.0 / static_cast<double>(labels.size());
  std::vector<int> y(labels.begin(), labels.end());
  const std::size_t il = log_probs.id();
  return log_probs.tape().Push(
      Tensor(1, 1, loss * inv_n), log_probs.requires_grad(),
      [il, y = std::move(y), inv_n, c](Tape& t, std::size_t self) {
        const double g = t.grad(self)[0];
        auto gl = t.grad(il);
        for (std::size_t i = 0; i < y.size(); ++i) {
          gl[i * c + static_cast<std::size_t>(y[i])] -= g * inv_n;
        }
      },
      "nll_loss");
}

}  // namespace graphreach
