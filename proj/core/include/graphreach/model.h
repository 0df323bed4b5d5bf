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

// The anchor-message network.
//
// Node v receives one message per anchor a:
//     F(v, a) = (s(v,a) * h_v) || (s(a,v) * h_a)
// The k messages are stacked and projected by W_M to a k x d_hid matrix M_v.
// Hidden layers collapse M_v by mean pooling or attention; the last layer
// maps each row through W_Z, so the embedding of v has one entry per anchor.

#ifndef GRAPHREACH_MODEL_H_
#define GRAPHREACH_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "graphreach/anchors.h"
#include "graphreach/graph.h"
#include "graphreach/tensor.h"
#include "graphreach/walks.h"

namespace graphreach {

enum class Aggregator {
  kMean,
  kAttention,
  // Mean pooling over unweighted messages h_v || h_a.
  kEqualMessages,
};

enum class FinalActivation { kIdentity, kSigmoid };

std::string ToString(Aggregator aggregator);
Aggregator ParseAggregator(const std::string& name);  // mean|attention|equal

struct ModelConfig {
  std::size_t layers = 2;
  std::size_t hidden = 32;
  Aggregator aggregator = Aggregator::kAttention;
  SimilarityKind similarity = SimilarityKind::kCount;
  bool normalize_ordered = false;
  double dropout = 0.5;
  FinalActivation final_activation = FinalActivation::kIdentity;
  double attention_slope = 0.2;

  void Validate() const;
};

struct LayerParams {
  ad::Tensor message;           // 2*w_in x hidden
  ad::Tensor attention_matrix;  // hidden x hidden; attention hidden layers only
  ad::Tensor attention_vector;  // 2*hidden x 1; attention hidden layers only
};

struct ModelParams {
  std::vector<LayerParams> layers;
  ad::Tensor output;  // hidden x 1
  // Node-classification head: k x C weights and 1 x C bias.
  std::optional<ad::Tensor> class_weight;
  std::optional<ad::Tensor> class_bias;

  // Glorot-uniform weights, zero class bias. num_classes == 0 omits the head.
  static ModelParams Init(const ModelConfig& config, std::size_t input_dim,
                          std::size_t num_anchors, std::size_t num_classes,
                          std::uint64_t seed);

  std::vector<ad::Tensor*> Trainable();
  std::map<std::string, ad::Tensor> Named() const;
  static ModelParams FromNamed(const std::map<std::string, ad::Tensor>& named);
};

// Constant per-graph inputs to the network.
struct ModelInput {
  ad::Tensor features;      // n x d
  ad::Tensor sim_forward;   // n x k, s(v, a_i)
  ad::Tensor sim_backward;  // n x k, s(a_i, v)
  std::vector<NodeId> anchors;

  std::size_t num_nodes() const { return features.rows(); }
  std::size_t num_anchors() const { return anchors.size(); }
};

// Attribute rows, or a single constant 1 column when the graph has none.
// Transductive inputs append a one-hot node identity block.
ad::Tensor NodeFeatures(const Graph& graph, bool transductive);

ModelInput MakeModelInput(const Graph& graph, const WalkSet& walks,
                          const AnchorSet& anchors, const ModelConfig& config,
                          bool transductive);

// Message from anchor a to node v: (s_va * h_v) || (s_av * h_a), or
// h_v || h_a when `equal` is set. Inputs are 1 x w rows.
ad::Var Message(ad::Var h_v, ad::Var h_a, double s_va, double s_av, bool equal = false);

// Stacked messages of node v to every anchor, projected by W_M: k x hidden.
ad::Var MessageMatrix(NodeId v, std::span<const NodeId> anchors, ad::Var hidden,
                      const SimilarityMatrix& sim, ad::Var message_weight,
                      bool equal = false);

// Mean of the rows of M_v (1 x hidden).
ad::Var MeanPool(ad::Var messages);

// alpha_i = softmax_i LeakyReLU((h_v W_att || M_v[i] W_att) a_att);
// result = sum_i alpha_i M_v[i] W_att + h_v W_att.
// `self_row` is the node's own hidden-width representation (1 x hidden).
ad::Var AttentionAggregate(ad::Var self_row, ad::Var messages, ad::Var attention_matrix,
                           ad::Var attention_vector, double slope,
                           ad::Var* alpha_out = nullptr);

struct ForwardResult {
  ad::Var embeddings;                // n x k
  std::vector<ad::Var> attention;    // n x k coefficients per attention layer
};

// Batched forward pass over all nodes. Dropout on hidden layers is active only
// when `training`; its masks derive from `dropout_seed`.
ForwardResult Forward(ad::Tape& tape, const ModelInput& input, ModelParams& params,
                      const ModelConfig& config, bool training,
                      std::uint64_t dropout_seed = 0);

// Same network evaluated node by node through Message / MessageMatrix /
// MeanPool / AttentionAggregate, without dropout. Slow; for verification.
ad::Var ForwardReference(ad::Tape& tape, const ModelInput& input, ModelParams& params,
                         const ModelConfig& config);

// Inner products z_u . z_v for each pair (P x 1).
ad::Var PairLogits(ad::Var embeddings, std::span<const NodeId> us,
                   std::span<const NodeId> vs);
// sigmoid(z_u . z_v).
ad::Var DecodePair(ad::Var z_u, ad::Var z_v);
// log_softmax(Z W_cls + b_cls), n x C.
ad::Var DecodeNode(ad::Var embeddings, ad::Var class_weight, ad::Var class_bias);

// Mean binary cross-entropy of probabilities clamped to [1e-12, 1 - 1e-12].
ad::Var BceLoss(ad::Var probs, std::span<const double> labels);
// Same loss computed from logits, stable when the sigmoid saturates.
ad::Var BceWithLogitsLoss(ad::Var logits, std::span<const double> labels);
// Mean negative log-likelihood of the labelled class per row.
ad::Var NllLoss(ad::Var log_probs, std::span<const int> labels);

}  // namespace graphreach

#endif  // GRAPHREACH_MODEL_H_
