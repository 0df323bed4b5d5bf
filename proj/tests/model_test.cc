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

#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "graphreach/anchors.h"
#include "graphreach/common.h"
#include "graphreach/graph.h"
#include "graphreach/model.h"
#include "graphreach/walks.h"
#include "oracles.h"

namespace graphreach {
namespace {

using ad::Tape;
using ad::Tensor;
using ad::Var;

void ExpectRow(const Tensor& t, std::size_t r, std::vector<double> want, double tol = 1e-12) {
  ASSERT_EQ(t.cols(), want.size());
  for (std::size_t j = 0; j < want.size(); ++j) EXPECT_NEAR(t(r, j), want[j], tol) << j;
}

TEST(MessageTest, Examples) {
  Tape tape;
  Var hv = tape.Constant(Tensor::FromRows({{1, 2}}));
  Var ha = tape.Constant(Tensor::FromRows({{5, 7}}));
  ExpectRow(Message(hv, ha, 0, 0).value(), 0, {0, 0, 0, 0});
  ExpectRow(Message(hv, ha, 1, 0).value(), 0, {1, 2, 0, 0});
  ExpectRow(Message(hv, ha, 0, 0, /*equal=*/true).value(), 0, {1, 2, 5, 7});
  Var a = tape.Constant(Tensor::FromRows({{2, 0}}));
  Var b = tape.Constant(Tensor::FromRows({{4, 4}}));
  ExpectRow(Message(a, b, 0.5, 0.25).value(), 0, {1, 0, 1, 1});
  EXPECT_THROW(Message(a, tape.Constant(Tensor(1, 3)), 1, 1), NumericError);
}

TEST(MessageMatrixTest, HandComputed) {
  Tape tape;
  // Three nodes, width 1; anchors 1 and 2.
  Var hidden = tape.Constant(Tensor::FromRows({{1}, {2}, {3}}));
  SimilarityMatrix sim;
  sim.num_nodes = 3;
  sim.num_anchors = 2;
  sim.forward = {0.5, 0.25, 0, 0, 0, 0};
  sim.backward = {1.0, 0.5, 0, 0, 0, 0};
  Var w = tape.Constant(Tensor::FromRows({{1, 2}, {3, 4}}));
  const NodeId anchors[] = {1, 2};
  // Messages: (0.5*1, 1.0*2) = (0.5, 2) and (0.25*1, 0.5*3) = (0.25, 1.5).
  const Tensor m = MessageMatrix(0, anchors, hidden, sim, w).value();
  ExpectRow(m, 0, {0.5 + 6, 1 + 8});
  ExpectRow(m, 1, {0.25 + 4.5, 0.5 + 6});
  Var zero = tape.Constant(Tensor(2, 2, 0.0));
  for (double x : MessageMatrix(0, anchors, hidden, sim, zero).value().values()) {
    EXPECT_EQ(x, 0.0);
  }
}

TEST(MeanPoolTest, Examples) {
  Tape tape;
  ExpectRow(MeanPool(tape.Constant(Tensor::FromRows({{1, 3}, {3, 5}}))).value(), 0, {2, 4});
  ExpectRow(MeanPool(tape.Constant(Tensor::FromRows({{1, -3}, {-1, 3}}))).value(), 0, {0, 0});
  ExpectRow(MeanPool(tape.Constant(Tensor::FromRows({{4, 2}, {4, 2}, {4, 2}}))).value(), 0,
            {4, 2});
}

TEST(AttentionTest, IdenticalRowsGiveUniformWeights) {
  Tape tape;
  Var self = tape.Constant(Tensor::FromRows({{0.3, -1}}));
  Var msgs = tape.Constant(Tensor::FromRows({{1, 2}, {1, 2}, {1, 2}}));
  Var w = tape.Constant(Tensor::FromRows({{2, 0}, {1, 1}}));
  Var a = tape.Constant(Tensor::FromRows({{0.1}, {-0.4}, {0.7}, {0.2}}));
  Var alpha;
  const Tensor out = AttentionAggregate(self, msgs, w, a, 0.2, &alpha).value();
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(alpha.value()(0, i), 1.0 / 3, 1e-15);
  // row*W = (4, 2); self*W = (-0.4, -1)
  ExpectRow(out, 0, {3.6, 1.0});
}

TEST(AttentionTest, HandComputedScores) {
  Tape tape;
  Var self = tape.Constant(Tensor::FromRows({{1, 0}}));
  Var msgs = tape.Constant(Tensor::FromRows({{2, 0}, {-1, 3}}));
  Var w = tape.Constant(Tensor::FromRows({{1, 0}, {0, 1}}));
  Var a = tape.Constant(Tensor::FromRows({{0}, {0}, {1}, {0}}));
  Var alpha;
  const Tensor out = AttentionAggregate(self, msgs, w, a, 0.2, &alpha).value();
  // Scores are LeakyReLU of the first message component: 2 and -0.2.
  const double a0 = std::exp(2.0) / (std::exp(2.0) + std::exp(-0.2));
  EXPECT_NEAR(alpha.value()(0, 0), a0, 1e-14);
  ExpectRow(out, 0, {a0 * 2 - (1 - a0) + 1, (1 - a0) * 3}, 1e-14);
}

struct Fixture {
  Graph graph;
  WalkSet walks;
  AnchorSet anchors;
  ModelInput input;
};

Fixture Build(const Graph& g, std::vector<NodeId> anchor_ids, const ModelConfig& config,
              bool transductive = false, std::size_t lw = 4) {
  WalkConfig wc;
  wc.num_walks = 30;
  wc.walk_length = lw;
  wc.seed = 5;
  Fixture f{g, SampleWalks(g, wc), {}, {}};
  f.anchors.ids = std::move(anchor_ids);
  f.input = MakeModelInput(g, f.walks, f.anchors, config, transductive);
  return f;
}

Graph SixNodes() {
  return Graph(6, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 0, 1.0}, {2, 3, 1.0}, {3, 4, 1.0},
                   {4, 5, 1.0}, {5, 3, 1.0}});
}

ModelConfig Config(Aggregator agg, std::size_t hidden = 3) {
  ModelConfig c;
  c.aggregator = agg;
  c.hidden = hidden;
  c.dropout = 0.0;
  return c;
}

TEST(ModelInputTest, FeatureConventions) {
  const Graph g = GenerateGrid(3, 3);
  const auto c = Config(Aggregator::kMean);
  auto inductive = Build(g, {0, 4}, c).input;
  EXPECT_EQ(inductive.features.cols(), 1u);
  EXPECT_EQ(inductive.features(5, 0), 1.0);
  auto transductive = Build(g, {0, 4}, c, true).input;
  EXPECT_EQ(transductive.features.rows(), 9u);
  EXPECT_GE(transductive.features.cols(), 9u);
  EXPECT_EQ(inductive.sim_forward(3, 1), SimilarityCount(Build(g, {0, 4}, c).walks, 3, 4));
}

TEST(ModelParamsTest, ShapesAndRoundTrip) {
  ModelConfig c = Config(Aggregator::kAttention, 32);
  c.layers = 3;
  ModelParams p = ModelParams::Init(c, 7, 10, 4, 1);
  ASSERT_EQ(p.layers.size(), 3u);
  EXPECT_EQ(p.layers[0].message.rows(), 14u);
  EXPECT_EQ(p.layers[0].message.cols(), 32u);
  EXPECT_EQ(p.layers[1].message.rows(), 64u);
  EXPECT_EQ(p.layers[0].attention_matrix.rows(), 32u);
  EXPECT_EQ(p.layers[0].attention_vector.rows(), 64u);
  EXPECT_EQ(p.layers[2].attention_matrix.size(), 0u);
  EXPECT_EQ(p.output.rows(), 32u);
  EXPECT_EQ(p.class_weight->rows(), 10u);
  EXPECT_EQ(p.class_weight->cols(), 4u);
  for (double b : p.class_bias->values()) EXPECT_EQ(b, 0.0);
  const double limit = std::sqrt(6.0 / (14 + 32));
  for (double x : p.layers[0].message.values()) EXPECT_LE(std::abs(x), limit);
  const ModelParams back = ModelParams::FromNamed(p.Named());
  EXPECT_EQ(back.Named(), p.Named());
  EXPECT_EQ(ModelParams::Init(c, 7, 10, 4, 1).Named(), p.Named());
  EXPECT_FALSE(ModelParams::Init(Config(Aggregator::kMean), 1, 3, 0, 1).class_weight);
}

class ForwardTest : public ::testing::TestWithParam<Aggregator> {};

TEST_P(ForwardTest, MatchesPerNodeReference) {
  const auto c = Config(GetParam(), 5);
  auto f = Build(GenerateConnectedCaveman(3, 4), {0, 5, 9}, c);
  ModelParams p = ModelParams::Init(c, 1, 3, 0, 2);
  Tape tape;
  const Tensor batched = Forward(tape, f.input, p, c, false).embeddings.value();
  const Tensor reference = ForwardReference(tape, f.input, p, c).value();
  ASSERT_TRUE(batched.SameShape(reference));
  EXPECT_EQ(batched.cols(), 3u);
  for (std::size_t i = 0; i < batched.size(); ++i) {
    EXPECT_NEAR(batched.values()[i], reference.values()[i], 1e-12);
  }
}

TEST_P(ForwardTest, AnchorPermutationPermutesColumns) {
  const auto c = Config(GetParam(), 4);
  auto f = Build(GenerateGrid(4, 4), {1, 6, 11, 15}, c);
  ModelParams p = ModelParams::Init(c, 1, 4, 0, 3);
  const std::vector<std::size_t> perm = {2, 0, 3, 1};
  ModelInput permuted = f.input;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    permuted.anchors[i] = f.input.anchors[perm[i]];
    for (std::size_t v = 0; v < 16; ++v) {
      permuted.sim_forward(v, i) = f.input.sim_forward(v, perm[i]);
      permuted.sim_backward(v, i) = f.input.sim_backward(v, perm[i]);
    }
  }
  Tape tape;
  const Tensor z = Forward(tape, f.input, p, c, false).embeddings.value();
  const Tensor zp = Forward(tape, permuted, p, c, false).embeddings.value();
  for (std::size_t v = 0; v < 16; ++v) {
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(zp(v, i), z(v, perm[i]), 1e-12);
  }
}

TEST_P(ForwardTest, IdenticalInputsGiveIdenticalRows) {
  const auto c = Config(GetParam(), 4);
  auto f = Build(GenerateGrid(3, 3), {0, 8}, c);
  for (std::size_t i = 0; i < 2; ++i) {
    f.input.sim_forward(7, i) = f.input.sim_forward(2, i);
    f.input.sim_backward(7, i) = f.input.sim_backward(2, i);
  }
  ModelParams p = ModelParams::Init(c, 1, 2, 0, 4);
  Tape tape;
  const Tensor z = Forward(tape, f.input, p, c, false).embeddings.value();
  for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ(z(7, i), z(2, i));
}

TEST_P(ForwardTest, ZeroSimilarityGivesZeroEmbeddings) {
  auto c = Config(GetParam(), 4);
  if (GetParam() == Aggregator::kEqualMessages) GTEST_SKIP() << "ignores similarities";
  auto f = Build(GenerateGrid(3, 3), {0, 8}, c);
  for (double& x : f.input.sim_forward.values()) x = 0.0;
  for (double& x : f.input.sim_backward.values()) x = 0.0;
  ModelParams p = ModelParams::Init(c, 1, 2, 0, 4);
  Tape tape;
  for (double x : Forward(tape, f.input, p, c, false).embeddings.value().values()) {
    EXPECT_EQ(x, 0.0);
  }
}

TEST_P(ForwardTest, FullModelGradients) {
  const auto c = Config(GetParam(), 3);
  auto f = Build(SixNodes(), {1, 4}, c);
  ModelParams p = ModelParams::Init(c, 1, 2, 2, 6);
  auto params = p.Trainable();
  const NodeId us[] = {0, 2, 5}, vs[] = {1, 3, 3};
  const double labels[] = {1, 0, 1};
  auto pair_loss = [&](bool backward) {
    Tape tape;
    Var z = Forward(tape, f.input, p, c, false).embeddings;
    Var loss = BceLoss(ad::Sigmoid(PairLogits(z, us, vs)), labels);
    if (backward) tape.Backward(loss);
    return loss.value()(0, 0);
  };
  const NodeId nodes[] = {0, 3, 4, 5};
  const int classes[] = {0, 1, 1, 0};
  auto node_loss = [&](bool backward) {
    Tape tape;
    Var z = ad::SelectRows(Forward(tape, f.input, p, c, false).embeddings, nodes);
    Var loss = NllLoss(DecodeNode(z, tape.Param(*p.class_weight), tape.Param(*p.class_bias)),
                       classes);
    if (backward) tape.Backward(loss);
    return loss.value()(0, 0);
  };
  std::vector<ad::Tensor*> pair_params(params.begin(), params.end());
  std::erase(pair_params, &*p.class_weight);
  std::erase(pair_params, &*p.class_bias);
  EXPECT_LT(testing::MaxGradError(pair_loss, pair_params), 1e-4);
  EXPECT_LT(testing::MaxGradError(node_loss, params), 1e-4);
}

TEST_P(ForwardTest, DropoutOnlyWhenTraining) {
  auto c = Config(GetParam(), 6);
  c.dropout = 0.5;
  auto f = Build(GenerateGrid(3, 3), {0, 8}, c);
  ModelParams p = ModelParams::Init(c, 1, 2, 0, 4);
  Tape tape;
  const Tensor eval1 = Forward(tape, f.input, p, c, false, 1).embeddings.value();
  const Tensor eval2 = Forward(tape, f.input, p, c, false, 2).embeddings.value();
  const Tensor train1 = Forward(tape, f.input, p, c, true, 1).embeddings.value();
  EXPECT_EQ(eval1, eval2);
  EXPECT_FALSE(eval1 == train1);
  EXPECT_EQ(train1, Forward(tape, f.input, p, c, true, 1).embeddings.value());
}

INSTANTIATE_TEST_SUITE_P(Aggregators, ForwardTest,
                         ::testing::Values(Aggregator::kMean, Aggregator::kAttention,
                                           Aggregator::kEqualMessages),
                         [](const auto& info) { return ToString(info.param); });

TEST(AttentionTest, CoefficientsAreDistributions) {
  auto c = Config(Aggregator::kAttention, 4);
  c.layers = 3;
  auto f = Build(GenerateConnectedCaveman(4, 5), {0, 3, 7, 12, 18}, c);
  ModelParams p = ModelParams::Init(c, 1, 5, 0, 8);
  Tape tape;
  const auto result = Forward(tape, f.input, p, c, false);
  ASSERT_EQ(result.attention.size(), 2u);
  for (const Var& alpha : result.attention) {
    for (std::size_t v = 0; v < alpha.rows(); ++v) {
      double total = 0.0;
      for (std::size_t i = 0; i < alpha.cols(); ++i) {
        EXPECT_GE(alpha.value()(v, i), 0.0);
        total += alpha.value()(v, i);
      }
      EXPECT_NEAR(total, 1.0, 1e-12);
    }
  }
}

// A path of eight nodes: the two ends have isomorphic two-hop
// neighbourhoods. The seventh node serves as the only anchor.
TEST(PositionTest, EndsOfPathAreSeparatedByAnAnchor) {
  std::vector<Edge> edges;
  for (NodeId i = 0; i < 7; ++i) edges.push_back({i, i + 1, 1.0});
  const Graph g(8, edges);
  const NodeId v1 = 0, v7 = 6, v8 = 7;

  // Two rounds of neighbour summation over constant features.
  std::vector<double> h(8, 1.0);
  for (int layer = 0; layer < 2; ++layer) {
    std::vector<double> next(8, 0.0);
    for (const auto& e : g.edges()) {
      next[e.u] += h[e.v];
      next[e.v] += h[e.u];
    }
    for (NodeId v = 0; v < 8; ++v) next[v] += h[v];
    h = next;
  }
  EXPECT_EQ(h[v1], h[v8]);

  const std::size_t lw = 7;
  ModelInput input;
  input.features = Tensor(8, 1, 1.0);
  input.anchors = {v7};
  input.sim_forward = Tensor(8, 1);
  input.sim_backward = Tensor(8, 1);
  for (NodeId v = 0; v < 8; ++v) {
    input.sim_forward(v, 0) = testing::EnumerateSimilarity(g, v, v7, lw).count;
    input.sim_backward(v, 0) = testing::EnumerateSimilarity(g, v7, v, lw).count;
  }
  for (Aggregator agg : {Aggregator::kMean, Aggregator::kAttention}) {
    const auto c = Config(agg, 4);
    ModelParams p = ModelParams::Init(c, 1, 1, 0, 12);
    Tape tape;
    const Tensor z = Forward(tape, input, p, c, false).embeddings.value();
    EXPECT_GT(std::abs(z(v1, 0) - z(v8, 0)), 1e-6) << ToString(agg);
  }
}

TEST(DecodeTest, Pair) {
  Tape tape;
  Var zero = tape.Constant(Tensor(1, 3, 0.0));
  Var other = tape.Constant(Tensor::FromRows({{1, -2, 4}}));
  EXPECT_DOUBLE_EQ(DecodePair(zero, other).value()(0, 0), 0.5);
  const double x = std::sqrt(std::log(3.0) / 2);
  Var z = tape.Constant(Tensor::FromRows({{x, x}}));
  EXPECT_NEAR(DecodePair(z, z).value()(0, 0), 0.75, 1e-15);
  Var a = tape.Constant(Tensor::FromRows({{0.3, -1.2}}));
  EXPECT_EQ(DecodePair(a, z).value()(0, 0), DecodePair(z, a).value()(0, 0));

  Var emb = tape.Constant(Tensor::FromRows({{0.3, -1.2}, {x, x}, {2, 1}}));
  const NodeId us[] = {0, 1}, vs[] = {1, 1};
  const Tensor logits = PairLogits(emb, us, vs).value();
  EXPECT_NEAR(logits(0, 0), 0.3 * x - 1.2 * x, 1e-15);
  EXPECT_NEAR(logits(1, 0), std::log(3.0), 1e-15);
}

TEST(DecodeTest, Node) {
  Tape tape;
  Var z = tape.Constant(Tensor::FromRows({{1.0}}));
  Var w = tape.Constant(Tensor::FromRows({{0.0, std::log(3.0)}}));
  Var b = tape.Constant(Tensor(1, 2, 0.0));
  const Tensor lp = DecodeNode(z, w, b).value();
  EXPECT_NEAR(std::exp(lp(0, 0)), 0.25, 1e-15);
  EXPECT_NEAR(std::exp(lp(0, 1)), 0.75, 1e-15);
  Var flat = tape.Constant(Tensor(1, 4, 0.0));
  const Tensor uniform = DecodeNode(z, flat, tape.Constant(Tensor(1, 4, 0.7))).value();
  for (double v : uniform.values()) EXPECT_NEAR(v, std::log(0.25), 1e-15);
}

TEST(LossTest, Examples) {
  Tape tape;
  const double labels[] = {1, 0, 1};
  EXPECT_LE(BceLoss(tape.Constant(Tensor::FromRows({{1}, {0}, {1}})), labels).value()(0, 0),
            1e-11);
  EXPECT_NEAR(BceLoss(tape.Constant(Tensor(3, 1, 0.5)), labels).value()(0, 0), std::log(2.0),
              1e-15);
  EXPECT_NEAR(BceWithLogitsLoss(tape.Constant(Tensor(3, 1, 0.0)), labels).value()(0, 0),
              std::log(2.0), 1e-15);
  Var logits = tape.Constant(Tensor::FromRows({{2.5}, {-0.7}, {0.1}}));
  EXPECT_NEAR(BceWithLogitsLoss(logits, labels).value()(0, 0),
              BceLoss(ad::Sigmoid(logits), labels).value()(0, 0), 1e-14);
  const int classes[] = {0, 3};
  Var uniform = tape.Constant(Tensor(2, 5, std::log(0.2)));
  EXPECT_NEAR(NllLoss(uniform, classes).value()(0, 0), std::log(5.0), 1e-14);
}

TEST(LossTest, Gradients) {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  Tensor probs(4, 1), logits(4, 1), scores(3, 4);
  for (double& x : probs.values()) x = u(rng);
  for (double& x : logits.values()) x = 4 * u(rng) - 2;
  for (double& x : scores.values()) x = 4 * u(rng) - 2;
  const double labels[] = {1, 0, 0, 1};
  const int classes[] = {2, 0, 3};
  for (Tensor* t : {&probs, &logits, &scores}) t->set_requires_grad(true);
  auto check = [](Tensor& t, const std::function<Var(Var)>& f) {
    Tensor* params[] = {&t};
    return testing::MaxGradError(
        [&](bool backward) {
          Tape tape;
          Var l = f(tape.Param(t));
          if (backward) tape.Backward(l);
          return l.value()(0, 0);
        },
        params);
  };
  EXPECT_LT(check(probs, [&](Var p) { return BceLoss(p, labels); }), 1e-6);
  EXPECT_LT(check(logits, [&](Var x) { return BceWithLogitsLoss(x, labels); }), 1e-6);
  EXPECT_LT(check(scores, [&](Var s) { return NllLoss(ad::LogSoftmax(s), classes); }), 1e-6);
}

}  // namespace
}  // namespace graphreach
