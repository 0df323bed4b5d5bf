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

// Reference computations used as test oracles. They deliberately avoid the
// library's own data structures beyond Graph and Tensor.

#ifndef GRAPHREACH_TESTS_ORACLES_H_
#define GRAPHREACH_TESTS_ORACLES_H_

#include <cmath>
#include <cstddef>
#include <functional>
#include <set>
#include <span>
#include <vector>

#include "graphreach/graph.h"
#include "graphreach/tensor.h"

namespace graphreach::testing {

struct ExactSimilarity {
  double count = 0.0;    // expected visits / l_w
  double ordered = 0.0;  // expected 1/first-visit step, per walk
};

// Enumerates every walk of `length` steps from `v` with its probability.
// Neighbour choice is proportional to edge weight; a node without
// neighbours ends the walk.
inline ExactSimilarity EnumerateSimilarity(const Graph& g, NodeId v, NodeId u,
                                           std::size_t length) {
  std::vector<std::vector<std::pair<NodeId, double>>> nbrs(g.num_nodes());
  for (const auto& e : g.edges()) {
    nbrs[e.u].push_back({e.v, e.w});
    if (!g.directed()) nbrs[e.v].push_back({e.u, e.w});
  }
  ExactSimilarity out;
  std::function<void(NodeId, std::size_t, double, std::size_t, std::size_t)> rec =
      [&](NodeId at, std::size_t step, double p, std::size_t visits, std::size_t first) {
        double total = 0.0;
        for (const auto& [_, w] : nbrs[at]) total += w;
        if (step == length || nbrs[at].empty()) {
          out.count += p * static_cast<double>(visits) / static_cast<double>(length);
          if (first > 0) out.ordered += p / static_cast<double>(first);
          return;
        }
        for (const auto& [next, w] : nbrs[at]) {
          const bool hit = next == u;
          rec(next, step + 1, p * w / total, visits + (hit ? 1 : 0),
              first == 0 && hit ? step + 1 : first);
        }
      };
  rec(v, 0, 1.0, 0, 0);
  return out;
}

inline std::size_t SetCoverage(const std::vector<std::set<NodeId>>& reach,
                               std::span<const NodeId> chosen) {
  std::set<NodeId> covered;
  for (NodeId a : chosen) covered.insert(reach[a].begin(), reach[a].end());
  return covered.size();
}

// Fraction of (positive, negative) pairs ordered correctly; ties count half.
inline double PairwiseAuc(std::span<const double> scores, std::span<const double> labels) {
  double good = 0.0, total = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != 1.0) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] != 0.0) continue;
      total += 1.0;
      if (scores[i] > scores[j]) good += 1.0;
      if (scores[i] == scores[j]) good += 0.5;
    }
  }
  return good / total;
}

// Max over entries of |analytic - numeric| / max(1, |numeric|), central
// differences with step h. `loss` evaluates the scalar and, when asked,
// leaves analytic gradients in each tensor's grad().
inline double MaxGradError(const std::function<double(bool)>& loss,
                           std::span<ad::Tensor* const> params, double h = 1e-5) {
  for (ad::Tensor* p : params) p->ZeroGrad();
  loss(true);
  std::vector<std::vector<double>> analytic;
  for (ad::Tensor* p : params) analytic.emplace_back(p->grad().begin(), p->grad().end());
  double worst = 0.0;
  for (std::size_t t = 0; t < params.size(); ++t) {
    auto values = params[t]->values();
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double keep = values[i];
      values[i] = keep + h;
      const double up = loss(false);
      values[i] = keep - h;
      const double down = loss(false);
      values[i] = keep;
      const double numeric = (up - down) / (2 * h);
      worst = std::max(worst, std::abs(analytic[t][i] - numeric) /
                                  std::max(1.0, std::abs(numeric)));
    }
  }
  return worst;
}

}  // namespace graphreach::testing

#endif  // GRAPHREACH_TESTS_ORACLES_H_
