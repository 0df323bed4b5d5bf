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

// Fixed-length random walks and the reachability similarities built on them.

#ifndef GRAPHREACH_WALKS_H_
#define GRAPHREACH_WALKS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "graphreach/common.h"
#include "graphreach/graph.h"

namespace graphreach {

struct WalkConfig {
  std::size_t num_walks = 50;   // walks per source node
  std::size_t walk_length = 0;  // steps per walk; 0 means "graph diameter"
  std::uint64_t seed = 0;
  std::size_t threads = 1;  // sampling parallelism; never changes the output

  void Validate() const;  // requires num_walks >= 1 and walk_length >= 1
  std::uint64_t Hash() const;
};

// Walk count that makes a walker discover an existing path with probability
// 1 - 1/n when walks are diameter-long: ceil(cbrt(n^2 ln n)).
std::size_t TheoreticalWalkCount(std::size_t num_nodes);

// Exact diameter of the largest connected component for n <= 10000 (BFS from
// every node of that component); above that, the best of 16 double sweeps
// started from random nodes, which is a lower bound.
std::size_t EstimateDiameter(const Graph& graph, std::uint64_t seed = 0);

// Fills walk_length from the diameter when it is 0 (minimum 1).
WalkConfig ResolveWalkConfig(const Graph& graph, WalkConfig config);

struct VisitCount {
  NodeId node = 0;
  std::uint32_t count = 0;
};

// Traces of n_w walks from every node. A trace lists the nodes visited after
// the start node; it is shorter than walk_length only when the walk reached a
// node without outgoing edges.
class WalkSet {
 public:
  WalkSet() = default;
  WalkSet(std::size_t num_nodes, std::size_t num_walks, std::size_t walk_length,
          std::vector<std::uint32_t> lengths, std::vector<NodeId> traces);

  std::size_t num_nodes() const { return num_nodes_; }
  std::size_t num_walks() const { return num_walks_; }
  std::size_t walk_length() const { return walk_length_; }

  std::span<const NodeId> trace(NodeId source, std::size_t walk) const;

  // Sparse visit totals over all walks of `source`, sorted by node id.
  std::span<const VisitCount> visits(NodeId source) const;
  std::uint32_t VisitTotal(NodeId source, NodeId target) const;

  // 1-based step of the first visit to `target` in walk `walk` of `source`.
  std::optional<std::size_t> FirstVisitStep(NodeId source, NodeId target,
                                            std::size_t walk) const;

  const std::vector<std::uint32_t>& raw_lengths() const { return lengths_; }
  const std::vector<NodeId>& raw_traces() const { return traces_; }

  friend bool operator==(const WalkSet& a, const WalkSet& b) {
    return a.num_nodes_ == b.num_nodes_ && a.num_walks_ == b.num_walks_ &&
           a.walk_length_ == b.walk_length_ && a.lengths_ == b.lengths_ &&
           a.traces_ == b.traces_;
  }

 private:
  void BuildVisitIndex();

  std::size_t num_nodes_ = 0;
  std::size_t num_walks_ = 0;
  std::size_t walk_length_ = 0;
  std::vector<std::uint32_t> lengths_;  // num_nodes * num_walks
  std::vector<NodeId> traces_;          // num_nodes * num_walks * walk_length
  std::vector<std::size_t> visit_offsets_;
  std::vector<VisitCount> visit_counts_;
};

// Each step moves to an out-neighbour with probability proportional to the
// edge weight. Source v draws from its own stream seeded by (seed, v).
// `config.walk_length` must already be resolved.
WalkSet SampleWalks(const Graph& graph, const WalkConfig& config);

// Fraction of all walk steps from v that landed on u.
double SimilarityCount(const WalkSet& walks, NodeId v, NodeId u);

// Sum over walks from v of 1 / (first step that visits u); unvisited walks
// contribute 0.
double SimilarityOrdered(const WalkSet& walks, NodeId v, NodeId u);

enum class SimilarityKind { kCount, kOrdered };

// forward(v, i) = s(v, a_i); backward(v, i) = s(a_i, v). Both n x k, row-major.
struct SimilarityMatrix {
  SimilarityKind kind = SimilarityKind::kCount;
  std::size_t num_nodes = 0;
  std::size_t num_anchors = 0;
  std::vector<double> forward;
  std::vector<double> backward;

  double fwd(NodeId v, std::size_t i) const { return forward[v * num_anchors + i]; }
  double bwd(NodeId v, std::size_t i) const { return backward[v * num_anchors + i]; }
};

// `normalize_ordered` divides order-weighted scores by n_w.
SimilarityMatrix BuildSimilarityMatrix(const WalkSet& walks,
                                       std::span<const NodeId> anchors,
                                       SimilarityKind kind,
                                       bool normalize_ordered = false);

// Binary walk cache with a versioned header. Loading returns nullopt when the
// file is missing or was written for a different graph or config.
void SaveWalkCache(const WalkSet& walks, std::uint64_t graph_hash,
                   const WalkConfig& config, const std::filesystem::path& path);
std::optional<WalkSet> LoadWalkCache(const std::filesystem::path& path,
                                     std::uint64_t graph_hash,
                                     const WalkConfig& config);

}  // namespace graphreach

#endif  // GRAPHREACH_WALKS_H_
