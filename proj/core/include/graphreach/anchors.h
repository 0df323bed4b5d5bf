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

// Anchor selection as maximum coverage over the bipartite reachability graph.
//
// Left node u covers right node v when some retained walk starting at v
// visits u. Coverage |rho(A)| is monotone submodular, so greedy selection is
// within (1 - 1/e) of the optimum.

#ifndef GRAPHREACH_ANCHORS_H_
#define GRAPHREACH_ANCHORS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "graphreach/common.h"
#include "graphreach/walks.h"

namespace graphreach {

class BipartiteReach {
 public:
  BipartiteReach() = default;
  // reach[u] = right nodes covered by left node u; sorted and deduplicated
  // on construction.
  explicit BipartiteReach(std::vector<std::vector<NodeId>> reach,
                          std::size_t num_right = 0);

  std::size_t num_left() const { return reach_.size(); }
  std::size_t num_right() const { return num_right_; }
  std::span<const NodeId> reach(NodeId u) const { return reach_[u]; }

  // |rho(A)|.
  std::size_t Coverage(std::span<const NodeId> left_nodes) const;

 private:
  std::vector<std::vector<NodeId>> reach_;
  std::size_t num_right_ = 0;
};

// Keeps walks whose index passes `keep(source, walk_index)`; all walks when
// `keep` is empty.
BipartiteReach BuildBipartite(
    const WalkSet& walks,
    const std::function<bool(NodeId, std::size_t)>& keep = {});

enum class AnchorStrategy { kGreedy, kFrequency, kRandom };

std::string ToString(AnchorStrategy strategy);
AnchorStrategy ParseAnchorStrategy(const std::string& name);

struct AnchorSet {
  // Selection order for greedy; ascending id for frequency and random.
  std::vector<NodeId> ids;
  AnchorStrategy provenance = AnchorStrategy::kGreedy;

  std::size_t size() const { return ids.size(); }
  friend bool operator==(const AnchorSet&, const AnchorSet&) = default;
};

// Lazy greedy: stale marginal gains sit in a max-heap and are revalidated on
// pop. Ties go to the lowest id. When the chosen anchors already cover every
// reachable right node, selection continues with a fresh covering round over
// the unchosen nodes instead of filling by id. Returns min(k, num_left)
// anchors in selection order.
AnchorSet GreedySelect(const BipartiteReach& bipartite, std::size_t k);

struct FrequencyOptions {
  double sample_fraction = 0.30;
  std::size_t rounds = 5;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
};

// Runs GreedySelect on `rounds` bipartite graphs, each built from
// ceil(fraction * n_w) walks per source drawn without replacement, and keeps
// the k most frequently chosen nodes. Ties: larger marginal coverage on the
// full bipartite graph given the nodes already kept, then lower id.
AnchorSet FrequencySelect(const WalkSet& walks, std::size_t k,
                          const FrequencyOptions& options);

// Uniform k-subset. Throws ConfigError when k > n.
AnchorSet RandomSelect(std::size_t n, std::size_t k, std::uint64_t seed);

struct ExactSelection {
  AnchorSet anchors;
  std::size_t coverage = 0;
};

// Exhaustive optimum over all k-subsets, first in lexicographic order among
// ties. Throws ConfigError when C(num_left, k) > 1e6.
ExactSelection BruteForceSelect(const BipartiteReach& bipartite, std::size_t k);

// ceil((ln n)^2), at least 1.
std::size_t DefaultAnchorCount(std::size_t n);

// "log2n" (the default), "<int>", or "<pct>%" of n. Result clamped to [1, n].
std::size_t ResolveAnchorCount(const std::string& spec, std::size_t n);

struct AnchorFileHeader {
  AnchorStrategy provenance = AnchorStrategy::kGreedy;
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;
};

void SaveAnchors(const AnchorSet& anchors, const AnchorFileHeader& header,
                 const std::filesystem::path& path);
AnchorSet LoadAnchors(const std::filesystem::path& path,
                      AnchorFileHeader* header = nullptr);

}  // namespace graphreach

#endif  // GRAPHREACH_ANCHORS_H_
