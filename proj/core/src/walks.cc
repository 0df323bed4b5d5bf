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

#include "graphreach/walks.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <queue>
#include <random>

namespace graphreach {
namespace {

constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();
constexpr char kCacheMagic[8] = {'G', 'R', 'W', 'A', 'L', 'K', 'S', '\0'};
constexpr std::uint32_t kCacheVersion = 1;

// BFS hop distances from `source`; unreachable nodes get SIZE_MAX.
std::vector<std::size_t> BfsDistances(const AdjacencyIndex& adj, NodeId source) {
  std::vector<std::size_t> dist(adj.num_nodes(),
                                std::numeric_limits<std::size_t>::max());
  std::queue<NodeId> frontier;
  dist[source] = 0;
  frontier.push(source);
  while (!frontier.empty()) {
    const NodeId v = frontier.front();
    frontier.pop();
    for (const auto& nb : adj.neighbors(v)) {
      if (dist[nb.id] == std::numeric_limits<std::size_t>::max()) {
        dist[nb.id] = dist[v] + 1;
        frontier.push(nb.id);
      }
    }
  }
  return dist;
}

// Farthest reachable node and its distance.
std::pair<NodeId, std::size_t> Farthest(const AdjacencyIndex& adj, NodeId source) {
  const auto dist = BfsDistances(adj, source);
  std::pair<NodeId, std::size_t> best{source, 0};
  for (NodeId v = 0; v < dist.size(); ++v) {
    if (dist[v] != std::numeric_limits<std::size_t>::max() && dist[v] > best.second) {
      best = {v, dist[v]};
    }
  }
  return best;
}

template <typename T>
void WritePod(std::ofstream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
bool ReadPod(std::ifstream& in, T& value) {
  return static_cast<bool>(in.read(reinterpret_cast<char*>(&value), sizeof(T)));
}

}  // namespace

void WalkConfig::Validate() const {
  if (num_walks < 1) throw ConfigError("walks per node must be >= 1");
  if (walk_length < 1) throw ConfigError("walk length must be >= 1");
}

std::uint64_t WalkConfig::Hash() const {
  std::uint64_t h = Mix64(num_walks);
  h = Mix64(h ^ walk_length);
  return Mix64(h ^ seed);
}

std::size_t TheoreticalWalkCount(std::size_t num_nodes) {
  if (num_nodes < 2) return 1;
  const double n = static_cast<double>(num_nodes);
  return static_cast<std::size_t>(std::ceil(std::cbrt(n * n * std::log(n))));
}

std::size_t EstimateDiameter(const Graph& graph, std::uint64_t seed) {
  const std::size_t n = graph.num_nodes();
  if (n == 0) throw ConfigError("diameter of an empty graph");
  const AdjacencyIndex adj(graph);
  const auto component = ConnectedComponents(adj);
  std::vector<std::size_t> sizes(n, 0);
  for (auto c : component) ++sizes[c];
  const std::size_t largest = static_cast<std::size_t>(
      std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
  std::vector<NodeId> members;
  for (NodeId v = 0; v < n; ++v) {
    if (component[v] == largest) members.push_back(v);
  }

  std::size_t diameter = 0;
  if (n <= 10000) {
    for (NodeId v : members) diameter = std::max(diameter, Farthest(adj, v).second);
    return diameter;
  }
  std::mt19937_64 rng(DeriveSeed(seed, "diameter"));
  std::uniform_int_distribution<std::size_t> pick(0, members.size() - 1);
  for (int sweep = 0; sweep < 16; ++sweep) {
    const auto [far, d1] = Farthest(adj, members[pick(rng)]);
    const auto [unused, d2] = Farthest(adj, far);
    diameter = std::max({diameter, d1, d2});
  }
  return diameter;
}

WalkConfig ResolveWalkConfig(const Graph& graph, WalkConfig config) {
  if (config.walk_length == 0) {
    config.walk_length = std::max<std::size_t>(1, EstimateDiameter(graph, config.seed));
  }
  config.Validate();
  return config;
}

WalkSet::WalkSet(std::size_t num_nodes, std::size_t num_walks,
                 std::size_t walk_length, std::vector<std::uint32_t> lengths,
                 std::vector<NodeId> traces)
    : num_nodes_(num_nodes),
      num_walks_(num_walks),
      walk_length_(walk_length),
      lengths_(std::move(lengths)),
      traces_(std::move(traces)) {
  if (lengths_.size() != num_nodes_ * num_walks_ ||
      traces_.size() != num_nodes_ * num_walks_ * walk_length_) {
    throw DataError("walk set buffers do not match their declared shape");
  }
  for (std::size_t i = 0; i < lengths_.size(); ++i) {
    if (lengths_[i] > walk_length_) throw DataError("walk longer than walk_length");
    for (std::size_t s = 0; s < lengths_[i]; ++s) {
      if (traces_[i * walk_length_ + s] >= num_nodes_) {
        throw DataError("walk visits an unknown node");
      }
    }
  }
  BuildVisitIndex();
}

void WalkSet::BuildVisitIndex() {
  visit_offsets_.assign(num_nodes_ + 1, 0);
  visit_counts_.clear();
  std::vector<std::uint32_t> counts(num_nodes_, 0);
  std::vector<NodeId> touched;
  for (NodeId v = 0; v < num_nodes_; ++v) {
    touched.clear();
    for (std::size_t k = 0; k < num_walks_; ++k) {
      for (NodeId u : trace(v, k)) {
        if (counts[u]++ == 0) touched.push_back(u);
      }
    }
    std::sort(touched.begin(), touched.end());
    for (NodeId u : touched) {
      visit_counts_.push_back({u, counts[u]});
      counts[u] = 0;
    }
    visit_offsets_[v + 1] = visit_counts_.size();
  }
}

std::span<const NodeId> WalkSet::trace(NodeId source, std::size_t walk) const {
  const std::size_t slot = static_cast<std::size_t>(source) * num_walks_ + walk;
  return {traces_.data() + slot * walk_length_, lengths_[slot]};
}

std::span<const VisitCount> WalkSet::visits(NodeId source) const {
  return {visit_counts_.data() + visit_offsets_[source],
          visit_offsets_[source + 1] - visit_offsets_[source]};
}

std::uint32_t WalkSet::VisitTotal(NodeId source, NodeId target) const {
  const auto row = visits(source);
  auto it = std::lower_bound(row.begin(), row.end(), target,
                             [](const VisitCount& c, NodeId t) { return c.node < t; });
  return it != row.end() && it->node == target ? it->count : 0;
}

std::optional<std::size_t> WalkSet::FirstVisitStep(NodeId source, NodeId target,
                                                   std::size_t walk) const {
  const auto t = trace(source, walk);
  for (std::size_t s = 0; s < t.size(); ++s) {
    if (t[s] == target) return s + 1;
  }
  return std::nullopt;
}

WalkSet SampleWalks(const Graph& graph, const WalkConfig& config) {
  config.Validate();
  const std::size_t n = graph.num_nodes();
  if (n == 0) throw ConfigError("cannot sample walks on an empty graph");
  const AdjacencyIndex adj(graph);
  const std::size_t nw = config.num_walks, lw = config.walk_length;

  std::vector<std::uint32_t> lengths(n * nw, 0);
  std::vector<NodeId> traces(n * nw * lw, kNoNode);

  // Cumulative weights per node for proportional neighbour choice.
  std::vector<double> cumulative;
  cumulative.reserve(adj.num_nodes() == 0 ? 0 : graph.num_edges() * 2);
  std::vector<std::size_t> cum_offset(n + 1, 0);
  for (NodeId v = 0; v < n; ++v) {
    double acc = 0.0;
    for (const auto& nb : adj.neighbors(v)) {
      acc += nb.weight;
      cumulative.push_back(acc);
    }
    cum_offset[v + 1] = cumulative.size();
  }

  ParallelFor(n, config.threads, [&](std::size_t src) {
    std::mt19937_64 rng(DeriveSeed(config.seed, "walk", src));
    for (std::size_t k = 0; k < nw; ++k) {
      const std::size_t slot = src * nw + k;
      NodeId cur = static_cast<NodeId>(src);
      std::uint32_t len = 0;
      for (std::size_t step = 0; step < lw; ++step) {
        const std::size_t deg = adj.degree(cur);
        if (deg == 0) break;
        const double* first = cumulative.data() + cum_offset[cur];
        const double total = first[deg - 1];
        const double r = std::uniform_real_distribution<double>(0.0, total)(rng);
        std::size_t pick =
            static_cast<std::size_t>(std::upper_bound(first, first + deg, r) - first);
        pick = std::min(pick, deg - 1);
        cur = adj.neighbors(cur)[pick].id;
        traces[slot * lw + len++] = cur;
      }
      lengths[slot] = len;
    }
  });
  return WalkSet(n, nw, lw, std::move(lengths), std::move(traces));
}

double SimilarityCount(const WalkSet& walks, NodeId v, NodeId u) {
  return static_cast<double>(walks.VisitTotal(v, u)) /
         static_cast<double>(walks.walk_length() * walks.num_walks());
}

double SimilarityOrdered(const WalkSet& walks, NodeId v, NodeId u) {
  double total = 0.0;
  for (std::size_t k = 0; k < walks.num_walks(); ++k) {
    if (auto step = walks.FirstVisitStep(v, u, k)) total += 1.0 / static_cast<double>(*step);
  }
  return total;
}

SimilarityMatrix BuildSimilarityMatrix(const WalkSet& walks,
                                       std::span<const NodeId> anchors,
                                       SimilarityKind kind,
                                       bool normalize_ordered) {
  const std::size_t n = walks.num_nodes(), k = anchors.size();
  SimilarityMatrix sim;
  sim.kind = kind;
  sim.num_nodes = n;
  sim.num_anchors = k;
  sim.forward.assign(n * k, 0.0);
  sim.backward.assign(n * k, 0.0);

  // Anchor column of each node, or -1.
  std::vector<std::ptrdiff_t> column(n, -1);
  for (std::size_t i = 0; i < k; ++i) {
    if (anchors[i] >= n) {
      throw ConfigError("anchor id " + std::to_string(anchors[i]) + " out of range");
    }
    column[anchors[i]] = static_cast<std::ptrdiff_t>(i);
  }
  const double count_scale =
      1.0 / static_cast<double>(walks.walk_length() * walks.num_walks());
  const double ordered_scale =
      normalize_ordered ? 1.0 / static_cast<double>(walks.num_walks()) : 1.0;

  if (kind == SimilarityKind::kCount) {
    for (NodeId v = 0; v < n; ++v) {
      for (const auto& c : walks.visits(v)) {
        if (column[c.node] >= 0) {
          sim.forward[v * k + static_cast<std::size_t>(column[c.node])] =
              c.count * count_scale;
        }
      }
    }
    for (std::size_t i = 0; i < k; ++i) {
      for (const auto& c : walks.visits(anchors[i])) {
        sim.backward[c.node * k + i] = c.count * count_scale;
      }
    }
    return sim;
  }

  // Order-weighted: first-visit step per walk, found with a stamp array.
  std::vector<std::size_t> stamp(n, std::numeric_limits<std::size_t>::max());
  std::size_t epoch = 0;
  auto for_each_first_visit = [&](NodeId source, auto&& fn) {
    for (std::size_t w = 0; w < walks.num_walks(); ++w, ++epoch) {
      const auto t = walks.trace(source, w);
      for (std::size_t s = 0; s < t.size(); ++s) {
        if (stamp[t[s]] != epoch) {
          stamp[t[s]] = epoch;
          fn(t[s], s + 1);
        }
      }
    }
  };
  for (NodeId v = 0; v < n; ++v) {
    for_each_first_visit(v, [&](NodeId u, std::size_t step) {
      if (column[u] >= 0) {
        sim.forward[v * k + static_cast<std::size_t>(column[u])] +=
            ordered_scale / static_cast<double>(step);
      }
    });
  }
  for (std::size_t i = 0; i < k; ++i) {
    for_each_first_visit(anchors[i], [&](NodeId u, std::size_t step) {
      sim.backward[u * k + i] += ordered_scale / static_cast<double>(step);
    });
  }
  return sim;
}

void SaveWalkCache(const WalkSet& walks, std::uint64_t graph_hash,
                   const WalkConfig& config, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out.write(kCacheMagic, sizeof(kCacheMagic));
  WritePod(out, kCacheVersion);
  WritePod(out, graph_hash);
  WritePod(out, config.Hash());
  WritePod<std::uint64_t>(out, walks.num_nodes());
  WritePod<std::uint64_t>(out, walks.num_walks());
  WritePod<std::uint64_t>(out, walks.walk_length());
  out.write(reinterpret_cast<const char*>(walks.raw_lengths().data()),
            static_cast<std::streamsize>(walks.raw_lengths().size() * sizeof(std::uint32_t)));
  out.write(reinterpret_cast<const char*>(walks.raw_traces().data()),
            static_cast<std::streamsize>(walks.raw_traces().size() * sizeof(NodeId)));
  if (!out) throw DataError("failed writing " + path.string());
}

std::optional<WalkSet> LoadWalkCache(const std::filesystem::path& path,
                                     std::uint64_t graph_hash,
                                     const WalkConfig& config) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  char magic[sizeof(kCacheMagic)];
  if (!in.read(magic, sizeof(magic)) ||
      std::memcmp(magic, kCacheMagic, sizeof(magic)) != 0) {
    return std::nullopt;
  }
  std::uint32_t version = 0;
  std::uint64_t ghash = 0, chash = 0, n = 0, nw = 0, lw = 0;
  if (!ReadPod(in, version) || version != kCacheVersion) return std::nullopt;
  if (!ReadPod(in, ghash) || !ReadPod(in, chash) || !ReadPod(in, n) ||
      !ReadPod(in, nw) || !ReadPod(in, lw)) {
    return std::nullopt;
  }
  if (ghash != graph_hash || chash != config.Hash() || nw != config.num_walks ||
      lw != config.walk_length) {
    return std::nullopt;
  }
  std::vector<std::uint32_t> lengths(n * nw);
  std::vector<NodeId> traces(n * nw * lw);
  if (!in.read(reinterpret_cast<char*>(lengths.data()),
               static_cast<std::streamsize>(lengths.size() * sizeof(std::uint32_t))) ||
      !in.read(reinterpret_cast<char*>(traces.data()),
               static_cast<std::streamsize>(traces.size() * sizeof(NodeId)))) {
    return std::nullopt;
  }
  try {
    return WalkSet(n, nw, lw, std::move(lengths), std::move(traces));
  } catch (const DataError&) {
    return std::nullopt;
  }
}

}  // namespace graphreach
