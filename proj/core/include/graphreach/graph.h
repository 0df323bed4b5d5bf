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

// Graph data model: weighted edges over dense node ids, optional per-node
// attribute rows and integer class labels, plus the adjacency index used by
// walk sampling and BFS.

#ifndef GRAPHREACH_GRAPH_H_
#define GRAPHREACH_GRAPH_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "graphreach/common.h"

namespace graphreach {

struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  double w = 1.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

// Immutable once built. Undirected edges are stored once with u < v and the
// edge list is kept sorted, so two graphs with the same edge set compare equal
// regardless of input order.
class Graph {
 public:
  Graph() = default;

  // Throws DataError on out-of-range endpoints, self-loops, non-positive
  // weights or duplicate pairs.
  Graph(std::size_t num_nodes, std::vector<Edge> edges, bool directed = false);

  std::size_t num_nodes() const { return num_nodes_; }
  std::size_t num_edges() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  bool directed() const { return directed_; }

  bool has_attributes() const { return attr_dim_ > 0; }
  std::size_t attribute_dim() const { return attr_dim_; }
  // Row-major num_nodes x attribute_dim.
  const std::vector<double>& attributes() const { return attributes_; }
  std::span<const double> attribute_row(NodeId v) const;

  bool has_labels() const { return labels_.has_value(); }
  const std::vector<int>& labels() const;
  std::size_t num_classes() const;

  bool HasEdge(NodeId u, NodeId v) const;

  // Copies that carry extra node data. Throw DataError on size mismatch.
  Graph WithAttributes(std::vector<double> values, std::size_t dim) const;
  Graph WithLabels(std::vector<int> labels) const;
  // Same nodes, attributes and labels over a different edge set.
  Graph WithEdges(std::vector<Edge> edges) const;

  // Hash of the structure (n, directedness, weighted edges).
  std::uint64_t StructureHash() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::size_t num_nodes_ = 0;
  bool directed_ = false;
  std::vector<Edge> edges_;
  std::size_t attr_dim_ = 0;
  std::vector<double> attributes_;
  std::optional<std::vector<int>> labels_;
};

struct Neighbor {
  NodeId id = 0;
  double weight = 1.0;
};

// CSR view of outgoing edges. Undirected edges appear in both directions.
class AdjacencyIndex {
 public:
  explicit AdjacencyIndex(const Graph& graph);

  std::size_t num_nodes() const { return total_weight_.size(); }
  std::span<const Neighbor> neighbors(NodeId v) const {
    return {neighbors_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  std::size_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }
  double total_weight(NodeId v) const { return total_weight_[v]; }

 private:
  std::vector<std::size_t> offsets_;
  std::vector<Neighbor> neighbors_;
  std::vector<double> total_weight_;
};

// Weakly connected component id per node, numbered in order of lowest member.
std::vector<std::size_t> ConnectedComponents(const AdjacencyIndex& adjacency);

// rows x cols 4-neighbour lattice, unit weights.
Graph GenerateGrid(std::size_t rows, std::size_t cols);

// `cliques` cliques of `clique_size` nodes on a ring. In clique c the edge
// (c*s, c*s+1) is redirected to (c*s, s*((c+1) mod cliques)); with two
// cliques the two redirects coincide and one edge is kept. Nodes carry their
// clique index as label.
Graph GenerateConnectedCaveman(std::size_t cliques, std::size_t clique_size);

struct LoadedGraph {
  Graph graph;
  // original_ids[i] is the identifier node i had in the input files.
  std::vector<std::string> original_ids;
};

// Edge list: "u v [w]" per line, '#' comments. A "# nodes N" directive fixes
// the node count and disables id remapping (ids must be integers in [0, N));
// "# directed" marks a directed graph. Without the directive, ids are
// remapped to 0..n-1 in numeric order (or lexicographic order if any id is
// not an integer).
LoadedGraph LoadGraph(const std::filesystem::path& edge_file,
                      const std::optional<std::filesystem::path>& attr_file = {},
                      const std::optional<std::filesystem::path>& label_file = {});

struct GraphFiles {
  std::filesystem::path edges;
  std::optional<std::filesystem::path> attributes;
  std::optional<std::filesystem::path> labels;
};

// Writes `<stem>.edges`, and `<stem>.attrs.csv` / `<stem>.labels.csv` when the
// graph carries them.
GraphFiles SaveGraph(const Graph& graph, const std::filesystem::path& dir,
                     const std::string& stem);

void WriteIdMapping(const std::vector<std::string>& original_ids,
                    const std::filesystem::path& path);

}  // namespace graphreach

#endif  // GRAPHREACH_GRAPH_H_
