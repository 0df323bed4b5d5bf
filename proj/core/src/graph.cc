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

#include "graphreach/graph.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <numeric>
#include <queue>
#include <sstream>
#include <unordered_map>

namespace graphreach {
namespace {

std::string LineError(const std::filesystem::path& file, std::size_t line,
                      const std::string& what) {
  return file.string() + ":" + std::to_string(line) + ": " + what;
}

std::vector<std::string> SplitWhitespace(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::vector<std::string> SplitComma(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  for (auto& s : out) {
    const auto b = s.find_first_not_of(" \t");
    const auto e = s.find_last_not_of(" \t");
    s = b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  }
  return out;
}

std::optional<long long> ParseInt(const std::string& s) {
  long long v = 0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return v;
}

std::optional<double> ParseDouble(const std::string& s) {
  if (s.empty()) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

bool IsBlankOrComment(const std::string& line) {
  const auto b = line.find_first_not_of(" \t\r");
  return b == std::string::npos || line[b] == '#';
}

// Shortest round-trip representation of a double.
std::string FormatDouble(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

Graph::Graph(std::size_t num_nodes, std::vector<Edge> edges, bool directed)
    : num_nodes_(num_nodes), directed_(directed), edges_(std::move(edges)) {
  for (auto& e : edges_) {
    if (e.u >= num_nodes_ || e.v >= num_nodes_) {
      throw DataError("edge (" + std::to_string(e.u) + "," +
                      std::to_string(e.v) + ") has an endpoint outside [0," +
                      std::to_string(num_nodes_) + ")");
    }
    if (e.u == e.v) {
      throw DataError("self-loop on node " + std::to_string(e.u));
    }
    if (!(e.w > 0.0) || !std::isfinite(e.w)) {
      throw DataError("edge (" + std::to_string(e.u) + "," +
                      std::to_string(e.v) + ") has non-positive weight");
    }
    if (!directed_ && e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });
  for (std::size_t i = 1; i < edges_.size(); ++i) {
    if (edges_[i].u == edges_[i - 1].u && edges_[i].v == edges_[i - 1].v) {
      throw DataError("duplicate edge (" + std::to_string(edges_[i].u) + "," +
                      std::to_string(edges_[i].v) + ")");
    }
  }
}

std::span<const double> Graph::attribute_row(NodeId v) const {
  return {attributes_.data() + static_cast<std::size_t>(v) * attr_dim_,
          attr_dim_};
}

const std::vector<int>& Graph::labels() const {
  if (!labels_) throw DataError("graph has no labels");
  return *labels_;
}

std::size_t Graph::num_classes() const {
  const auto& l = labels();
  if (l.empty()) return 0;
  return static_cast<std::size_t>(*std::max_element(l.begin(), l.end())) + 1;
}

bool Graph::HasEdge(NodeId u, NodeId v) const {
  if (!directed_ && u > v) std::swap(u, v);
  auto it = std::lower_bound(
      edges_.begin(), edges_.end(), std::pair{u, v},
      [](const Edge& e, const std::pair<NodeId, NodeId>& key) {
        return e.u != key.first ? e.u < key.first : e.v < key.second;
      });
  return it != edges_.end() && it->u == u && it->v == v;
}

Graph Graph::WithAttributes(std::vector<double> values, std::size_t dim) const {
  if (dim == 0 || values.size() != num_nodes_ * dim) {
    throw DataError("attribute matrix must be " + std::to_string(num_nodes_) +
                    " x d with d >= 1");
  }
  for (double x : values) {
    if (!std::isfinite(x)) throw DataError("non-finite attribute value");
  }
  Graph g = *this;
  g.attr_dim_ = dim;
  g.attributes_ = std::move(values);
  return g;
}

Graph Graph::WithLabels(std::vector<int> labels) const {
  if (labels.size() != num_nodes_) {
    throw DataError("expected " + std::to_string(num_nodes_) + " labels, got " +
                    std::to_string(labels.size()));
  }
  for (int l : labels) {
    if (l < 0) throw DataError("labels must be non-negative class ids");
  }
  Graph g = *this;
  g.labels_ = std::move(labels);
  return g;
}

Graph Graph::WithEdges(std::vector<Edge> edges) const {
  Graph g(num_nodes_, std::move(edges), directed_);
  g.attr_dim_ = attr_dim_;
  g.attributes_ = attributes_;
  g.labels_ = labels_;
  return g;
}

std::uint64_t Graph::StructureHash() const {
  std::uint64_t h = Fnv1a("graph");
  auto feed = [&h](const void* p, std::size_t n) {
    h = Fnv1a(std::string_view(static_cast<const char*>(p), n), h);
  };
  const std::uint64_t n = num_nodes_;
  const std::uint8_t d = directed_ ? 1 : 0;
  feed(&n, sizeof(n));
  feed(&d, sizeof(d));
  for (const auto& e : edges_) {
    feed(&e.u, sizeof(e.u));
    feed(&e.v, sizeof(e.v));
    feed(&e.w, sizeof(e.w));
  }
  return h;
}

AdjacencyIndex::AdjacencyIndex(const Graph& graph) {
  const std::size_t n = graph.num_nodes();
  std::vector<std::size_t> degree(n, 0);
  for (const auto& e : graph.edges()) {
    ++degree[e.u];
    if (!graph.directed()) ++degree[e.v];
  }
  offsets_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) offsets_[v + 1] = offsets_[v] + degree[v];
  neighbors_.resize(offsets_[n]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const auto& e : graph.edges()) {
    neighbors_[fill[e.u]++] = {e.v, e.w};
    if (!graph.directed()) neighbors_[fill[e.v]++] = {e.u, e.w};
  }
  total_weight_.assign(n, 0.0);
  for (std::size_t v = 0; v < n; ++v) {
    auto first = neighbors_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]);
    auto last = neighbors_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]);
    std::sort(first, last,
              [](const Neighbor& a, const Neighbor& b) { return a.id < b.id; });
    for (auto it = first; it != last; ++it) total_weight_[v] += it->weight;
  }
}

std::vector<std::size_t> ConnectedComponents(const AdjacencyIndex& adjacency) {
  const std::size_t n = adjacency.num_nodes();
  // Union-find so directed graphs get weak components.
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&parent](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (NodeId v = 0; v < n; ++v) {
    for (const auto& nb : adjacency.neighbors(v)) {
      const std::size_t a = find(v), b = find(nb.id);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }
  std::vector<std::size_t> component(n);
  std::vector<std::size_t> label_of_root(n, n);
  std::size_t next = 0;
  for (std::size_t v = 0; v < n; ++v) {
    const std::size_t r = find(v);
    if (label_of_root[r] == n) label_of_root[r] = next++;
    component[v] = label_of_root[r];
  }
  return component;
}

Graph GenerateGrid(std::size_t rows, std::size_t cols) {
  if (rows < 1 || cols < 1) throw ConfigError("grid needs rows, cols >= 1");
  std::vector<Edge> edges;
  auto id = [cols](std::size_t r, std::size_t c) {
    return static_cast<NodeId>(r * cols + c);
  };
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (c + 1 < cols) edges.push_back({id(r, c), id(r, c + 1), 1.0});
      if (r + 1 < rows) edges.push_back({id(r, c), id(r + 1, c), 1.0});
    }
  }
  return Graph(rows * cols, std::move(edges));
}

Graph GenerateConnectedCaveman(std::size_t cliques, std::size_t clique_size) {
  if (cliques < 2 || clique_size < 2) {
    throw ConfigError("connected caveman needs cliques >= 2, clique_size >= 2");
  }
  const std::size_t s = clique_size;
  std::vector<Edge> edges;
  std::vector<int> labels(cliques * s);
  for (std::size_t c = 0; c < cliques; ++c) {
    const std::size_t base = c * s;
    for (std::size_t i = 0; i < s; ++i) {
      labels[base + i] = static_cast<int>(c);
      for (std::size_t j = i + 1; j < s; ++j) {
        if (i == 0 && j == 1) continue;  // rewired below
        edges.push_back({static_cast<NodeId>(base + i),
                         static_cast<NodeId>(base + j), 1.0});
      }
    }
    // With two cliques the second redirect repeats the first.
    if (cliques == 2 && c == 1) continue;
    edges.push_back({static_cast<NodeId>(base),
                     static_cast<NodeId>(((c + 1) % cliques) * s), 1.0});
  }
  return Graph(cliques * s, std::move(edges)).WithLabels(std::move(labels));
}

LoadedGraph LoadGraph(const std::filesystem::path& edge_file,
                      const std::optional<std::filesystem::path>& attr_file,
                      const std::optional<std::filesystem::path>& label_file) {
  std::ifstream in(edge_file);
  if (!in) throw DataError("cannot open " + edge_file.string());

  struct RawEdge {
    std::string u, v;
    double w;
    std::size_t line;
  };
  std::vector<RawEdge> raw;
  std::optional<std::size_t> declared_nodes;
  bool directed = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (IsBlankOrComment(line)) {
      const auto toks = SplitWhitespace(line);
      if (toks.size() == 3 && toks[0] == "#" && toks[1] == "nodes") {
        const auto n = ParseInt(toks[2]);
        if (!n || *n < 0) {
          throw DataError(LineError(edge_file, lineno, "bad node count"));
        }
        declared_nodes = static_cast<std::size_t>(*n);
      } else if (toks.size() == 2 && toks[0] == "#" && toks[1] == "directed") {
        directed = true;
      }
      continue;
    }
    const auto toks = SplitWhitespace(line);
    if (toks.size() != 2 && toks.size() != 3) {
      throw DataError(LineError(edge_file, lineno, "expected 'u v [w]'"));
    }
    double w = 1.0;
    if (toks.size() == 3) {
      const auto parsed = ParseDouble(toks[2]);
      if (!parsed || *parsed <= 0.0) {
        throw DataError(LineError(edge_file, lineno, "bad edge weight"));
      }
      w = *parsed;
    }
    if (toks[0] == toks[1]) {
      throw DataError(LineError(edge_file, lineno, "self-loop"));
    }
    raw.push_back({toks[0], toks[1], w, lineno});
  }

  // Build the id map.
  std::vector<std::string> original;
  std::unordered_map<std::string, NodeId> index;
  if (declared_nodes) {
    original.resize(*declared_nodes);
    for (std::size_t i = 0; i < *declared_nodes; ++i) {
      original[i] = std::to_string(i);
      index.emplace(original[i], static_cast<NodeId>(i));
    }
    for (const auto& e : raw) {
      for (const auto* tok : {&e.u, &e.v}) {
        if (!index.count(*tok)) {
          throw DataError(LineError(edge_file, e.line,
                                    "node id '" + *tok + "' outside [0, " +
                                        std::to_string(*declared_nodes) + ")"));
        }
      }
    }
  } else {
    std::vector<std::string> ids;
    for (const auto& e : raw) {
      ids.push_back(e.u);
      ids.push_back(e.v);
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    const bool all_int = std::all_of(ids.begin(), ids.end(), [](const auto& s) {
      return ParseInt(s).has_value();
    });
    if (all_int) {
      std::sort(ids.begin(), ids.end(), [](const auto& a, const auto& b) {
        return *ParseInt(a) < *ParseInt(b);
      });
    }
    original = ids;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      index.emplace(ids[i], static_cast<NodeId>(i));
    }
  }

  std::vector<Edge> edges;
  edges.reserve(raw.size());
  {
    std::map<std::pair<NodeId, NodeId>, std::size_t> seen;
    for (const auto& e : raw) {
      NodeId u = index.at(e.u), v = index.at(e.v);
      auto key = directed ? std::pair{u, v} : std::pair{std::min(u, v), std::max(u, v)};
      auto [it, inserted] = seen.emplace(key, e.line);
      if (!inserted) {
        throw DataError(LineError(edge_file, e.line,
                                  "duplicate edge (first seen on line " +
                                      std::to_string(it->second) + ")"));
      }
      edges.push_back({u, v, e.w});
    }
  }
  Graph graph(original.size(), std::move(edges), directed);
  const std::size_t n = graph.num_nodes();

  auto lookup = [&](const std::filesystem::path& file, std::size_t ln,
                    const std::string& tok) -> NodeId {
    auto it = index.find(tok);
    if (it == index.end()) {
      throw DataError(LineError(file, ln, "unknown node id '" + tok + "'"));
    }
    return it->second;
  };

  if (attr_file) {
    std::ifstream af(*attr_file);
    if (!af) throw DataError("cannot open " + attr_file->string());
    std::size_t dim = 0;
    std::vector<double> values;
    std::vector<bool> filled(n, false);
    lineno = 0;
    bool first = true;
    while (std::getline(af, line)) {
      ++lineno;
      if (IsBlankOrComment(line)) continue;
      const auto fields = SplitComma(line);
      if (first) {
        first = false;
        // Optional header: any non-numeric feature column.
        bool header = fields.size() < 2;
        for (std::size_t i = 1; i < fields.size() && !header; ++i) {
          header = !ParseDouble(fields[i]).has_value();
        }
        if (header) continue;
      }
      if (fields.size() < 2) {
        throw DataError(LineError(*attr_file, lineno, "expected 'node_id,f1,...'"));
      }
      if (dim == 0) {
        dim = fields.size() - 1;
        values.assign(n * dim, 0.0);
      } else if (fields.size() - 1 != dim) {
        throw DataError(LineError(*attr_file, lineno,
                                  "attribute dimension mismatch: expected " +
                                      std::to_string(dim) + ", got " +
                                      std::to_string(fields.size() - 1)));
      }
      const NodeId v = lookup(*attr_file, lineno, fields[0]);
      for (std::size_t i = 0; i < dim; ++i) {
        const auto x = ParseDouble(fields[i + 1]);
        if (!x) throw DataError(LineError(*attr_file, lineno, "bad attribute value"));
        values[static_cast<std::size_t>(v) * dim + i] = *x;
      }
      filled[v] = true;
    }
    if (dim == 0) throw DataError(attr_file->string() + ": no attribute rows");
    for (std::size_t v = 0; v < n; ++v) {
      if (!filled[v]) {
        throw DataError(attr_file->string() + ": missing attributes for node '" +
                        original[v] + "'");
      }
    }
    graph = graph.WithAttributes(std::move(values), dim);
  }

  if (label_file) {
    std::ifstream lf(*label_file);
    if (!lf) throw DataError("cannot open " + label_file->string());
    std::vector<int> labels(n, -1);
    lineno = 0;
    bool first = true;
    while (std::getline(lf, line)) {
      ++lineno;
      if (IsBlankOrComment(line)) continue;
      const auto fields = SplitComma(line);
      if (first) {
        first = false;
        if (fields.size() == 2 && !ParseInt(fields[1])) continue;  // header
      }
      if (fields.size() != 2) {
        throw DataError(LineError(*label_file, lineno, "expected 'node_id,label'"));
      }
      const NodeId v = lookup(*label_file, lineno, fields[0]);
      const auto l = ParseInt(fields[1]);
      if (!l || *l < 0) {
        throw DataError(LineError(*label_file, lineno, "bad label"));
      }
      labels[v] = static_cast<int>(*l);
    }
    for (std::size_t v = 0; v < n; ++v) {
      if (labels[v] < 0) {
        throw DataError(label_file->string() + ": missing label for node '" +
                        original[v] + "'");
      }
    }
    graph = graph.WithLabels(std::move(labels));
  }
  return {std::move(graph), std::move(original)};
}

GraphFiles SaveGraph(const Graph& graph, const std::filesystem::path& dir,
                     const std::string& stem) {
  std::filesystem::create_directories(dir);
  GraphFiles files;
  files.edges = dir / (stem + ".edges");
  {
    std::ofstream out(files.edges);
    if (!out) throw DataError("cannot write " + files.edges.string());
    out << "# nodes " << graph.num_nodes() << "\n";
    if (graph.directed()) out << "# directed\n";
    for (const auto& e : graph.edges()) {
      out << e.u << ' ' << e.v;
      if (e.w != 1.0) out << ' ' << FormatDouble(e.w);
      out << '\n';
    }
  }
  if (graph.has_attributes()) {
    files.attributes = dir / (stem + ".attrs.csv");
    std::ofstream out(*files.attributes);
    if (!out) throw DataError("cannot write " + files.attributes->string());
    for (NodeId v = 0; v < graph.num_nodes(); ++v) {
      out << v;
      for (double x : graph.attribute_row(v)) out << ',' << FormatDouble(x);
      out << '\n';
    }
  }
  if (graph.has_labels()) {
    files.labels = dir / (stem + ".labels.csv");
    std::ofstream out(*files.labels);
    if (!out) throw DataError("cannot write " + files.labels->string());
    out << "node_id,label\n";
    for (NodeId v = 0; v < graph.num_nodes(); ++v) {
      out << v << ',' << graph.labels()[v] << '\n';
    }
  }
  return files;
}

void WriteIdMapping(const std::vector<std::string>& original_ids,
                    const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << "original_id,node_id\n";
  for (std::size_t i = 0; i < original_ids.size(); ++i) {
    out << original_ids[i] << ',' << i << '\n';
  }
}

}  // namespace graphreach
