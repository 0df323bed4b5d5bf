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

#include <filesystem>
#include <fstream>
#include <set>
#include <string>

#include <gtest/gtest.h>

#include "graphreach/common.h"
#include "graphreach/graph.h"
#include "graphreach/walks.h"

namespace graphreach {
namespace {

namespace fs = std::filesystem;

fs::path WriteFile(const std::string& name, const std::string& text) {
  const fs::path path = fs::path(::testing::TempDir()) / name;
  std::ofstream(path) << text;
  return path;
}

bool Connected(const Graph& g) {
  const auto comp = ConnectedComponents(AdjacencyIndex(g));
  return std::set<std::size_t>(comp.begin(), comp.end()).size() <= 1;
}

TEST(GridTest, TwentyByTwenty) {
  const Graph g = GenerateGrid(20, 20);
  EXPECT_EQ(g.num_nodes(), 400u);
  EXPECT_EQ(g.num_edges(), 760u);
  EXPECT_EQ(EstimateDiameter(g), 38u);
}

TEST(GridTest, SmallCases) {
  EXPECT_EQ(GenerateGrid(1, 1).num_edges(), 0u);
  const Graph g = GenerateGrid(2, 3);
  EXPECT_EQ(g.num_nodes(), 6u);
  EXPECT_EQ(g.num_edges(), 7u);
  // Hand enumeration of the 2x3 lattice, row-major ids.
  for (auto [u, v] : {std::pair{0, 1}, {1, 2}, {3, 4}, {4, 5}, {0, 3}, {1, 4}, {2, 5}}) {
    EXPECT_TRUE(g.HasEdge(u, v)) << u << "-" << v;
  }
  EXPECT_FALSE(g.HasEdge(0, 4));
  EXPECT_THROW(GenerateGrid(0, 3), ConfigError);
}

TEST(CavemanTest, Communities) {
  const Graph g = GenerateConnectedCaveman(20, 20);
  EXPECT_EQ(g.num_nodes(), 400u);
  EXPECT_EQ(g.num_edges(), 3800u);
  EXPECT_EQ(g.num_classes(), 20u);
  EXPECT_EQ(std::set<int>(g.labels().begin(), g.labels().end()).size(), 20u);
  EXPECT_TRUE(Connected(g));
  // One intra-clique edge replaced by a link to the next clique.
  EXPECT_FALSE(g.HasEdge(0, 1));
  EXPECT_TRUE(g.HasEdge(0, 20));
  EXPECT_TRUE(g.HasEdge(380, 0));
}

TEST(CavemanTest, ConnectedForCliquesOfThreeOrMore) {
  for (std::size_t c = 2; c <= 6; ++c) {
    for (std::size_t s = 3; s <= 6; ++s) {
      const Graph g = GenerateConnectedCaveman(c, s);
      EXPECT_TRUE(Connected(g)) << c << "x" << s;
      const std::size_t redirects = c == 2 ? 1 : c;
      EXPECT_EQ(g.num_edges(), c * (s * (s - 1) / 2 - 1) + redirects);
    }
  }
}

TEST(CavemanTest, TwoPairs) {
  // Each K2 loses its only edge to the redirect, and both redirects join
  // nodes 0 and 2, so only one edge remains.
  const Graph g = GenerateConnectedCaveman(2, 2);
  EXPECT_EQ(g.num_nodes(), 4u);
  EXPECT_EQ(g.num_edges(), 1u);
  EXPECT_TRUE(g.HasEdge(0, 2));
}

TEST(CavemanTest, Deterministic) {
  EXPECT_EQ(GenerateConnectedCaveman(5, 7), GenerateConnectedCaveman(5, 7));
  EXPECT_THROW(GenerateConnectedCaveman(1, 5), ConfigError);
}

TEST(AdjacencyTest, SymmetricForUndirected) {
  const Graph g = GenerateConnectedCaveman(4, 5);
  const AdjacencyIndex adj(g);
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    double total = 0.0;
    NodeId prev = 0;
    bool first = true;
    for (const auto& nb : adj.neighbors(v)) {
      EXPECT_TRUE(first || nb.id > prev);
      first = false;
      prev = nb.id;
      total += nb.weight;
      const auto back = adj.neighbors(nb.id);
      EXPECT_TRUE(std::any_of(back.begin(), back.end(),
                              [v](const Neighbor& x) { return x.id == v; }));
    }
    EXPECT_DOUBLE_EQ(adj.total_weight(v), total);
  }
}

TEST(GraphTest, RejectsBadEdges) {
  EXPECT_THROW(Graph(3, {{0, 0, 1.0}}), DataError);
  EXPECT_THROW(Graph(3, {{0, 3, 1.0}}), DataError);
  EXPECT_THROW(Graph(3, {{0, 1, 0.0}}), DataError);
  EXPECT_THROW(Graph(3, {{0, 1, 1.0}, {1, 0, 1.0}}), DataError);
}

TEST(LoaderTest, PathGraph) {
  const auto loaded = LoadGraph(WriteFile("path.edges", "0 1\n1 2"));
  EXPECT_EQ(loaded.graph.num_nodes(), 3u);
  EXPECT_EQ(loaded.graph.num_edges(), 2u);
}

TEST(LoaderTest, WeightsAndComments) {
  const auto loaded = LoadGraph(WriteFile("w.edges", "# a comment\n0 1 2.5\n"));
  ASSERT_EQ(loaded.graph.num_edges(), 1u);
  EXPECT_DOUBLE_EQ(loaded.graph.edges()[0].w, 2.5);
}

TEST(LoaderTest, RemapsIdentifiers) {
  const auto loaded = LoadGraph(WriteFile("ids.edges", "10 30\n30 20\n"));
  EXPECT_EQ(loaded.graph.num_nodes(), 3u);
  EXPECT_EQ(loaded.original_ids, (std::vector<std::string>{"10", "20", "30"}));
  EXPECT_TRUE(loaded.graph.HasEdge(0, 2));
  EXPECT_TRUE(loaded.graph.HasEdge(1, 2));
}

TEST(LoaderTest, ErrorsCarryLineNumbers) {
  try {
    LoadGraph(WriteFile("bad.edges", "0 1\n1 2 heavy\n"));
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("2"), std::string::npos) << e.what();
  }
  EXPECT_THROW(LoadGraph(WriteFile("loop.edges", "0 0\n")), DataError);
  const auto edges = WriteFile("ok.edges", "0 1\n1 2\n");
  EXPECT_THROW(LoadGraph(edges, WriteFile("a.csv", "0,1.0\n1,2.0,3.0\n2,1.0\n")), DataError);
  EXPECT_THROW(LoadGraph(edges, {}, WriteFile("l.csv", "0,1\n7,0\n")), DataError);
}

TEST(LoaderTest, RoundTrip) {
  const Graph g = GenerateConnectedCaveman(20, 20);
  const fs::path dir = fs::path(::testing::TempDir()) / "roundtrip";
  const auto files = SaveGraph(g, dir, "communities");
  const auto loaded = LoadGraph(files.edges, files.attributes, files.labels);
  EXPECT_EQ(loaded.graph, g);
  std::ifstream in(files.edges, std::ios::binary);
  const std::string text((std::istreambuf_iterator<char>(in)), {});
  EXPECT_EQ(text.back(), '\n');

  const Graph attributed =
      GenerateGrid(2, 2).WithAttributes({0.5, 1, 2, 3, 4, 5, 6, 7.25}, 2);
  const auto f2 = SaveGraph(attributed, dir, "grid");
  EXPECT_EQ(LoadGraph(f2.edges, f2.attributes, f2.labels).graph, attributed);
}

}  // namespace
}  // namespace graphreach
