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

#include "graphreach/anchors.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <numeric>
#include <queue>
#include <random>
#include <sstream>

namespace graphreach {

BipartiteReach::BipartiteReach(std::vector<std::vector<NodeId>> reach,
                               std::size_t num_right)
    : reach_(std::move(reach)),
      num_right_(num_right == 0 ? reach_.size() : num_right) {
  for (auto& r : reach_) {
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    if (!r.empty() && r.back() >= num_right_) {
      throw ConfigError("bipartite edge to right node outside [0, num_right)");
    }
  }
}

std::size_t BipartiteReach::Coverage(std::span<const NodeId> left_nodes) const {
  std::vector<bool> covered(num_right_, false);
  std::size_t total = 0;
  for (NodeId u : left_nodes) {
    for (NodeId v : reach_[u]) {
      if (!covered[v]) {
        covered[v] = true;
        ++total;
      }
    }
  }
  return total;
}

BipartiteReach BuildBipartite(const WalkSet& walks,
                              const std::function<bool(NodeId, std::size_t)>& keep) {
  const std::size_t n = walks.num_nodes();
  std::vector<std::vector<NodeId>> reach(n);
  // Sources are visited in increasing order, so each reach list stays sorted
  // and `last` suffices for deduplication.
  std::vector<NodeId> last(n, static_cast<NodeId>(n));
  for (NodeId v = 0; v < n; ++v) {
    for (std::size_t k = 0; k < walks.num_walks(); ++k) {
      if (keep && !keep(v, k)) continue;
      for (NodeId u : walks.trace(v, k)) {
        if (last[u] != v) {
          last[u] = v;
          reach[u].push_back(v);
        }
      }
    }
  }
  return BipartiteReach(std::move(reach), n);
}

std::string ToString(AnchorStrategy strategy) {
  switch (strategy) {
    case AnchorStrategy::kGreedy:
      return "greedy";
    case AnchorStrategy::kFrequency:
      return "frequency";
    case AnchorStrategy::kRandom:
      return "random";
  }
  return "unknown";
}

AnchorStrategy ParseAnchorStrategy(const std::string& name) {
  if (name == "greedy") return AnchorStrategy::kGreedy;
  if (name == "frequency") return AnchorStrategy::kFrequency;
  if (name == "random") return AnchorStrategy::kRandom;
  throw ConfigError("unknown anchor strategy '" + name +
                    "' (expected greedy, frequency or random)");
}

AnchorSet GreedySelect(const BipartiteReach& bipartite, std::size_t k) {
  if (k < 1) throw ConfigError("anchor count must be >= 1");
  const std::size_t n = bipartite.num_left();
  k = std::min(k, n);

  struct Entry {
    std::size_t gain;
    NodeId id;
    // Max-heap on gain, then on lower id.
    bool operator<(const Entry& o) const {
      return gain != o.gain ? gain < o.gain : id > o.id;
    }
  };
  std::priority_queue<Entry> heap;
  for (NodeId u = 0; u < n; ++u) heap.push({bipartite.reach(u).size(), u});

  std::vector<bool> covered(bipartite.num_right(), false);
  auto marginal = [&](NodeId u) {
    std::size_t g = 0;
    for (NodeId v : bipartite.reach(u)) g += covered[v] ? 0 : 1;
    return g;
  };

  std::vector<bool> chosen(n, false);
  std::size_t covered_count = 0;
  // Once every reachable right node is covered all gains are zero. The
  // remaining picks then start a fresh covering round on the unchosen nodes.
  auto start_new_round = [&] {
    bool any = false;
    for (NodeId u = 0; u < n && !any; ++u) any = !chosen[u] && !bipartite.reach(u).empty();
    if (!any) return false;
    std::fill(covered.begin(), covered.end(), false);
    covered_count = 0;
    heap = {};
    for (NodeId u = 0; u < n; ++u) {
      if (!chosen[u]) heap.push({bipartite.reach(u).size(), u});
    }
    return true;
  };

  AnchorSet out;
  out.provenance = AnchorStrategy::kGreedy;
  while (out.ids.size() < k) {
    Entry top = heap.top();
    heap.pop();
    top.gain = marginal(top.id);
    // Stale gains are upper bounds, so a refreshed entry that still beats the
    // next stale entry (gain, then id) is the exact argmax.
    if (heap.empty() || !(top < heap.top())) {
      if (top.gain == 0 && covered_count > 0 && start_new_round()) continue;
      out.ids.push_back(top.id);
      chosen[top.id] = true;
      for (NodeId v : bipartite.reach(top.id)) {
        if (!covered[v]) ++covered_count;
        covered[v] = true;
      }
    } else {
      heap.push(top);
    }
  }
  return out;
}

AnchorSet FrequencySelect(const WalkSet& walks, std::size_t k,
                          const FrequencyOptions& options) {
  if (!(options.sample_fraction > 0.0) || options.sample_fraction > 1.0) {
    throw ConfigError("sample fraction must be in (0, 1]");
  }
  if (options.rounds < 1) throw ConfigError("frequency selection needs >= 1 round");
  if (k < 1) throw ConfigError("anchor count must be >= 1");
  const std::size_t n = walks.num_nodes();
  const std::size_t nw = walks.num_walks();
  k = std::min(k, n);
  const std::size_t per_source = std::min<std::size_t>(
      nw, static_cast<std::size_t>(
              std::ceil(options.sample_fraction * static_cast<double>(nw) - 1e-9)));

  std::vector<AnchorSet> picks(options.rounds);
  ParallelFor(options.rounds, options.threads, [&](std::size_t round) {
    // Per-source partial Fisher-Yates over walk indices.
    std::vector<std::vector<bool>> kept(n, std::vector<bool>(nw, false));
    std::vector<std::size_t> order(nw);
    for (NodeId v = 0; v < n; ++v) {
      std::mt19937_64 rng(DeriveSeed(options.seed, "frequency", round * n + v));
      std::iota(order.begin(), order.end(), 0);
      for (std::size_t i = 0; i < per_source; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, nw - 1);
        std::swap(order[i], order[pick(rng)]);
        kept[v][order[i]] = true;
      }
    }
    const auto bip = BuildBipartite(
        walks, [&kept](NodeId v, std::size_t w) { return static_cast<bool>(kept[v][w]); });
    picks[round] = GreedySelect(bip, k);
  });

  std::vector<std::size_t> freq(n, 0);
  for (const auto& p : picks) {
    for (NodeId u : p.ids) ++freq[u];
  }

  const auto full = BuildBipartite(walks);
  std::vector<bool> covered(n, false), chosen(n, false);
  AnchorSet out;
  out.provenance = AnchorStrategy::kFrequency;
  while (out.ids.size() < k) {
    NodeId best = 0;
    std::size_t best_freq = 0, best_gain = 0;
    bool have = false;
    for (NodeId u = 0; u < n; ++u) {
      if (chosen[u]) continue;
      std::size_t gain = 0;
      for (NodeId v : full.reach(u)) gain += covered[v] ? 0 : 1;
      if (!have || freq[u] > best_freq ||
          (freq[u] == best_freq && gain > best_gain)) {
        best = u;
        best_freq = freq[u];
        best_gain = gain;
        have = true;
      }
    }
    chosen[best] = true;
    for (NodeId v : full.reach(best)) covered[v] = true;
    out.ids.push_back(best);
  }
  std::sort(out.ids.begin(), out.ids.end());
  return out;
}

AnchorSet RandomSelect(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k > n) {
    throw ConfigError("cannot pick " + std::to_string(k) + " anchors from " +
                      std::to_string(n) + " nodes");
  }
  std::vector<NodeId> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  std::mt19937_64 rng(DeriveSeed(seed, "random-anchors"));
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(ids[i], ids[pick(rng)]);
  }
  ids.resize(k);
  std::sort(ids.begin(), ids.end());
  return {std::move(ids), AnchorStrategy::kRandom};
}

ExactSelection BruteForceSelect(const BipartiteReach& bipartite, std::size_t k) {
  const std::size_t n = bipartite.num_left();
  if (k < 1) throw ConfigError("anchor count must be >= 1");
  k = std::min(k, n);
  // C(n, k) with an early exit past the guard.
  double combos = 1.0;
  for (std::size_t i = 0; i < k; ++i) {
    combos = combos * static_cast<double>(n - i) / static_cast<double>(i + 1);
    if (combos > 1e6) throw ConfigError("brute-force instance exceeds 1e6 subsets");
  }

  const std::size_t words = (bipartite.num_right() + 63) / 64;
  std::vector<std::vector<std::uint64_t>> masks(n, std::vector<std::uint64_t>(words, 0));
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v : bipartite.reach(u)) masks[u][v / 64] |= 1ULL << (v % 64);
  }

  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  ExactSelection best;
  bool first = true;
  std::vector<std::uint64_t> acc(words);
  while (true) {
    std::fill(acc.begin(), acc.end(), 0);
    for (std::size_t i : idx) {
      for (std::size_t w = 0; w < words; ++w) acc[w] |= masks[i][w];
    }
    std::size_t cov = 0;
    for (auto w : acc) cov += static_cast<std::size_t>(std::popcount(w));
    if (first || cov > best.coverage) {
      best.coverage = cov;
      best.anchors.ids.assign(idx.begin(), idx.end());
      first = false;
    }
    // Next combination in lexicographic order.
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  best.anchors.provenance = AnchorStrategy::kGreedy;
  return best;
}

std::size_t DefaultAnchorCount(std::size_t n) {
  if (n <= 1) return 1;
  const double l = std::log(static_cast<double>(n));
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(l * l)));
}

std::size_t ResolveAnchorCount(const std::string& spec, std::size_t n) {
  if (n == 0) throw ConfigError("graph has no nodes");
  std::size_t k = 0;
  if (spec.empty() || spec == "log2n") {
    k = DefaultAnchorCount(n);
  } else if (spec.back() == '%') {
    char* end = nullptr;
    const std::string body = spec.substr(0, spec.size() - 1);
    const double pct = std::strtod(body.c_str(), &end);
    if (end != body.c_str() + body.size() || !(pct > 0.0) || pct > 100.0) {
      throw ConfigError("bad anchor percentage '" + spec + "'");
    }
    k = static_cast<std::size_t>(std::ceil(pct / 100.0 * static_cast<double>(n) - 1e-9));
  } else {
    char* end = nullptr;
    const long long v = std::strtoll(spec.c_str(), &end, 10);
    if (end != spec.c_str() + spec.size() || v < 1) {
      throw ConfigError("bad anchor count '" + spec +
                        "' (expected log2n, a positive integer or a percentage)");
    }
    k = static_cast<std::size_t>(v);
  }
  return std::clamp<std::size_t>(k, 1, n);
}

void SaveAnchors(const AnchorSet& anchors, const AnchorFileHeader& header,
                 const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << "# graphreach anchors provenance=" << ToString(header.provenance)
      << " k=" << anchors.size() << " seed=" << header.seed
      << " config_hash=" << HexDigest(header.config_hash) << "\n";
  for (NodeId id : anchors.ids) out << id << "\n";
}

AnchorSet LoadAnchors(const std::filesystem::path& path, AnchorFileHeader* header) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  AnchorSet out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream fields(line.substr(1));
      std::string f;
      while (fields >> f) {
        const auto eq = f.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = f.substr(0, eq), value = f.substr(eq + 1);
        if (key == "provenance") {
          out.provenance = ParseAnchorStrategy(value);
          if (header) header->provenance = out.provenance;
        } else if (header && key == "seed") {
          header->seed = std::stoull(value);
        } else if (header && key == "config_hash") {
          header->config_hash = std::stoull(value, nullptr, 16);
        }
      }
      continue;
    }
    char* end = nullptr;
    const long long v = std::strtoll(line.c_str(), &end, 10);
    if (end == line.c_str() || v < 0) {
      throw DataError(path.string() + ":" + std::to_string(lineno) + ": bad anchor id");
    }
    out.ids.push_back(static_cast<NodeId>(v));
  }
  std::vector<NodeId> sorted = out.ids;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw DataError(path.string() + ": duplicate anchor id");
  }
  return out;
}

}  // namespace graphreach
