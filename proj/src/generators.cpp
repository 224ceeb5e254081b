#include "edstream/generators.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>

namespace eds {

MultiGraph erdos_renyi(int n, double p, std::mt19937_64& rng) {
  if (p < 0 || p > 1) throw ParameterError("edge probability must lie in [0,1]");
  MultiGraph g(n);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (coin(rng) < p) g.add_edge(u, v);
  return g;
}

MultiGraph complete_graph(int n) {
  MultiGraph g(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) g.add_edge(u, v);
  return g;
}

MultiGraph path_graph(int n) {
  MultiGraph g(n);
  for (int v = 0; v + 1 < n; ++v) g.add_edge(v, v + 1);
  return g;
}

MultiGraph cycle_graph(int n) {
  MultiGraph g = path_graph(n);
  if (n >= 3) g.add_edge(n - 1, 0);
  return g;
}

MultiGraph star_graph(int leaves) {
  MultiGraph g(leaves + 1);
  for (int v = 1; v <= leaves; ++v) g.add_edge(0, v);
  return g;
}

MultiGraph disjoint_union(const MultiGraph& a, const MultiGraph& b) {
  MultiGraph g(a.n() + b.n());
  for (const auto& [e, m] : a.edges()) g.add_edge(e.first, e.second, m);
  for (const auto& [e, m] : b.edges()) g.add_edge(e.first + a.n(), e.second + a.n(), m);
  for (int v = 0; v < a.n(); ++v)
    if (a.loops(v)) g.add_loop(v, a.loops(v));
  for (int v = 0; v < b.n(); ++v)
    if (b.loops(v)) g.add_loop(v + a.n(), b.loops(v));
  return g;
}

MultiGraph random_regular(int n, int d, std::mt19937_64& rng, int max_attempts) {
  if (d < 0 || d >= n) throw ParameterError("regular degree must satisfy 0 <= d < n");
  if ((static_cast<int64_t>(n) * d) % 2 != 0) throw ParameterError("n*d must be even for a d-regular graph");
  std::vector<int> stubs;
  stubs.reserve(static_cast<size_t>(n) * d);
  for (int v = 0; v < n; ++v)
    for (int i = 0; i < d; ++i) stubs.push_back(v);
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    std::shuffle(stubs.begin(), stubs.end(), rng);
    std::set<VertexPair> seen;
    bool ok = true;
    for (size_t i = 0; i + 1 < stubs.size(); i += 2) {
      int u = stubs[i], v = stubs[i + 1];
      if (u == v || !seen.insert(sorted_pair(u, v)).second) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    MultiGraph g(n);
    for (const auto& e : seen) g.add_edge(e.first, e.second);
    return g;
  }
  throw Error("random regular graph generation failed after " + std::to_string(max_attempts) + " attempts");
}

std::vector<MultiGraph> connected_graphs_up_to_iso(int k) {
  if (k < 1 || k > 7) throw ParameterError("isomorphism enumeration supports 1..7 vertices");
  std::vector<VertexPair> pairs;
  for (int u = 0; u < k; ++u)
    for (int v = u + 1; v < k; ++v) pairs.push_back({u, v});
  std::vector<std::vector<int>> pair_index(k, std::vector<int>(k, -1));
  for (size_t i = 0; i < pairs.size(); ++i) {
    pair_index[pairs[i].first][pairs[i].second] = static_cast<int>(i);
    pair_index[pairs[i].second][pairs[i].first] = static_cast<int>(i);
  }
  std::vector<std::vector<int>> perms;
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  do perms.push_back(perm);
  while (std::next_permutation(perm.begin(), perm.end()));

  auto connected = [&](uint32_t mask) {
    std::vector<char> seen(k, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w = 0; w < k; ++w) {
        if (w == v || seen[w] || !((mask >> pair_index[v][w]) & 1u)) continue;
        seen[w] = 1;
        ++count;
        stack.push_back(w);
      }
    }
    return count == k;
  };

  std::set<uint32_t> canon_seen;
  std::vector<MultiGraph> out;
  const uint32_t total = uint32_t{1} << pairs.size();
  for (uint32_t mask = 0; mask < total; ++mask) {
    if (!connected(mask)) continue;
    uint32_t canon = UINT32_MAX;
    for (const auto& p : perms) {
      uint32_t m2 = 0;
      for (size_t i = 0; i < pairs.size(); ++i)
        if ((mask >> i) & 1u) m2 |= uint32_t{1} << pair_index[p[pairs[i].first]][p[pairs[i].second]];
      canon = std::min(canon, m2);
    }
    if (!canon_seen.insert(canon).second) continue;
    MultiGraph g(k);
    for (size_t i = 0; i < pairs.size(); ++i)
      if ((mask >> i) & 1u) g.add_edge(pairs[i].first, pairs[i].second);
    out.push_back(std::move(g));
  }
  return out;
}

namespace {

MultiGraph cliques(std::initializer_list<int> sizes) {
  MultiGraph g(0);
  for (int s : sizes) g = disjoint_union(g, complete_graph(s));
  return g;
}

// Cliques of the given sizes, consecutive cliques joined by `links` edges.
MultiGraph clique_chain(std::initializer_list<int> sizes, int links, bool close_ring = false) {
  MultiGraph g(0);
  std::vector<int> starts;
  for (int s : sizes) {
    starts.push_back(g.n());
    g = disjoint_union(g, complete_graph(s));
  }
  std::vector<int> sz(sizes);
  size_t count = sz.size();
  size_t bridges = close_ring ? count : count - 1;
  for (size_t i = 0; i < bridges; ++i) {
    size_t j = (i + 1) % count;
    for (int l = 0; l < links; ++l) g.add_edge(starts[i] + sz[i] - 1 - l, starts[j] + l);
  }
  return g;
}

// Core graph plus pendant cliques, each attached to a distinct core vertex by one edge.
MultiGraph with_pendants(const MultiGraph& core, std::initializer_list<int> blob_sizes) {
  MultiGraph g = core;
  int attach = 0;
  for (int s : blob_sizes) {
    int start = g.n();
    g = disjoint_union(g, complete_graph(s));
    g.add_edge(attach, start);
    attach += 1;
  }
  return g;
}

}  // namespace

std::vector<NamedGraph> structured_battery() {
  std::vector<NamedGraph> out;
  out.push_back({"cliques_5x2", cliques({5, 5})});
  out.push_back({"cliques_6x3", cliques({6, 6, 6})});
  out.push_back({"cliques_8x2", cliques({8, 8})});
  out.push_back({"cliques_4x4", cliques({4, 4, 4, 4})});
  out.push_back({"cliques_5_7_9", cliques({5, 7, 9})});
  out.push_back({"cliques_8x6", cliques({8, 8, 8, 8, 8, 8})});
  out.push_back({"barbell_8_8", clique_chain({8, 8}, 1)});
  out.push_back({"barbell_10_10", clique_chain({10, 10}, 1)});
  out.push_back({"barbell_12_12", clique_chain({12, 12}, 1)});
  out.push_back({"barbell_6_9_double", clique_chain({6, 9}, 2)});
  out.push_back({"barbell_24_24", clique_chain({24, 24}, 1)});
  out.push_back({"chain_8x3", clique_chain({8, 8, 8}, 1)});
  out.push_back({"ring_6x4", clique_chain({6, 6, 6, 6}, 1, true)});
  out.push_back({"barbells_5_5_and_6_6", disjoint_union(clique_chain({5, 5}, 1), clique_chain({6, 6}, 1))});
  out.push_back({"pendant_k12_k4", with_pendants(complete_graph(12), {4})});
  out.push_back({"pendant_k16_k3x2", with_pendants(complete_graph(16), {3, 3})});
  out.push_back({"pendant_k20_k4", with_pendants(complete_graph(20), {4})});
  out.push_back({"pendant_k6_k4x4", with_pendants(complete_graph(6), {4, 4, 4, 4})});
  out.push_back({"pendant_k10_leaves", with_pendants(complete_graph(10), {1, 1, 1})});
  {
    std::mt19937_64 rng = make_rng(seed_from_u64(20240607));
    MultiGraph core = random_regular(24, 4, rng);
    out.push_back({"pendant_regular24_k5", with_pendants(core, {5})});
  }
  return out;
}

}  // namespace eds
