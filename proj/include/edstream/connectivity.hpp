#pragma once

#include <cstdint>
#include <vector>

#include "edstream/graph.hpp"

namespace eds {

// Dinic's max-flow on an undirected multigraph where every copy of an edge is
// a unit of capacity in both directions.
class UnitMaxFlow {
 public:
  explicit UnitMaxFlow(const MultiGraph& g);
  // Maximum s-t flow (= minimum number of edges separating s from t).
  int64_t max_flow(int s, int t);
  // After max_flow: vertices reachable from s in the residual graph.
  std::vector<char> source_side() const;

 private:
  struct Arc {
    int to;
    int64_t cap;
    int64_t flow;
  };
  bool bfs(int s, int t);
  int64_t dfs(int v, int t, int64_t pushed);
  void reset();

  int n_;
  std::vector<Arc> arcs_;
  std::vector<std::vector<int>> out_;
  std::vector<int> level_, iter_;
  int last_source_ = -1;
};

// lambda(u, v) for one pair; 0 when u and v are disconnected.
int64_t edge_connectivity(const MultiGraph& g, int u, int v);

// Gomory-Hu tree (Gusfield's construction): n-1 max-flow calls answer every
// pairwise connectivity query as a path minimum in the tree.
class ConnectivityTree {
 public:
  explicit ConnectivityTree(const MultiGraph& g);
  int64_t query(int u, int v) const;
  int n() const { return static_cast<int>(parent_.size()); }

 private:
  std::vector<int> parent_;
  std::vector<int64_t> weight_;
  std::vector<int> depth_;
};

}  // namespace eds
