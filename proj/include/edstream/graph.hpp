#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "edstream/common.hpp"

namespace eds {

using VertexPair = std::pair<int, int>;

inline VertexPair sorted_pair(int u, int v) { return u < v ? VertexPair{u, v} : VertexPair{v, u}; }

class WeightedGraph;

// Unweighted multigraph with per-vertex self-loop counts. A self-loop adds 1
// to its vertex's degree (and hence volume), not 2.
class MultiGraph {
 public:
  MultiGraph() = default;
  explicit MultiGraph(int n);

  int n() const { return n_; }
  void add_edge(int u, int v, int64_t mult = 1);
  // Removes `mult` copies; throws DomainError if fewer are present.
  void remove_edge(int u, int v, int64_t mult = 1);
  void add_loop(int v, int64_t count = 1);

  int64_t multiplicity(int u, int v) const;
  int64_t loops(int v) const { return loops_.at(v); }
  const std::vector<int64_t>& loop_counts() const { return loops_; }
  const std::map<VertexPair, int64_t>& edges() const { return edges_; }
  const std::map<int, int64_t>& adj(int v) const { return adj_.at(v); }

  int64_t degree(int v) const;
  // Sum of edge multiplicities, self-loops excluded.
  int64_t num_edges() const { return num_edges_; }
  int64_t volume() const;

  WeightedGraph to_weighted() const;
  bool operator==(const MultiGraph& o) const {
    return n_ == o.n_ && edges_ == o.edges_ && loops_ == o.loops_;
  }

 private:
  void check_vertex(int v) const;
  int n_ = 0;
  std::map<VertexPair, int64_t> edges_;
  std::vector<std::map<int, int64_t>> adj_;
  std::vector<int64_t> loops_;
  int64_t num_edges_ = 0;
};

// Weighted graph with weighted self-loops. Zero weight means absent.
class WeightedGraph {
 public:
  WeightedGraph() = default;
  explicit WeightedGraph(int n);

  int n() const { return n_; }
  // Accumulates onto any existing weight.
  void add_edge(int u, int v, double w);
  void add_loop(int v, double w);

  double weight(int u, int v) const;
  double loop(int v) const { return loops_.at(v); }
  const std::vector<double>& loop_weights() const { return loops_; }
  const std::map<VertexPair, double>& edges() const { return edges_; }
  const std::map<int, double>& adj(int v) const { return adj_.at(v); }

  double degree(int v) const;
  double volume() const;
  double total_edge_weight() const;

  bool operator==(const WeightedGraph& o) const {
    return n_ == o.n_ && edges_ == o.edges_ && loops_ == o.loops_;
  }

 private:
  void check_vertex(int v) const;
  int n_ = 0;
  std::map<VertexPair, double> edges_;
  std::vector<std::map<int, double>> adj_;
  std::vector<double> loops_;
};

// Connected components (vertex lists, each sorted, ordered by smallest vertex).
std::vector<Cluster> connected_components(const WeightedGraph& g);
std::vector<Cluster> connected_components(const MultiGraph& g);

// Subgraph induced on `c`, relabelled to 0..|c|-1 in cluster order.
MultiGraph induced_subgraph(const MultiGraph& g, const Cluster& c);

}  // namespace eds
