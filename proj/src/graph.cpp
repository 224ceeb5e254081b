#include "edstream/graph.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace eds {

// ---------------------------------------------------------------- MultiGraph

MultiGraph::MultiGraph(int n) : n_(n), adj_(n), loops_(n, 0) {
  if (n < 0) throw DomainError("negative vertex count");
}

void MultiGraph::check_vertex(int v) const {
  if (v < 0 || v >= n_)
    throw DomainError("vertex " + std::to_string(v) + " out of range [0," + std::to_string(n_) + ")");
}

void MultiGraph::add_edge(int u, int v, int64_t mult) {
  check_vertex(u);
  check_vertex(v);
  if (u == v) throw DomainError("use add_loop for self-loops");
  if (mult < 1) throw DomainError("edge multiplicity must be >= 1");
  edges_[sorted_pair(u, v)] += mult;
  adj_[u][v] += mult;
  adj_[v][u] += mult;
  num_edges_ += mult;
}

void MultiGraph::remove_edge(int u, int v, int64_t mult) {
  check_vertex(u);
  check_vertex(v);
  auto it = edges_.find(sorted_pair(u, v));
  if (it == edges_.end() || it->second < mult)
    throw DomainError("removing absent edge " + std::to_string(u) + "-" + std::to_string(v));
  it->second -= mult;
  num_edges_ -= mult;
  if (it->second == 0) {
    edges_.erase(it);
    adj_[u].erase(v);
    adj_[v].erase(u);
  } else {
    adj_[u][v] -= mult;
    adj_[v][u] -= mult;
  }
}

void MultiGraph::add_loop(int v, int64_t count) {
  check_vertex(v);
  if (count < 0) throw DomainError("negative loop count");
  loops_[v] += count;
}

int64_t MultiGraph::multiplicity(int u, int v) const {
  check_vertex(u);
  check_vertex(v);
  auto it = edges_.find(sorted_pair(u, v));
  return it == edges_.end() ? 0 : it->second;
}

int64_t MultiGraph::degree(int v) const {
  check_vertex(v);
  int64_t d = loops_[v];
  for (const auto& [w, m] : adj_[v]) d += m;
  return d;
}

int64_t MultiGraph::volume() const {
  int64_t total = 2 * num_edges_;
  for (int64_t l : loops_) total += l;
  return total;
}

WeightedGraph MultiGraph::to_weighted() const {
  WeightedGraph w(n_);
  for (const auto& [e, m] : edges_) w.add_edge(e.first, e.second, static_cast<double>(m));
  for (int v = 0; v < n_; ++v)
    if (loops_[v] > 0) w.add_loop(v, static_cast<double>(loops_[v]));
  return w;
}

// ------------------------------------------------------------- WeightedGraph

WeightedGraph::WeightedGraph(int n) : n_(n), adj_(n), loops_(n, 0.0) {
  if (n < 0) throw DomainError("negative vertex count");
}

void WeightedGraph::check_vertex(int v) const {
  if (v < 0 || v >= n_)
    throw DomainError("vertex " + std::to_string(v) + " out of range [0," + std::to_string(n_) + ")");
}

void WeightedGraph::add_edge(int u, int v, double w) {
  check_vertex(u);
  check_vertex(v);
  if (u == v) throw DomainError("use add_loop for self-loops");
  if (!std::isfinite(w) || w < 0) throw DomainError("edge weight must be finite and non-negative");
  if (w == 0) return;
  edges_[sorted_pair(u, v)] += w;
  adj_[u][v] += w;
  adj_[v][u] += w;
}

void WeightedGraph::add_loop(int v, double w) {
  check_vertex(v);
  if (!std::isfinite(w) || w < 0) throw DomainError("loop weight must be finite and non-negative");
  loops_[v] += w;
}

double WeightedGraph::weight(int u, int v) const {
  check_vertex(u);
  check_vertex(v);
  auto it = edges_.find(sorted_pair(u, v));
  return it == edges_.end() ? 0.0 : it->second;
}

double WeightedGraph::degree(int v) const {
  check_vertex(v);
  double d = loops_[v];
  for (const auto& [w, x] : adj_[v]) d += x;
  return d;
}

double WeightedGraph::volume() const {
  double total = 0;
  for (int v = 0; v < n_; ++v) total += degree(v);
  return total;
}

double WeightedGraph::total_edge_weight() const {
  double total = 0;
  for (const auto& [e, w] : edges_) total += w;
  return total;
}

// ---------------------------------------------------------------- utilities

namespace {

template <class G>
std::vector<Cluster> components_impl(const G& g) {
  std::vector<int> comp(g.n(), -1);
  std::vector<Cluster> out;
  for (int s = 0; s < g.n(); ++s) {
    if (comp[s] >= 0) continue;
    int id = static_cast<int>(out.size());
    out.emplace_back();
    std::vector<int> stack{s};
    comp[s] = id;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      out[id].push_back(v);
      for (const auto& [w, x] : g.adj(v)) {
        if (comp[w] < 0) {
          comp[w] = id;
          stack.push_back(w);
        }
      }
    }
    normalize_cluster(out[id]);
  }
  return out;
}

}  // namespace

std::vector<Cluster> connected_components(const WeightedGraph& g) { return components_impl(g); }
std::vector<Cluster> connected_components(const MultiGraph& g) { return components_impl(g); }

MultiGraph induced_subgraph(const MultiGraph& g, const Cluster& c) {
  std::vector<int> local(g.n(), -1);
  for (size_t i = 0; i < c.size(); ++i) local.at(c[i]) = static_cast<int>(i);
  MultiGraph h(static_cast<int>(c.size()));
  for (size_t i = 0; i < c.size(); ++i) {
    int v = c[i];
    if (g.loops(v) > 0) h.add_loop(static_cast<int>(i), g.loops(v));
    for (const auto& [w, m] : g.adj(v))
      if (local[w] > static_cast<int>(i)) h.add_edge(static_cast<int>(i), local[w], m);
  }
  return h;
}

}  // namespace eds
