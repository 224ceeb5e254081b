#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "edstream/common.hpp"
#include "edstream/graph.hpp"

namespace eds {

namespace detail {

// Membership mask over [0, n) for a cluster; throws DomainError on bad ids.
std::vector<char> membership(int n, const Cluster& c, const char* what);
void require_subset(const std::vector<char>& outer, const Cluster& inner, const char* what);

}  // namespace detail

// Total weight of edges with one endpoint in S and the other in U \ S.
template <class G>
double cut_local(const G& g, const Cluster& U, const Cluster& S) {
  auto in_u = detail::membership(g.n(), U, "cluster");
  auto in_s = detail::membership(g.n(), S, "cut");
  detail::require_subset(in_u, S, "cut");
  double total = 0;
  for (int v : S)
    for (const auto& [w, x] : g.adj(v))
      if (in_u[w] && !in_s[w]) total += static_cast<double>(x);
  return total;
}

// Total weight of edges from S to vertices outside U.
template <class G>
double border(const G& g, const Cluster& U, const Cluster& S) {
  auto in_u = detail::membership(g.n(), U, "cluster");
  detail::require_subset(in_u, S, "cut");
  double total = 0;
  for (int v : S)
    for (const auto& [w, x] : g.adj(v))
      if (!in_u[w]) total += static_cast<double>(x);
  return total;
}

// Total weight of edges leaving S in the whole graph.
template <class G>
double cut_global(const G& g, const Cluster& S) {
  auto in_s = detail::membership(g.n(), S, "cut");
  double total = 0;
  for (int v : S)
    for (const auto& [w, x] : g.adj(v))
      if (!in_s[w]) total += static_cast<double>(x);
  return total;
}

// Sum of degrees (self-loops included) over S.
template <class G>
double vol(const G& g, const Cluster& S) {
  detail::membership(g.n(), S, "vertex set");
  double total = 0;
  for (int v : S) total += static_cast<double>(g.degree(v));
  return total;
}

struct Sparsity {
  double value = std::numeric_limits<double>::infinity();
  double cut = 0;
  double min_vol = 0;
  // Set when the smaller side has zero volume; value is then +infinity.
  bool degenerate = false;
};

Sparsity make_sparsity(double cut, double vol_s, double vol_rest);

// The tau-boundary-linked subgraph G[U]^tau: the induced subgraph on U where
// every vertex additionally carries tau self-loops per edge leaving U. The
// view keeps a pointer to `base`, which must outlive it.
class BoundaryLinkedView {
 public:
  BoundaryLinkedView(const WeightedGraph& base, Cluster cluster, double tau);

  const WeightedGraph& base() const { return *base_; }
  const Cluster& cluster() const { return cluster_; }
  double tau() const { return tau_; }

  double cut(const Cluster& S) const;
  double border(const Cluster& S) const;
  // vol(S) + (tau - 1) * border(S, U); loops already present in the base count as-is.
  double vol(const Cluster& S) const;
  double total_volume() const;
  Sparsity sparsity(const Cluster& S) const;

  // Explicit weighted graph on 0..|U|-1 (cluster order) with the boundary
  // mass turned into loop weight.
  WeightedGraph materialize() const;

 private:
  const WeightedGraph* base_;
  Cluster cluster_;
  double tau_;
  std::vector<char> in_u_;
};

// Sparsity of S inside U (= V when U is omitted), plain volumes.
template <class G>
Sparsity sparsity(const G& g, const Cluster& U, const Cluster& S) {
  double c = cut_local(g, U, S);
  double vs = vol(g, S);
  double vu = vol(g, U);
  return make_sparsity(c, vs, vu - vs);
}

template <class G>
Sparsity sparsity(const G& g, const Cluster& S) {
  return sparsity(g, range_cluster(g.n()), S);
}

// Dense copy of a small weighted graph, used by the exhaustive enumerators.
struct DenseGraph {
  int m = 0;
  std::vector<double> w;    // m*m symmetric weights, zero diagonal
  std::vector<double> deg;  // weighted degree including loops

  static DenseGraph from(const WeightedGraph& g);
  double weight(int x, int y) const { return w[static_cast<size_t>(x) * m + y]; }
};

// Walks subsets of the vertices of `d` in Gray-code order, calling
// fn(mask, cut, vol_s) for each one. With include_last=false vertex m-1 is
// kept outside S, so every cut is seen once up to complement; the empty set
// is skipped in either mode, the full set is visited only with include_last.
template <class F>
void enumerate_cuts(const DenseGraph& d, bool include_last, F&& fn) {
  const int bits = include_last ? d.m : d.m - 1;
  if (bits <= 0) return;
  const uint64_t total = uint64_t{1} << bits;
  uint64_t mask = 0;
  double cut = 0, vol_s = 0;
  for (uint64_t i = 1; i < total; ++i) {
    int x = __builtin_ctzll(i);
    const bool was_in = (mask >> x) & 1u;
    const double* row = &d.w[static_cast<size_t>(x) * d.m];
    double delta = 0;
    for (int y = 0; y < d.m; ++y) {
      if (y == x || row[y] == 0) continue;
      const bool y_in = (mask >> y) & 1u;
      delta += (y_in == was_in) ? row[y] : -row[y];
    }
    cut += delta;
    mask ^= uint64_t{1} << x;
    vol_s += was_in ? -d.deg[x] : d.deg[x];
    fn(mask, cut, vol_s);
  }
}

Cluster mask_to_cluster(uint64_t mask, int m);

struct MinSparsity {
  double value = std::numeric_limits<double>::infinity();
  double cut = 0;
  double min_vol = 0;
  Cluster witness;  // the smaller-volume side of a minimiser (empty if none)
  bool degenerate = false;  // every proper cut had a zero-volume side
};

// Exact minimum sparsity over all proper cuts. Ties are broken by larger
// min-side volume, then by the lexicographically smallest witness.
MinSparsity min_sparsity_bruteforce(const WeightedGraph& g, int cap = kBruteForceCap);
// Same on a boundary-linked view; witness reported in base vertex ids.
MinSparsity min_sparsity_bruteforce(const BoundaryLinkedView& view, int cap = kBruteForceCap);

// Returns the side of (S, rest) with smaller volume; equal volumes pick the
// lexicographically smaller vertex list.
Cluster smaller_side(const Cluster& s, const Cluster& rest, double vol_s, double vol_rest);

}  // namespace eds
