#include "edstream/connectivity.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <string>

namespace eds {

UnitMaxFlow::UnitMaxFlow(const MultiGraph& g) : n_(g.n()), out_(g.n()), level_(g.n()), iter_(g.n()) {
  // An undirected edge of multiplicity m is one arc pair with capacity m each way.
  for (const auto& [e, m] : g.edges()) {
    out_[e.first].push_back(static_cast<int>(arcs_.size()));
    arcs_.push_back({e.second, m, 0});
    out_[e.second].push_back(static_cast<int>(arcs_.size()));
    arcs_.push_back({e.first, m, 0});
  }
}

void UnitMaxFlow::reset() {
  for (auto& a : arcs_) a.flow = 0;
}

bool UnitMaxFlow::bfs(int s, int t) {
  std::fill(level_.begin(), level_.end(), -1);
  std::queue<int> q;
  level_[s] = 0;
  q.push(s);
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int id : out_[v]) {
      const Arc& a = arcs_[id];
      if (a.cap - a.flow > 0 && level_[a.to] < 0) {
        level_[a.to] = level_[v] + 1;
        q.push(a.to);
      }
    }
  }
  return level_[t] >= 0;
}

int64_t UnitMaxFlow::dfs(int v, int t, int64_t pushed) {
  if (v == t) return pushed;
  for (int& i = iter_[v]; i < static_cast<int>(out_[v].size()); ++i) {
    int id = out_[v][i];
    Arc& a = arcs_[id];
    if (a.cap - a.flow <= 0 || level_[a.to] != level_[v] + 1) continue;
    int64_t got = dfs(a.to, t, std::min(pushed, a.cap - a.flow));
    if (got > 0) {
      a.flow += got;
      arcs_[id ^ 1].flow -= got;  // paired arc: ids 2k and 2k+1
      return got;
    }
  }
  return 0;
}

int64_t UnitMaxFlow::max_flow(int s, int t) {
  if (s < 0 || s >= n_ || t < 0 || t >= n_) throw DomainError("max-flow terminal out of range");
  if (s == t) throw DomainError("max-flow terminals must differ");
  reset();
  last_source_ = s;
  int64_t total = 0;
  while (bfs(s, t)) {
    std::fill(iter_.begin(), iter_.end(), 0);
    while (int64_t f = dfs(s, t, std::numeric_limits<int64_t>::max())) total += f;
  }
  return total;
}

std::vector<char> UnitMaxFlow::source_side() const {
  std::vector<char> seen(n_, 0);
  if (last_source_ < 0) return seen;
  std::vector<int> stack{last_source_};
  seen[last_source_] = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int id : out_[v]) {
      const Arc& a = arcs_[id];
      if (a.cap - a.flow > 0 && !seen[a.to]) {
        seen[a.to] = 1;
        stack.push_back(a.to);
      }
    }
  }
  return seen;
}

int64_t edge_connectivity(const MultiGraph& g, int u, int v) {
  if (u < 0 || u >= g.n() || v < 0 || v >= g.n()) throw DomainError("vertex out of range");
  if (u == v) throw DomainError("edge connectivity needs two distinct vertices");
  UnitMaxFlow flow(g);
  return flow.max_flow(u, v);
}

ConnectivityTree::ConnectivityTree(const MultiGraph& g)
    : parent_(g.n(), 0), weight_(g.n(), 0), depth_(g.n(), 0) {
  const int n = g.n();
  if (n == 0) return;
  UnitMaxFlow flow(g);
  // Gusfield: for each s > 0 cut against its current parent, then re-hang
  // later vertices that landed on s's side.
  for (int s = 1; s < n; ++s) {
    int t = parent_[s];
    weight_[s] = flow.max_flow(s, t);
    auto side = flow.source_side();
    for (int v = s + 1; v < n; ++v)
      if (side[v] && parent_[v] == t) parent_[v] = s;
  }
  // Vertex 0 is the root; parents always have smaller index, so one pass fills depths.
  parent_[0] = -1;
  for (int v = 1; v < n; ++v) depth_[v] = depth_[parent_[v]] + 1;
}

int64_t ConnectivityTree::query(int u, int v) const {
  if (u < 0 || u >= n() || v < 0 || v >= n()) throw DomainError("vertex out of range");
  if (u == v) throw DomainError("connectivity query needs two distinct vertices");
  int64_t best = std::numeric_limits<int64_t>::max();
  while (u != v) {
    if (depth_[u] < depth_[v]) std::swap(u, v);
    best = std::min(best, weight_[u]);
    u = parent_[u];
  }
  return best;
}

}  // namespace eds
