#include "edstream/bscw.hpp"

#include <algorithm>
#include <cmath>

#include "edstream/spectral.hpp"

namespace eds {

// --------------------------------------------------------------- brute force

Bscw brute_force_bsca(const WeightedGraph& h, double psi, int cap) {
  if (!(psi > 0 && psi < 1)) throw ParameterError("sparsity parameter psi must lie in (0,1)");
  if (h.n() > cap)
    throw SizeError("brute-force BSCA over " + std::to_string(h.n()) + " vertices exceeds cap " +
                    std::to_string(cap));
  if (h.n() < 2) return Bscw::none("single vertex: no proper cut");
  const DenseGraph d = DenseGraph::from(h);
  const double total = h.volume();
  if (!(total > 0)) return Bscw::none("degenerate: zero total volume, sparsity undefined");
  const Cluster all = range_cluster(h.n());

  bool found = false;
  double best_mv = 0;
  Cluster best;
  enumerate_cuts(d, false, [&](uint64_t mask, double cut, double vol_s) {
    double vol_rest = total - vol_s;
    double mv = std::min(vol_s, vol_rest);
    if (!is_sparse(cut, mv, psi)) return;
    if (found && mv < best_mv && !approx_equal(mv, best_mv)) return;
    Cluster s = mask_to_cluster(mask, d.m);
    Cluster side = smaller_side(s, complement_in(all, s), vol_s, vol_rest);
    if (found && approx_equal(mv, best_mv) && !(side < best)) return;
    found = true;
    best_mv = mv;
    best = std::move(side);
  });
  if (!found) return Bscw::none();
  return Bscw::cut(best, vol(h, best));
}

// --------------------------------------------------------------- self-loops

Delooped deloop(const WeightedGraph& g) {
  Delooped d;
  d.original_n = g.n();
  d.companion.assign(g.n(), -1);
  int next = g.n();
  for (int u = 0; u < g.n(); ++u)
    if (g.loop(u) > 0) d.companion[u] = next++;
  d.graph = WeightedGraph(next);
  for (const auto& [e, w] : g.edges()) d.graph.add_edge(e.first, e.second, w);
  for (int u = 0; u < g.n(); ++u)
    if (d.companion[u] >= 0) d.graph.add_edge(u, d.companion[u], g.loop(u) / 2);
  return d;
}

Cluster lift(const Delooped& d, const Cluster& X) {
  Cluster out = X;
  for (int u : X)
    if (d.companion.at(u) >= 0) out.push_back(d.companion[u]);
  normalize_cluster(out);
  return out;
}

Bscw selfloop_bsca(const WeightedGraph& g, double psi, const Bsca& inner) {
  if (!(psi > 0 && psi < 1)) throw ParameterError("sparsity parameter psi must lie in (0,1)");
  if (psi > 1.0 / (10.0 * inner.alpha()) * (1 + kRelTol))
    throw ParameterError("self-loop reduction needs psi <= 1/(10 alpha) = " +
                         std::to_string(1.0 / (10.0 * inner.alpha())));
  Delooped d = deloop(g);
  Bscw w = inner.run(d.graph, psi);
  if (w.bottom) return w;
  Cluster X;
  for (int v : w.R)
    if (v < d.original_n) X.push_back(v);
  if (X.empty())
    throw TheoryViolation("self-loop reduction: inner cut consists of companion vertices only");
  if (static_cast<int>(X.size()) == d.original_n)
    throw TheoryViolation("self-loop reduction: inner cut covers every original vertex");
  Cluster rest = complement_in(range_cluster(g.n()), X);
  double vx = vol(g, X), vr = vol(g, rest);
  Cluster star = smaller_side(X, rest, vx, vr);
  return Bscw::cut(star, std::min(vx, vr));
}

// --------------------------------------------------------------- iterative

Bscw iterative_bsca(const WeightedGraph& g, double psi, double apx) {
  if (!(psi > 0 && psi < 1)) throw ParameterError("sparsity parameter psi must lie in (0,1)");
  if (!(apx >= 1)) throw ParameterError("approximation factor must be >= 1");
  const double total = g.volume();
  if (g.n() < 2) return Bscw::none("single vertex: no proper cut");
  if (!(total > 0)) return Bscw::none("degenerate: zero total volume, sparsity undefined");
  const Cluster all = range_cluster(g.n());
  Cluster R, rest = all;
  std::string stop = "residual exhausted";
  while (rest.size() >= 2) {
    BoundaryLinkedView view(g, rest, 1.0);
    SweepCut s = spectral_sweep(view.materialize());
    if (s.side.empty()) {
      stop = "no cut with positive volume in the residual";
      break;
    }
    if (!(s.sparsity.value < 2 * psi * apx)) {
      stop = "approximate sparsest cut not (2 psi apx)-sparse";
      break;
    }
    for (int v : s.side) R.push_back(rest[v]);
    normalize_cluster(R);
    rest = complement_in(all, R);
    if (vol(g, R) >= total / 5) {
      stop = "R holds a fifth of the volume";
      break;
    }
  }
  if (R.empty()) return Bscw::none("spectral certificate: " + stop);
  double vr = vol(g, R), vrest = total - vr;
  Cluster side = smaller_side(R, rest, vr, vrest);
  Bscw w = Bscw::cut(side, std::min(vr, vrest));
  w.diagnostic = stop;
  return w;
}

// --------------------------------------------------------------- contract

BscwContract check_bscw(const WeightedGraph& h, double psi, double alpha, double lambda, double xi, const Bscw& w,
                        int cap) {
  if (h.n() > cap) throw SizeError("witness contract check exceeds the enumeration cap");
  BscwContract c;
  const int n = h.n();
  const double total = h.volume();
  std::vector<int> ea, eb;
  std::vector<double> ew;
  for (const auto& [e, x] : h.edges()) {
    ea.push_back(e.first);
    eb.push_back(e.second);
    ew.push_back(x);
  }
  std::vector<double> deg(n);
  for (int v = 0; v < n; ++v) deg[v] = h.degree(v);

  auto measure = [&](uint64_t mask, double& cut, double& vs) {
    cut = 0;
    vs = 0;
    for (int v = 0; v < n; ++v)
      if ((mask >> v) & 1u) vs += deg[v];
    for (size_t i = 0; i < ew.size(); ++i)
      if (((mask >> ea[i]) & 1u) != ((mask >> eb[i]) & 1u)) cut += ew[i];
  };

  double vol_r = 0;
  if (!w.bottom) {
    uint64_t rmask = 0;
    for (int v : w.R) {
      if (v < 0 || v >= n) {
        c.nonempty = false;
        c.detail = "witness vertex out of range";
        return c;
      }
      rmask |= uint64_t{1} << v;
    }
    if (w.R.empty() || static_cast<int>(w.R.size()) >= n) {
      c.nonempty = false;
      c.detail = "witness is empty or the whole vertex set";
      return c;
    }
    double cut_r;
    measure(rmask, cut_r, vol_r);
    double rest = total - vol_r;
    if (!is_sparse(cut_r, std::min(vol_r, rest), alpha * psi)) {
      c.sparse = false;
      c.detail += "Phi(R) not below alpha*psi; ";
    }
    if (vol_r > (1 + xi) * rest * (1 + kRelTol) + kRelTol) {
      c.small_side = false;
      c.detail += "R is not the small side; ";
    }
    if (w.nu < (1 - xi) * vol_r * (1 - kRelTol) - kRelTol || w.nu > (1 + xi) * vol_r * (1 + kRelTol) + kRelTol) {
      c.estimate = false;
      c.detail += "nu does not match vol(R); ";
    }
  }

  const uint64_t limit = n >= 1 ? (uint64_t{1} << (n - 1)) : 0;
  for (uint64_t m = 1; m < limit; ++m) {
    double cut, vs;
    measure(m, cut, vs);
    double vt = std::min(vs, total - vs);
    if (!is_sparse(cut, vt, psi)) continue;
    if (w.bottom) {
      c.expander = false;
      c.detail = "bottom returned but a psi-sparse cut exists";
      return c;
    }
    if (vt > lambda * vol_r * (1 + kRelTol) + kRelTol) {
      c.balanced = false;
      c.detail += "a psi-sparse cut with volume " + std::to_string(vt) + " exceeds lambda*vol(R); ";
      break;
    }
  }
  return c;
}

}  // namespace eds
