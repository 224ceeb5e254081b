#include "edstream/cuts.hpp"

#include <string>

namespace eds {

namespace detail {

std::vector<char> membership(int n, const Cluster& c, const char* what) {
  std::vector<char> in(n, 0);
  for (int v : c) {
    if (v < 0 || v >= n)
      throw DomainError(std::string(what) + " vertex " + std::to_string(v) + " out of range");
    in[v] = 1;
  }
  return in;
}

void require_subset(const std::vector<char>& outer, const Cluster& inner, const char* what) {
  for (int v : inner) {
    if (v < 0 || v >= static_cast<int>(outer.size()) || !outer[v])
      throw DomainError(std::string(what) + " vertex " + std::to_string(v) + " not inside cluster");
  }
}

}  // namespace detail

Sparsity make_sparsity(double cut, double vol_s, double vol_rest) {
  Sparsity s;
  s.cut = cut;
  s.min_vol = std::min(vol_s, vol_rest);
  if (!(s.min_vol > 0)) {
    s.degenerate = true;
    s.value = std::numeric_limits<double>::infinity();
  } else {
    s.value = cut / s.min_vol;
  }
  return s;
}

// ------------------------------------------------------ BoundaryLinkedView

BoundaryLinkedView::BoundaryLinkedView(const WeightedGraph& base, Cluster cluster, double tau)
    : base_(&base), cluster_(std::move(cluster)), tau_(tau) {
  if (!(tau >= 0) || !std::isfinite(tau)) throw DomainError("tau must be finite and >= 0");
  normalize_cluster(cluster_);
  in_u_ = detail::membership(base.n(), cluster_, "cluster");
}

double BoundaryLinkedView::cut(const Cluster& S) const { return cut_local(*base_, cluster_, S); }

double BoundaryLinkedView::border(const Cluster& S) const { return eds::border(*base_, cluster_, S); }

double BoundaryLinkedView::vol(const Cluster& S) const {
  detail::require_subset(in_u_, S, "view");
  double total = 0;
  for (int v : S) {
    double inside = base_->loop(v), outside = 0;
    for (const auto& [w, x] : base_->adj(v)) (in_u_[w] ? inside : outside) += x;
    total += inside + tau_ * outside;
  }
  return total;
}

double BoundaryLinkedView::total_volume() const { return vol(cluster_); }

Sparsity BoundaryLinkedView::sparsity(const Cluster& S) const {
  Cluster s = S;
  normalize_cluster(s);
  double vs = vol(s);
  return make_sparsity(cut(s), vs, total_volume() - vs);
}

WeightedGraph BoundaryLinkedView::materialize() const {
  std::vector<int> local(base_->n(), -1);
  for (size_t i = 0; i < cluster_.size(); ++i) local[cluster_[i]] = static_cast<int>(i);
  WeightedGraph h(static_cast<int>(cluster_.size()));
  for (size_t i = 0; i < cluster_.size(); ++i) {
    int v = cluster_[i];
    double outside = 0;
    for (const auto& [w, x] : base_->adj(v)) {
      if (local[w] < 0)
        outside += x;
      else if (local[w] > static_cast<int>(i))
        h.add_edge(static_cast<int>(i), local[w], x);
    }
    double loop = base_->loop(v) + tau_ * outside;
    if (loop > 0) h.add_loop(static_cast<int>(i), loop);
  }
  return h;
}

// -------------------------------------------------------------- enumeration

DenseGraph DenseGraph::from(const WeightedGraph& g) {
  DenseGraph d;
  d.m = g.n();
  d.w.assign(static_cast<size_t>(d.m) * d.m, 0.0);
  d.deg.assign(d.m, 0.0);
  for (const auto& [e, x] : g.edges()) {
    d.w[static_cast<size_t>(e.first) * d.m + e.second] = x;
    d.w[static_cast<size_t>(e.second) * d.m + e.first] = x;
  }
  for (int v = 0; v < d.m; ++v) d.deg[v] = g.degree(v);
  return d;
}

Cluster mask_to_cluster(uint64_t mask, int m) {
  Cluster c;
  for (int v = 0; v < m; ++v)
    if ((mask >> v) & 1u) c.push_back(v);
  return c;
}

Cluster smaller_side(const Cluster& s, const Cluster& rest, double vol_s, double vol_rest) {
  if (approx_equal(vol_s, vol_rest)) return std::min(s, rest);
  return vol_s < vol_rest ? s : rest;
}

MinSparsity min_sparsity_bruteforce(const WeightedGraph& g, int cap) {
  if (g.n() > cap)
    throw SizeError("brute-force enumeration over " + std::to_string(g.n()) +
                    " vertices exceeds cap " + std::to_string(cap));
  if (g.n() == 0) throw DomainError("sparsity of an empty graph");
  MinSparsity best;
  const DenseGraph d = DenseGraph::from(g);
  double total = 0;
  for (double x : d.deg) total += x;
  const Cluster all = range_cluster(d.m);
  bool any_proper = false, any_finite = false;
  enumerate_cuts(d, false, [&](uint64_t mask, double cut, double vol_s) {
    any_proper = true;
    double vol_rest = total - vol_s;
    double mv = std::min(vol_s, vol_rest);
    if (!(mv > 0)) return;
    double phi = cut / mv;
    bool better = false;
    if (!any_finite || (phi < best.value && !approx_equal(phi, best.value))) {
      better = true;
    } else if (approx_equal(phi, best.value)) {
      if (mv > best.min_vol && !approx_equal(mv, best.min_vol)) {
        better = true;
      } else if (approx_equal(mv, best.min_vol)) {
        Cluster s = mask_to_cluster(mask, d.m);
        Cluster side = smaller_side(s, complement_in(all, s), vol_s, vol_rest);
        better = side < best.witness;
      }
    }
    if (!better) return;
    any_finite = true;
    Cluster s = mask_to_cluster(mask, d.m);
    best.witness = smaller_side(s, complement_in(all, s), vol_s, vol_rest);
    best.value = phi;
    best.cut = cut;
    best.min_vol = mv;
  });
  best.degenerate = any_proper && !any_finite;
  return best;
}

MinSparsity min_sparsity_bruteforce(const BoundaryLinkedView& view, int cap) {
  if (static_cast<int>(view.cluster().size()) > cap)
    throw SizeError("brute-force enumeration over " + std::to_string(view.cluster().size()) +
                    " vertices exceeds cap " + std::to_string(cap));
  MinSparsity r = min_sparsity_bruteforce(view.materialize(), cap);
  for (int& v : r.witness) v = view.cluster()[v];
  return r;
}

}  // namespace eds
