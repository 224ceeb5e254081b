#include "edstream/spectral.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace eds {

namespace {

Eigen::MatrixXd normalized_laplacian(const WeightedGraph& g, const std::vector<int>& ids,
                                     const std::vector<int>& local) {
  const int m = static_cast<int>(ids.size());
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(m, m);
  std::vector<double> inv_sqrt(m);
  for (int i = 0; i < m; ++i) inv_sqrt[i] = 1.0 / std::sqrt(g.degree(ids[i]));
  for (int i = 0; i < m; ++i) {
    L(i, i) = 1.0 - g.loop(ids[i]) / g.degree(ids[i]);
    for (const auto& [y, w] : g.adj(ids[i])) {
      int j = local[y];
      if (j < 0) continue;
      L(i, j) -= w * inv_sqrt[i] * inv_sqrt[j];
    }
  }
  return L;
}

}  // namespace

double normalized_lambda2(const WeightedGraph& g) {
  const int n = g.n();
  if (n < 2) throw DomainError("lambda_2 needs at least two vertices");
  std::vector<int> ids(n), local(n);
  std::iota(ids.begin(), ids.end(), 0);
  std::iota(local.begin(), local.end(), 0);
  for (int v = 0; v < n; ++v)
    if (!(g.degree(v) > 0)) throw DomainError("lambda_2 undefined with zero-degree vertices");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(normalized_laplacian(g, ids, local),
                                                    Eigen::EigenvaluesOnly);
  return es.eigenvalues()(1);
}

SweepCut spectral_sweep(const WeightedGraph& g) {
  const int n = g.n();
  SweepCut best;
  if (n < 2) return best;
  const double total = g.volume();
  const Cluster all = range_cluster(n);

  // Disconnected graphs: a component with positive volume is a zero-sparsity cut.
  auto comps = connected_components(g);
  if (comps.size() > 1) {
    for (const auto& c : comps) {
      double vc = vol(g, c);
      if (!(vc > 0) || !(total - vc > 0)) continue;
      Cluster rest = complement_in(all, c);
      Cluster side = smaller_side(c, rest, vc, total - vc);
      double vs = std::min(vc, total - vc);
      if (best.side.empty() || vs > best.sparsity.min_vol) {
        best.side = side;
        best.sparsity = make_sparsity(0, vc, total - vc);
      }
    }
    if (!best.side.empty()) return best;
  }

  std::vector<int> ids, local(n, -1), isolated;
  for (int v = 0; v < n; ++v) {
    if (g.degree(v) > 0) {
      local[v] = static_cast<int>(ids.size());
      ids.push_back(v);
    } else {
      isolated.push_back(v);
    }
  }
  if (ids.size() < 2) return best;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(normalized_laplacian(g, ids, local));
  Eigen::VectorXd f = es.eigenvectors().col(1);
  std::vector<double> x(ids.size());
  for (size_t i = 0; i < ids.size(); ++i) x[i] = f(static_cast<Eigen::Index>(i)) / std::sqrt(g.degree(ids[i]));
  std::vector<int> order(ids.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return x[a] < x[b]; });

  std::vector<char> in(n, 0);
  double cut = 0, vs = 0;
  for (size_t p = 0; p + 1 < order.size(); ++p) {
    int v = ids[order[p]];
    for (const auto& [y, w] : g.adj(v)) cut += in[y] ? -w : w;
    in[v] = 1;
    vs += g.degree(v);
    Sparsity s = make_sparsity(cut, vs, total - vs);
    if (s.degenerate) continue;
    bool better = best.side.empty() || (s.value < best.sparsity.value && !approx_equal(s.value, best.sparsity.value)) ||
                  (approx_equal(s.value, best.sparsity.value) && s.min_vol > best.sparsity.min_vol);
    if (!better) continue;
    Cluster prefix;
    for (size_t q = 0; q <= p; ++q) prefix.push_back(ids[order[q]]);
    normalize_cluster(prefix);
    best.side = smaller_side(prefix, complement_in(all, prefix), vs, total - vs);
    best.sparsity = s;
  }
  (void)isolated;  // zero-degree vertices never change cut or volume; they stay on the larger side
  return best;
}

}  // namespace eds
