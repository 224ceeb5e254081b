#pragma once

#include <algorithm>
#include <memory>
#include <string>
#include <vector>

#include "edstream/common.hpp"
#include "edstream/cuts.hpp"
#include "edstream/graph.hpp"

namespace eds {

// Balanced-sparse-cut witness: either "bottom" (the graph is declared a
// psi-expander) or a cut R of the input graph with a volume estimate nu.
// Vertex ids are those of the graph the witness was computed on.
struct Bscw {
  bool bottom = true;
  Cluster R;
  double nu = 0;
  std::string diagnostic;  // set for degenerate inputs and heuristic certificates

  static Bscw none(std::string why = {}) { return Bscw{true, {}, 0, std::move(why)}; }
  static Bscw cut(Cluster r, double nu) { return Bscw{false, std::move(r), nu, {}}; }
};

// A balanced sparse cut algorithm with approximation alpha and balance lambda.
class Bsca {
 public:
  virtual ~Bsca() = default;
  // h may carry self-loops; psi in (0, 1).
  virtual Bscw run(const WeightedGraph& h, double psi) const = 0;
  virtual double alpha() const = 0;
  virtual double lambda() const = 0;
  virtual std::string name() const = 0;
};

// Exhaustive (1,1)-BSCA: bottom iff no cut is psi-sparse, else the psi-sparse
// cut of largest min-side volume (ties: lexicographically smallest side),
// reported as its smaller-volume side with nu = its volume.
Bscw brute_force_bsca(const WeightedGraph& h, double psi, int cap = kBruteForceCap);

class BruteForceBsca : public Bsca {
 public:
  explicit BruteForceBsca(int cap = kBruteForceCap) : cap_(cap) {}
  Bscw run(const WeightedGraph& h, double psi) const override { return brute_force_bsca(h, psi, cap_); }
  double alpha() const override { return 1; }
  double lambda() const override { return 1; }
  std::string name() const override { return "brute-force"; }

 private:
  int cap_;
};

// --------------------------------------------------------------- self-loops

// Loop-free version of a graph: every loop-bearing vertex u gets a companion
// s(u) joined to it by an edge of half the loop weight. Companions are
// numbered n, n+1, ... in increasing order of u.
struct Delooped {
  WeightedGraph graph;
  int original_n = 0;
  std::vector<int> companion;  // companion[u] = s(u), or -1 when u carries no loop
};
Delooped deloop(const WeightedGraph& g);
// X together with the companions of its loop-bearing vertices.
Cluster lift(const Delooped& d, const Cluster& X);

// Runs `inner` on the loop-free graph and maps its cut back: X = R restricted
// to the original vertices, returned as the smaller-volume side of (X, V \ X)
// with nu = vol(X*). Requires psi <= 1 / (10 * inner.alpha()).
Bscw selfloop_bsca(const WeightedGraph& g, double psi, const Bsca& inner);

class SelfLoopBsca : public Bsca {
 public:
  explicit SelfLoopBsca(std::shared_ptr<const Bsca> inner) : inner_(std::move(inner)) {}
  Bscw run(const WeightedGraph& h, double psi) const override { return selfloop_bsca(h, psi, *inner_); }
  double alpha() const override { return 2 * inner_->alpha(); }
  double lambda() const override { return 4 * inner_->lambda(); }
  std::string name() const override { return "self-loop(" + inner_->name() + ")"; }

 private:
  std::shared_ptr<const Bsca> inner_;
};

// --------------------------------------------------------------- iterative

// Grows R by repeatedly cutting an approximate sparsest cut S out of
// G[V \ R] (with tau = 1 loops for the edges into R, so volumes are those of
// G). Stops when S is not (2 psi apx)-sparse or when R holds a fifth of the
// volume. Bottom iff R stays empty; otherwise the smaller side of (R, V \ R).
// The approximator is the spectral sweep; `apx` is its assumed (not
// certified) approximation factor, giving alpha = 4 apx and lambda = 2.
Bscw iterative_bsca(const WeightedGraph& g, double psi, double apx = 1.0);

class IterativeBsca : public Bsca {
 public:
  explicit IterativeBsca(double apx = 1.0) : apx_(apx) {}
  Bscw run(const WeightedGraph& h, double psi) const override { return iterative_bsca(h, psi, apx_); }
  double alpha() const override { return 4 * apx_; }
  double lambda() const override { return 2; }
  std::string name() const override { return "iterative-spectral"; }
  double apx() const { return apx_; }

 private:
  double apx_;
};

// Brute force up to `cap` vertices, the iterative heuristic above. Reports
// the weaker of the two parameter pairs.
class HybridBsca : public Bsca {
 public:
  explicit HybridBsca(int cap = kBruteForceCap, double apx = 1.0) : brute_(cap), iter_(apx), cap_(cap) {}
  Bscw run(const WeightedGraph& h, double psi) const override {
    return h.n() <= cap_ ? brute_.run(h, psi) : iter_.run(h, psi);
  }
  double alpha() const override { return std::max(brute_.alpha(), iter_.alpha()); }
  double lambda() const override { return std::max(brute_.lambda(), iter_.lambda()); }
  std::string name() const override { return "hybrid(cap=" + std::to_string(cap_) + ")"; }

 private:
  BruteForceBsca brute_;
  IterativeBsca iter_;
  int cap_;
};

// --------------------------------------------------------------- contract

// Checks the four witness clauses for (psi, alpha, lambda, xi) by exhaustive
// enumeration of the cuts of h (|V(h)| <= cap):
//   bottom  -> h is a psi-expander;
//   (R, nu) -> (a) Phi(R) < alpha psi, (b) every psi-sparse T with
//              vol(T) <= vol(rest) has vol(T) <= lambda vol(R),
//              (c) vol(R) <= (1 + xi) vol(rest), (d) nu within (1 +- xi) vol(R).
struct BscwContract {
  bool expander = true;   // clause for bottom
  bool sparse = true;     // (a)
  bool balanced = true;   // (b)
  bool small_side = true; // (c)
  bool estimate = true;   // (d)
  bool nonempty = true;   // R proper and non-empty
  std::string detail;
  bool ok() const { return expander && sparse && balanced && small_side && estimate && nonempty; }
};
BscwContract check_bscw(const WeightedGraph& h, double psi, double alpha, double lambda, double xi, const Bscw& w,
                        int cap = kBruteForceCap);

}  // namespace eds
