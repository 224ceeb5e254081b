#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "edstream/blob.hpp"
#include "edstream/common.hpp"
#include "edstream/decompose.hpp"
#include "edstream/graph.hpp"
#include "edstream/prf.hpp"

namespace eds {

// ------------------------------------------------------------------ hard instances
//
// Vertex layout: S = [0, n/2) split into n/m consecutive blocks of m/2
// vertices, s_{i,r} = i*(m/2) + r (0-based i and r); T = [n/2, n) split into
// n/(dm) consecutive groups of dm/2 vertices. The important index K is
// 0-based. Block i's important vertex is wired to every vertex of group
// floor(i/d), so each t in T receives exactly d edges from S.

struct HardParams {
  int n = 0;
  int d = 0;
  int m = 0;
  // Required Cheeger lower bound lambda_2/2 of the T-graph; the generator
  // retries with fresh sub-seeds until it is met (0 accepts any graph).
  double psi_target = 0;
  Seed128 seed;

  int blocks() const { return n / m; }
  int block_size() const { return m / 2; }
  int groups() const { return n / (d * m); }
  int group_size() const { return d * m / 2; }
  double block_p() const;  // min(1, 4d/m)
  int s(int i, int r) const { return i * block_size() + r; }
  // Throws ParameterError naming the violated divisibility/range condition.
  void validate() const;
};

struct HardInstance {
  HardParams params;
  MultiGraph graph;      // on [0, n)
  MultiGraph tgraph;     // the fixed d-regular graph on T, ids 0..n/2-1 (shifted by n/2 in `graph`)
  double t_lambda2 = 0;  // normalised-Laplacian lambda_2 of the T-graph
  double psi_t = 0;      // lambda_2 / 2, the measured expansion lower bound
  int K = 0;
  Cluster important_vertices;                 // V* = {s_{i,K}}
  std::vector<VertexPair> important_edges;    // E*: edges of G[S] incident on V*
  std::vector<std::string> warnings;

  Cluster S() const { return range(0, params.n / 2); }
  Cluster T() const { return range(params.n / 2, params.n); }
  Cluster block(int i) const { return range(i * params.block_size(), (i + 1) * params.block_size()); }
  // Alice's graph G' = G[S], on [0, n/2).
  MultiGraph left_graph() const;
  // E_k(S, T) for a given important index k.
  std::vector<VertexPair> st_edges(int k) const;

 private:
  static Cluster range(int a, int b);
};

// E_k(S, T): the S-T edges when the important index is k.
std::vector<VertexPair> hard_st_edges(const HardParams& p, int k);
// The fixed T-graph for these parameters (depends on n, d, m, seed only).
MultiGraph hard_tgraph(const HardParams& p, double* lambda2 = nullptr, std::vector<std::string>* warnings = nullptr);
// Samples G' ~ ER(m/2, 4d/m)^{n/m} and K, then assembles the instance.
HardInstance gen_hard(const HardParams& p);
// Rebuilds the instance defined by (G', K); structural invariants are
// asserted (TheoryViolation on failure).
HardInstance hard_from_factorization(const HardParams& p, const MultiGraph& left, int K);

// Sidecar metadata: key=value lines (n, d, m, K, psi_t, important vertices).
void write_hard_meta(std::ostream& out, const HardInstance& inst);
struct HardMeta {
  HardParams params;
  int K = 0;
};
HardMeta read_hard_meta(std::istream& in);

// ------------------------------------------------------------------ ER blocks

struct ErBlockReport {
  int N = 0;
  double p = 0;
  int trials = 0;
  bool exact = true;            // expansion by enumeration (N <= cap) or lambda_2/2
  int expansion_failures = 0;   // Phi < 1/3 (or not confirmed by lambda_2/2 >= 1/3)
  int degree_failures = 0;      // some |deg - p(N-1)| > p(N-1)/11
  int bad_events = 0;           // union of the two
  int within_2d = 0;            // blocks with every degree in (1 +- 1/10) * pN
  double min_expansion = 0;     // smallest expansion (or lower bound) seen
  double frequency() const { return trials ? static_cast<double>(bad_events) / trials : 0.0; }
  double bound = 0;             // 4N exp(-pN/600); may exceed 1
  std::string to_text() const;
};
ErBlockReport check_er_block(int N, double p, int trials, const Seed128& seed, int cap = kBruteForceCap);

// ------------------------------------------------------------------ special edges

struct SpecialEdgeReport {
  int64_t important = 0;
  int64_t crossing_important = 0;
  double fraction = 0;  // |E* \ U| / |E*| (0 when E* is empty)
  // Whether the parameters meet every precondition under which at least 4/5
  // of E* must cross; otherwise the threshold is informational.
  bool preconditions_met = false;
  std::vector<std::string> unmet;
  bool threshold_met() const { return fraction >= 0.8; }
};
SpecialEdgeReport check_special_edges(const HardInstance& inst, const Partition& p, double eps = 0,
                                      double phi = 0);

// ------------------------------------------------------------------ recover game

// A streaming 2-level RED algorithm whose whole memory state serialises to a
// blob. Restoring from the blob must give an algorithm in the same state.
class StreamingRed {
 public:
  virtual ~StreamingRed() = default;
  virtual void update(int u, int v, int64_t delta) = 0;
  virtual Blob serialize() const = 0;
  // The two partitions U_1, U_2.
  virtual std::vector<Partition> output() const = 0;
  virtual std::string name() const = 0;
};

// Builds fresh instances on n vertices and restores instances from blobs.
struct RedFactory {
  std::function<std::unique_ptr<StreamingRed>(int n)> create;
  std::function<std::unique_ptr<StreamingRed>(const Blob&)> restore;
};

// Keeps the whole edge multiset and runs red_offline with two levels: an
// exact oracle with an unbounded message.
RedFactory offline_exact_red(const RedOptions& opt);
// Forgets everything and outputs all singletons at both levels.
RedFactory all_singleton_red();

struct RecoverOutcome {
  std::string algorithm;
  int n = 0, d = 0, m = 0;
  double eps = 0;
  double xi = 0;  // eps * m
  int64_t message_bits = 0;
  int64_t left_edges = 0;         // |E'|
  int64_t f_size = 0;             // |F|
  int64_t f_hits = 0;             // |F intersect E'|
  int clones = 0;                 // m / 2
  int clones_used = 0;            // clones whose U_2 passed the 3 eps d n filter
  int64_t max_non_isolated = 0;   // over clones
  bool flag_small = false;        // |F| <= 6 xi |E'|
  bool flag_learns = false;       // |F intersect E'| >= |E'| / 10
  // For the clone with the true K: |E* \ U_1| / |E*|.
  double special_fraction = 0;
  std::string to_text() const;
};

// Alice: feeds E' and E(G[T]) into a fresh algorithm and returns its state.
Blob recover_alice(const RedFactory& alg, const HardParams& p, const MultiGraph& left);

// Bob's view of the game: the blob plus public parameters; never sees E'.
struct BobOutput {
  std::vector<VertexPair> F;
  std::vector<std::vector<Partition>> outputs;  // (U_1, U_2) per clone k
  std::vector<int64_t> non_isolated;            // |V \ U_2^k|
  std::vector<char> used;                       // clone passed the filter
};
BobOutput recover_bob(const RedFactory& alg, const HardParams& p, const Blob& message, double eps, int threads = 1);

// Full game on G' (the left graph of an instance) with the instance's true K
// used only for the special-edge report.
RecoverOutcome recover_sim(const RedFactory& alg, const HardInstance& inst, double eps, int threads = 1);

}  // namespace eds
