#pragma once

#include <string>
#include <vector>

#include "edstream/common.hpp"
#include "edstream/graph.hpp"

namespace eds {

// Ground-truth checks of decomposition outputs. Every check is a pure
// function of (graph, partition, parameters); cluster expansion is computed
// by exhaustive cut enumeration, so clusters above `cap` vertices are
// reported as unchecked rather than failed.

enum class ClusterStatus {
  kVerified,   // exhaustive minimum sparsity meets the threshold
  kFailed,     // a cut below the threshold exists (witness recorded)
  kUnchecked,  // larger than the enumeration cap
  kVacuous,    // no proper cut with positive volume on both sides
};
const char* to_string(ClusterStatus s);

struct ClusterCheck {
  size_t index = 0;     // position in the canonicalised partition
  size_t size = 0;
  double volume = 0;    // volume of the cluster in the checked subgraph
  double expansion = 0; // exhaustive minimum sparsity (+inf when vacuous)
  Cluster witness;      // minimiser side, base vertex ids
  ClusterStatus status = ClusterStatus::kVerified;
};

struct VerifyReport {
  std::string kind;  // "ed" or "bld"
  int64_t edges = 0;
  int64_t crossing = 0;          // half the sum of cluster boundaries
  double crossing_fraction = 0;  // crossing / edges (0 for an edgeless graph)
  double eps = 0;
  double threshold = 0;  // expansion every cluster must reach
  double tau = 0;        // loops per boundary edge in the checked subgraph
  bool crossing_pass = true;
  int64_t verified = 0, failed = 0, unchecked = 0, vacuous = 0;
  double unchecked_volume = 0;  // volume of G inside unchecked clusters
  double worst_expansion = 0;   // over checked clusters (+inf if none)
  int64_t worst_cluster = -1;
  std::vector<ClusterCheck> clusters;

  bool expander_pass() const { return failed == 0; }
  bool pass() const { return crossing_pass && expander_pass(); }
  // key=value lines followed by one line per failed or unchecked cluster.
  std::string to_text(const std::string& prefix = "") const;
};

// Number of edges of g (with multiplicity) between different clusters.
int64_t crossing_edges(const MultiGraph& g, const Partition& p);

// Property 1: crossing <= eps |E|. Property 2: every G[U] is a phi-expander.
VerifyReport verify_ed(const MultiGraph& g, const Partition& p, double eps, double phi, int cap = kBruteForceCap,
                       int threads = 1);

// As verify_ed with expansion measured on G[U]^{b/phi}, threshold phi/gamma.
// A boundary-linked cluster is never less expanding than its plain induced
// subgraph; this implication is re-checked on every verified cluster and a
// counterexample raises TheoryViolation.
VerifyReport verify_bld(const MultiGraph& g, const Partition& p, double b, double eps, double phi, double gamma,
                        int cap = kBruteForceCap, int threads = 1);

struct RedReport {
  std::vector<VerifyReport> levels;  // levels[i] checks partition i on G^R_i
  bool pass() const;
  std::string to_text() const;
};

// Checks each partition of the sequence as an (eps, phi)-ED of the graph left
// after removing the intra-cluster edges of all earlier partitions.
RedReport verify_red(const MultiGraph& g, const std::vector<Partition>& partitions, double eps, double phi,
                     int cap = kBruteForceCap, int threads = 1);

}  // namespace eds
