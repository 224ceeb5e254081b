#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "edstream/bscw.hpp"
#include "edstream/common.hpp"
#include "edstream/graph.hpp"
#include "edstream/sparsifier.hpp"
#include "edstream/stream.hpp"

namespace eds {

// ------------------------------------------------------------------ params

// Parameters of the boundary-linked decomposition. Index j of the schedules
// runs over 0..k+1; entry 0 is the base value.
struct BldParams {
  int n = 0;
  double logn = 0;  // log2 n
  double b = 0;
  double eps = 0;   // target crossing fraction (derived from phi when built from phi)
  double phi = 0;
  double C = 40;
  double c = 1.0 / 40;
  double alpha = 1;
  double lambda = 1;
  int k = 1;
  double D = 0;          // recursion depth budget 9 C lambda log n
  int max_level = 0;     // floor(D)
  int h_max = 1;         // ceil(1 / b): inner Trim iterations allowed
  std::vector<double> b_j, phi_j, delta_j;  // delta_j[0] = delta
  double delta = 0;
  // Closed-form phi and epsilon live in log space (natural log): at desk
  // scale e^{2 b mu D} overflows a double.
  double log_phi = 0;
  bool phi_representable = true;
  double log_eps_bound = 0;  // log of 4 mu phi D e^{2 b mu D}
  double gamma = 0;          // 6 alpha^{k+1}
  int k_formula = 0;         // ceil(log(n^5 alpha) / log(b^{-1/2} / lambda)), 0 if undefined
  std::vector<std::string> notes;  // unmet preconditions at this scale

  double tau() const { return b / phi; }
  double mu() const { return 3 * C * lambda + 2 * alpha; }
  // psi passed to the BSCA in Trim iteration j (j = 0: Decompose).
  double psi(int j) const { return (1 + 1 / (2 * logn)) * phi_j.at(j); }
  // Natural log of the crossing-edge bound 4 mu phi vol(V) D e^{2 b mu D}.
  double log_crossing_bound(double volume) const;
};

// Parameters from (b, eps) via the closed form for phi. Throws
// ParameterError naming the violated precondition.
BldParams derive_params(int n, double b, double eps, double alpha, double lambda, double C = 40,
                        double c = 1.0 / 40);
// Parameters from an explicit (b, phi); k defaults to floor(log2 n).
BldParams params_from_phi(int n, double b, double phi, double alpha, double lambda, int k = 0, double C = 40,
                          double c = 1.0 / 40);

// ------------------------------------------------------------------ trace

enum class Branch { kExpander, kBalancedRecurse, kTrimExpander, kTrimBalanced };
const char* to_string(Branch b);

struct TrimStep {
  enum Action { kExpander, kRelaxed, kTrimmed, kBreak };
  int j = 0, h = 0;
  Action action = kExpander;
  size_t a_size = 0;  // |A| before the step
  double nu = 0;
  double vol_hat = 0;  // estimated boundary-linked volume of the Trim input U
};

struct CallRecord {
  Cluster cluster;
  int level = 0;
  bool bottom = true;
  Cluster R;
  double nu = 0;
  double vol_hat = 0;
  Branch branch = Branch::kExpander;
  std::vector<SlotKey> slots;
  std::vector<TrimStep> trim;
};

struct DecomposeTrace {
  std::vector<CallRecord> calls;
  int max_depth = 0;
  int max_inner = 0;      // largest inner Trim iteration index h seen
  int max_break_j = 0;    // largest outer index j at which Trim broke
  int64_t bsca_calls = 0;
  std::string to_text() const;
};

struct DecomposeResult {
  Partition partition;
  DecomposeTrace trace;
};

// ------------------------------------------------------------------ algorithms

// Decompose(U, level) with the given sparsifier slots and BSCA. The recursion
// runs on an explicit work stack; budget violations raise TheoryViolation.
// The returned partition covers exactly U and is canonicalised.
DecomposeResult decompose(const Cluster& U, int level, const BldParams& p, SparsifierProvider& prov,
                          const Bsca& bsca);

struct TrimResult {
  Cluster S;
  bool expander = false;
};
// Trim(U, level); appends its iterations to `rec`.
TrimResult trim(const Cluster& U, int level, const BldParams& p, SparsifierProvider& prov, const Bsca& bsca,
                CallRecord& rec, DecomposeTrace& trace);

// Provisions every slot the run may need.
void provision_slots(SparsifierProvider& prov, const BldParams& p);

struct StreamDecomposeResult {
  DecomposeResult result;
  int64_t slots_provisioned = 0;
  int64_t slots_consumed = 0;
  double sketch_words = 0;  // analytic space of all provisioned slots
};
// One pass over the stream into a freshly provisioned provider, then
// Decompose(V, 0).
StreamDecomposeResult decompose_stream(const EdgeStream& s, const BldParams& p, const ProviderConfig& cfg,
                                       const Bsca& bsca);

// Exact-mode decomposition of a whole graph.
DecomposeResult decompose_graph(const MultiGraph& g, const BldParams& p, const Bsca& bsca);

// ------------------------------------------------------------------ RED

// G \ U: g without the edges inside clusters of the partition.
MultiGraph remove_intra_cluster_edges(const MultiGraph& g, const Partition& p);

struct RedOptions {
  int levels = 2;
  double phi = 0.1;   // target expansion of every ED in the sequence
  double tau = 1.25;  // b / phi_dec for the inner decomposition
  int k = 1;          // Trim outer iterations for the inner decomposition
  int cap = kBruteForceCap;
};

struct RedLevel {
  Partition partition;
  MultiGraph residual;  // G^R_i, the graph this level decomposed
  int64_t crossing = 0; // edges of G^R_i between clusters
  double phi_dec = 0;   // phi handed to Decompose so that phi_{k+1} >= phi
};

// l-level removal-based sequence: level i decomposes each connected piece of
// G^R_i (exact mode) with phi_dec chosen so the certified expansion
// phi_{k+1} equals the target phi.
std::vector<RedLevel> red_offline(const MultiGraph& g, const RedOptions& opt);

}  // namespace eds
