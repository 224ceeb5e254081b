#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "edstream/agm.hpp"
#include "edstream/blob.hpp"
#include "edstream/common.hpp"
#include "edstream/graph.hpp"
#include "edstream/prf.hpp"
#include "edstream/stream.hpp"

namespace eds {

// ------------------------------------------------------------------ slots

// Names one independent sparsifier instance. Decompose at recursion level
// `level` uses (level, 0, 0); Trim at that level uses (level, j, h) with
// j >= 1 the outer and h >= 1 the inner iteration.
struct SlotKey {
  int level = 0;
  int j = 0;
  int h = 0;
  auto operator<=>(const SlotKey&) const = default;
};
std::string to_string(const SlotKey& k);

enum class ProviderMode { kExact, kAgm };

struct ProviderConfig {
  ProviderMode mode = ProviderMode::kExact;
  Seed128 seed;
  // AGM-mode settings; delta comes from the slot's schedule.
  double C = 1.0;
  EstimatorMode estimator = EstimatorMode::kExact;
  int64_t k_override = 0;
};

struct SlotUse {
  SlotKey key;
  Cluster cluster;
};

// Hands out cluster sparsifiers for the slots of one decomposition run.
//
// Every slot is an independently seeded sample. A slot may serve several
// calls only on pairwise disjoint clusters (sibling calls at one recursion
// level); serving an overlapping cluster twice would let the caller adapt to
// the sample it already saw, so it is refused with a ProvisioningError.
//
// In AGM mode the provider keeps the net update vector once and builds each
// slot's sketch from it on first use: the sketches are linear, so this equals
// feeding every update to every slot. Space is reported analytically as the
// size all provisioned slots would occupy if kept eagerly.
class SparsifierProvider {
 public:
  SparsifierProvider(int n, const ProviderConfig& cfg);

  // Declares the slot range: levels 0..max_level, Trim iterations
  // j = 1..max_j and h = 1..max_h. delta_by_j[0] is the error of the
  // Decompose slots, delta_by_j[j] the error of Trim iteration j.
  void provision(int max_level, int max_j, int max_h, std::vector<double> delta_by_j);

  void update(const StreamUpdate& upd) { live_.apply(upd); }
  void update(int u, int v, int64_t delta) { live_.apply(u, v, delta); }
  void feed(const MultiGraph& g);

  // Sparsifier H on all of V for cluster U from slot `key`.
  const WeightedGraph& provide(const SlotKey& key, const Cluster& U);

  int n() const { return n_; }
  const ProviderConfig& config() const { return cfg_; }
  bool in_range(const SlotKey& key) const;
  double delta_for(const SlotKey& key) const;
  int64_t slots_provisioned() const;
  int64_t slots_consumed() const { return static_cast<int64_t>(decoded_.size()); }
  const std::vector<SlotUse>& ledger() const { return ledger_; }
  double analytic_words() const;
  const LiveGraph& live() const { return live_; }
  int max_level() const { return max_level_; }
  int max_j() const { return max_j_; }
  int max_h() const { return max_h_; }

  // Versioned blob of the whole linear state: configuration, slot range and
  // net update vector. Every slot sketch is a deterministic function of
  // these, so a restored provider decodes bit-identically.
  Blob serialize() const;
  static SparsifierProvider deserialize(const Blob& b);

  // Diagnostics of every AGM decode performed so far, keyed by slot.
  const std::map<SlotKey, AgmDiagnostics>& agm_diagnostics() const { return diag_; }

 private:
  Seed128 slot_seed(const SlotKey& key) const;

  int n_;
  ProviderConfig cfg_;
  int max_level_ = -1, max_j_ = 0, max_h_ = 0;
  std::vector<double> delta_by_j_;
  LiveGraph live_;
  std::map<SlotKey, WeightedGraph> decoded_;
  std::map<SlotKey, std::vector<char>> served_;  // vertices already served per slot
  std::map<SlotKey, AgmDiagnostics> diag_;
  std::vector<SlotUse> ledger_;
  std::unique_ptr<WeightedGraph> exact_;  // EXACT mode: the live graph itself
};

// ------------------------------------------------------------------ checker

struct SparsifierCheckOptions {
  int cap = kBruteForceCap;
  Seed128 seed;             // drives sampled global cuts
  bool check_global = true;
  int64_t samples_per_n2 = 10;  // sampled cuts = samples_per_n2 * n^2 when n > cap
};

// Worst error ratios are |estimate - truth| / cut_global(S) in G. A cut
// passes when its ratio is at most delta (up to kRelTol); a cut with zero
// global value passes only when the estimate is exact.
struct SparsifierReport {
  bool local_pass = true;
  bool global_pass = true;
  bool pass() const { return local_pass && global_pass; }
  double worst_local_ratio = 0;
  Cluster worst_local_cut;
  double worst_global_ratio = 0;
  Cluster worst_global_cut;
  bool global_checked = false;
  bool global_probabilistic = false;  // sampled cuts plus singletons
  int64_t local_cuts = 0;
  int64_t global_cuts = 0;
};

// Local condition only: every S subset of U (exhaustive, |U| <= cap).
SparsifierReport check_local(const WeightedGraph& g, const WeightedGraph& h, const Cluster& U, double delta,
                             int cap = kBruteForceCap);
// Global condition only: every S subset of V when n <= cap, otherwise all
// singletons plus sampled uniform random cuts.
SparsifierReport check_global(const WeightedGraph& g, const WeightedGraph& h, double delta,
                              const SparsifierCheckOptions& opt = {});
// Both conditions for H[U] against G[U].
SparsifierReport check_cluster_sparsifier(const WeightedGraph& g, const WeightedGraph& h, const Cluster& U,
                                          double delta, const SparsifierCheckOptions& opt = {});

// ------------------------------------------------------------------ pass-rate experiment

struct SparsTrialOptions {
  double delta = 0.25;
  double C = 1.0;
  EstimatorMode estimator = EstimatorMode::kExact;
  int clusters = 30;
  int max_size = 12;      // clusters have 2..max_size vertices
  double churn = 0.3;     // transient insert/delete pairs per live edge
  int64_t samples_per_n2 = 10;
  int threads = 1;
};

struct SparsTrialReport {
  int n = 0;
  int64_t edges = 0;
  int64_t updates = 0;
  double delta = 0;
  int passed = 0, local_passed = 0, global_passed = 0;
  double worst_local_ratio = 0, worst_global_ratio = 0;
  bool global_sampled = false;
  int deepest_level_needed = 0;
  std::vector<Cluster> clusters;
  std::vector<SparsifierReport> reports;
  double pass_rate() const { return clusters.empty() ? 0.0 : static_cast<double>(passed) / clusters.size(); }
  std::string to_text() const;  // key=value lines plus one line per failing cluster
};

// Streams g with churn into an AGM provider and checks the cluster-sparsifier
// condition for random clusters, each served by its own independent slot.
// Every random choice derives from `seed` (labels churn, sparsifier,
// clusters, check).
SparsTrialReport spars_trial(const MultiGraph& g, const Seed128& seed, const SparsTrialOptions& opt = {});

}  // namespace eds
