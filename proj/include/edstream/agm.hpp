#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "edstream/graph.hpp"
#include "edstream/prf.hpp"
#include "edstream/sketch.hpp"
#include "edstream/stream.hpp"

namespace eds {

enum class EstimatorMode { kExact, kWitness };
// Eager keeps every bank of every level in memory and feeds it each update.
// Deferred keeps the net update vector and builds a bank only when decoding
// needs it; because every bank is a linear function of the net vector and
// its seed, both produce bit-identical bank states.
enum class Materialization { kEager, kDeferred };

struct AgmConfig {
  double delta = 0.25;
  double C = 1.0;
  Seed128 seed;
  EstimatorMode estimator = EstimatorMode::kExact;
  Materialization materialization = Materialization::kDeferred;
  int64_t k_override = 0;      // > 0 replaces the formula value of k
  int64_t eager_bank_cap = 0;  // eager mode allocates min(k, cap) banks; 0 means n - 1
};

// Connectivity estimate for one pair plus a confidence flag.
struct ConnEstimate {
  double value = 0;
  bool low_confidence = false;
};

struct AgmDiagnostics {
  int64_t k = 0;
  int levels = 0;                 // witness levels 0..levels-1
  std::vector<int> decoded_levels;
  std::vector<int64_t> witness_edges;  // per decoded level
  int64_t output_edges = 0;
  int64_t estimates = 0;          // pairs whose connectivity was estimated
  int64_t low_confidence = 0;     // estimator flags (witness mode)
  int64_t estimator_bad = 0;      // estimate outside [lambda/2, 3 lambda/2] (checked against the live graph)
  int deepest_needed = 0;
};

struct AgmResult {
  WeightedGraph graph;
  AgmDiagnostics diag;
};

// Geometric-rate connectivity-witness sampler. Pair e reaches witness level i
// iff the keyed bits h_1(e) .. h_i(e) are all 1 (level 0 gets every pair).
// Decoding weights a recovered pair by 2^{j_e} when it appears in the witness
// of level j_e = floor(log2(1 / min(1, p_e))), with
// p_e = min(1, (2 / lambda_e) * C * log^3 n / delta^2).
class AgmSketch {
 public:
  AgmSketch(int n, const AgmConfig& cfg);

  static int64_t k_for(int n, double delta, double C);
  static int levels_for(int n);

  void update(const StreamUpdate& upd);
  void update(int u, int v, int64_t delta);
  AgmResult decode() const;

  // Highest level the pair is routed to.
  int top_level(int u, int v) const;
  // 2^{j} for a given connectivity estimate (the sampling exponent rule).
  int j_for(double lambda_estimate) const;
  double p_tilde(double lambda_estimate) const;

  int n() const { return n_; }
  int64_t k() const { return k_; }
  int levels() const { return levels_; }
  const AgmConfig& config() const { return cfg_; }
  // Words an eager sketch with k banks per level occupies.
  double analytic_words() const;
  static double analytic_words(int n, int64_t k);

  // Bank `bank` of level `level`, built from the net update vector. Equals the
  // eager bank bit for bit.
  ForestSketch materialize_bank(int level, int64_t bank) const;
  const ConnWitSketch& eager_level(int level) const { return eager_.at(level); }
  const LiveGraph& live() const { return live_; }

 private:
  Seed128 level_seed(int level) const;
  ConnWitResult decode_level(int level) const;

  int n_;
  AgmConfig cfg_;
  int64_t k_;
  int levels_;
  Prf route_;
  std::vector<ConnWitSketch> eager_;
  LiveGraph live_;
};

}  // namespace eds
