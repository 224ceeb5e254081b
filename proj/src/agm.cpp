#include "edstream/agm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "edstream/connectivity.hpp"

namespace eds {

namespace {

struct RoutedEdge {
  int u, v;
  int64_t mult;
  int top;
};

}  // namespace

int64_t AgmSketch::k_for(int n, double delta, double C) {
  if (n < 4) throw ParameterError("AGM sketch needs n >= 4");
  if (!(delta > 0 && delta < 1)) throw ParameterError("AGM delta must lie in (0,1)");
  if (!(C > 0)) throw ParameterError("AGM constant C must be positive");
  double lg = std::log2(static_cast<double>(n));
  double k = std::ceil(16.0 * C * lg * lg * lg / (delta * delta));
  if (k > 1e15) throw ParameterError("AGM witness size k overflows");
  return static_cast<int64_t>(k);
}

int AgmSketch::levels_for(int n) {
  return static_cast<int>(std::ceil(2.0 * std::log2(static_cast<double>(n)) - 1e-12)) + 1;
}

AgmSketch::AgmSketch(int n, const AgmConfig& cfg)
    : n_(n),
      cfg_(cfg),
      k_(cfg.k_override > 0 ? cfg.k_override : k_for(n, cfg.delta, cfg.C)),
      levels_(levels_for(n)),
      route_(derive_seed(cfg.seed, "route")),
      live_(n) {
  if (cfg.k_override <= 0) (void)k_for(n, cfg.delta, cfg.C);
  if (cfg_.materialization == Materialization::kEager) {
    int64_t cap = cfg_.eager_bank_cap > 0 ? cfg_.eager_bank_cap : std::max(1, n - 1);
    int64_t banks = std::min(k_, cap);
    for (int l = 0; l < levels_; ++l) eager_.emplace_back(n, banks, level_seed(l));
  }
}

Seed128 AgmSketch::level_seed(int level) const {
  return derive_seed(cfg_.seed, "level", static_cast<uint64_t>(level));
}

int AgmSketch::top_level(int u, int v) const {
  if (u > v) std::swap(u, v);
  const uint64_t idx = static_cast<uint64_t>(u) * n_ + v;
  for (int j = 1; j < levels_; ++j)
    if ((route_.hash64(idx, static_cast<uint64_t>(j)) & 1u) == 0) return j - 1;
  return levels_ - 1;
}

double AgmSketch::p_tilde(double lambda_estimate) const {
  if (!(lambda_estimate > 0)) return 1.0;
  double lg = std::log2(static_cast<double>(n_));
  double p = (2.0 / lambda_estimate) * cfg_.C * lg * lg * lg / (cfg_.delta * cfg_.delta);
  return std::min(1.0, p);
}

int AgmSketch::j_for(double lambda_estimate) const {
  double p = p_tilde(lambda_estimate);
  // floor(log2(1/p)) without rounding trouble at exact powers of two.
  int j = 0;
  while (j < 62 && std::ldexp(p, j + 1) <= 1.0) ++j;
  return j;
}

void AgmSketch::update(const StreamUpdate& upd) { update(upd.u, upd.v, upd.insert ? 1 : -1); }

void AgmSketch::update(int u, int v, int64_t delta) {
  live_.apply(u, v, delta);
  if (cfg_.materialization == Materialization::kEager) {
    int top = top_level(u, v);
    for (int l = 0; l <= top; ++l) eager_[l].update(u, v, delta);
  }
}

double AgmSketch::analytic_words(int n, int64_t k) {
  double per_sampler = static_cast<double>(L0Sampler::kDefaultReps) *
                       L0Sampler::levels_for(static_cast<uint64_t>(n) * n) * 3.0;
  double per_bank = per_sampler * n * ForestSketch::rounds_for(n);
  return per_bank * static_cast<double>(k) * levels_for(n);
}

double AgmSketch::analytic_words() const { return analytic_words(n_, k_); }

ForestSketch AgmSketch::materialize_bank(int level, int64_t bank) const {
  ForestSketch f(n_, ConnWitSketch::bank_seed(level_seed(level), bank));
  for (const auto& [e, m] : live_.edges())
    if (top_level(e.first, e.second) >= level) f.update(e.first, e.second, m);
  return f;
}

ConnWitResult AgmSketch::decode_level(int level) const {
  if (cfg_.materialization == Materialization::kEager) {
    const ConnWitSketch& cw = eager_.at(level);
    ConnWitResult r = cw.decode();
    if (r.banks_decoded == cw.k() && static_cast<int64_t>(r.forests.size()) == cw.k() && cw.k() < k_)
      throw DecodeError("witness level " + std::to_string(level) + ": eager bank budget exhausted");
    return r;
  }
  // Route once, then build each bank from the routed net vector.
  std::vector<RoutedEdge> routed;
  for (const auto& [e, m] : live_.edges()) {
    int top = top_level(e.first, e.second);
    if (top >= level) routed.push_back({e.first, e.second, m, top});
  }
  Seed128 ls = level_seed(level);
  return connwit_decode_banks(n_, k_, [&](int64_t b) {
    ForestSketch f(n_, ConnWitSketch::bank_seed(ls, b));
    for (const auto& r : routed) f.update(r.u, r.v, r.mult);
    return f;
  });
}

AgmResult AgmSketch::decode() const {
  AgmResult res;
  res.graph = WeightedGraph(n_);
  res.diag.k = k_;
  res.diag.levels = levels_;
  const MultiGraph live = live_.to_multigraph();
  const ConnectivityTree truth(live);

  auto add_level = [&](int level, const ConnWitResult& w) {
    res.diag.decoded_levels.push_back(level);
    res.diag.witness_edges.push_back(w.witness.num_edges());
  };

  std::map<int, ConnWitResult> witness;
  std::map<VertexPair, ConnEstimate> estimate;

  if (cfg_.estimator == EstimatorMode::kExact) {
    // Only levels some live pair maps to can contribute weight; the others are skipped.
    std::set<int> needed;
    for (const auto& [e, m] : live.edges()) {
      int j = j_for(static_cast<double>(truth.query(e.first, e.second)));
      needed.insert(j);
      res.diag.deepest_needed = std::max(res.diag.deepest_needed, j);
    }
    if (res.diag.deepest_needed >= levels_)
      throw TheoryViolation("AGM decode: an edge needs witness level " + std::to_string(res.diag.deepest_needed) +
                            " beyond the 2 log n levels maintained");
    for (int l : needed) {
      try {
        witness.emplace(l, decode_level(l));
      } catch (const DecodeError& err) {
        throw DecodeError(std::string("AGM level ") + std::to_string(l) + ": " + err.what());
      }
      add_level(l, witness.at(l));
    }
    for (const auto& [l, w] : witness)
      for (const auto& [e, m] : w.witness.edges())
        estimate[e] = ConnEstimate{static_cast<double>(truth.query(e.first, e.second)), false};
  } else {
    // Decode the full chain; levels are nested, so an empty level ends it.
    for (int l = 0; l < levels_; ++l) {
      try {
        witness.emplace(l, decode_level(l));
      } catch (const DecodeError& err) {
        throw DecodeError(std::string("AGM level ") + std::to_string(l) + ": " + err.what());
      }
      add_level(l, witness.at(l));
      if (witness.at(l).witness.num_edges() == 0) break;
    }
    std::vector<ConnectivityTree> trees;
    for (const auto& [l, w] : witness) trees.emplace_back(w.witness);
    for (const auto& [l, w] : witness) {
      for (const auto& [e, m] : w.witness.edges()) {
        if (estimate.count(e)) continue;
        int top = -1;
        std::vector<int64_t> conn(trees.size());
        for (size_t i = 0; i < trees.size(); ++i) {
          conn[i] = trees[i].query(e.first, e.second);
          if (conn[i] >= k_) top = static_cast<int>(i);
        }
        ConnEstimate est;
        if (top < 0) {
          est.value = static_cast<double>(conn[0]);  // cuts below k are kept exactly at level 0
        } else {
          est.value = std::ldexp(static_cast<double>(k_), top);
          for (int i = 0; i < top; ++i)
            if (conn[i] < k_) est.low_confidence = true;
        }
        estimate[e] = est;
      }
    }
  }

  for (const auto& [e, est] : estimate) {
    ++res.diag.estimates;
    if (est.low_confidence) ++res.diag.low_confidence;
    double lam = static_cast<double>(truth.query(e.first, e.second));
    if (est.value < lam / 2 || est.value > 1.5 * lam) ++res.diag.estimator_bad;
    int j = j_for(est.value);
    res.diag.deepest_needed = std::max(res.diag.deepest_needed, j);
    if (j >= levels_)
      throw TheoryViolation("AGM decode: an edge needs witness level " + std::to_string(j) +
                            " beyond the 2 log n levels maintained");
    auto it = witness.find(j);
    if (it == witness.end()) continue;
    int64_t mult = it->second.witness.multiplicity(e.first, e.second);
    if (mult > 0) res.graph.add_edge(e.first, e.second, std::ldexp(static_cast<double>(mult), j));
  }
  res.diag.output_edges = static_cast<int64_t>(res.graph.edges().size());
  double bound = static_cast<double>(levels_) * 3.0 * static_cast<double>(k_) * n_;
  if (static_cast<double>(res.diag.output_edges) > bound)
    throw TheoryViolation("AGM decode produced more edges than (2 log n + 1) * 3kn");
  return res;
}

}  // namespace eds
