#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "edstream/decompose.hpp"
#include "edstream/generators.hpp"

using namespace eds;

namespace {

Seed128 S(uint64_t x) { return seed_from_u64(x); }

// Battery parameters: b = 1/8, phi = 1/10 (tau = 1.25), exhaustive BSCA.
BldParams battery_params(int n, int k = 1, double C = 40) { return params_from_phi(n, 0.125, 0.1, 1, 1, k, C); }

Partition partition_of(std::vector<Cluster> cs) {
  Partition p;
  p.clusters = std::move(cs);
  p.canonicalize();
  return p;
}

int64_t crossing_edges(const MultiGraph& g, const Partition& p) {
  auto owner = p.owner(g.n());
  int64_t x = 0;
  for (const auto& [e, m] : g.edges())
    if (owner[e.first] != owner[e.second]) x += m;
  return x;
}

// Every cluster with at least two vertices must have boundary-linked
// expansion at least phi_{k+1} (checked exhaustively on the real graph).
void require_certified(const MultiGraph& g, const Partition& part, const BldParams& p) {
  WeightedGraph w = g.to_weighted();
  for (const auto& c : part.clusters) {
    if (c.size() < 2) continue;
    BoundaryLinkedView view(w, c, p.tau());
    if (!(view.total_volume() > 0)) continue;
    MinSparsity ms = min_sparsity_bruteforce(view);
    INFO("cluster of size " << c.size());
    REQUIRE(ms.value >= p.phi_j[p.k + 1] * (1 - 1e-9));
  }
}

// Structural invariants every trace must satisfy.
void require_trace_invariants(const DecomposeTrace& t, const BldParams& p) {
  REQUIRE(t.max_depth <= p.D);
  REQUIRE(t.max_inner <= p.h_max);
  REQUIRE(t.max_break_j <= p.k);
  std::map<SlotKey, std::vector<Cluster>> uses;
  for (const auto& c : t.calls) {
    for (const auto& s : c.slots) {
      REQUIRE(s.level == c.level);
      uses[s].push_back(c.cluster);
    }
  }
  for (const auto& [key, clusters] : uses) {
    std::set<int> seen;
    for (const auto& cl : clusters)
      for (int v : cl) REQUIRE(seen.insert(v).second);
  }
}

MultiGraph pendant_blob_graph() {
  // K14 with a K5 hanging off one edge.
  MultiGraph g = disjoint_union(complete_graph(14), complete_graph(5));
  g.add_edge(0, 14);
  return g;
}

}  // namespace

TEST_CASE("parameter derivation") {
  SUBCASE("k is capped at log n with a note") {
    BldParams p = derive_params(256, 1.0 / 64, 0.1, 1, 1);
    CHECK(p.k_formula == 14);
    CHECK(p.k == 8);
    CHECK_FALSE(p.notes.empty());
    CHECK(p.D == doctest::Approx(9 * 40 * 8));
    CHECK(p.max_level == 2880);
    CHECK(p.h_max == 64);
    CHECK(p.gamma == doctest::Approx(6));
    // e^{-2 b mu D} underflows: phi is carried in log space only.
    CHECK_FALSE(p.phi_representable);
    CHECK(p.log_phi == doctest::Approx(std::log(0.1) - std::log(4.0 * 122 * 2880) - 2.0 / 64 * 122 * 2880));
    CHECK_THROWS_AS(decompose_graph(MultiGraph(256), p, BruteForceBsca()), ParameterError);
  }
  SUBCASE("preconditions are enforced") {
    CHECK_THROWS_AS(derive_params(256, 1.0 / 64, 0.2, 1, 1), ParameterError);   // eps > b log n
    CHECK_THROWS_AS(derive_params(256, 1.0 / 64, 1e-6, 1, 1), ParameterError);  // eps < n^-2
    CHECK_THROWS_AS(derive_params(256, 0.25, 0.1, 1, 1), ParameterError);       // b > 1/log n
    CHECK_THROWS_AS(derive_params(256, 1.0 / 64, 0.1, 9, 1), ParameterError);   // alpha > 1/(b log n)
    CHECK_THROWS_AS(derive_params(256, 1.0 / 64, 0.1, 1, 8), ParameterError);   // b^{-1/2} = lambda
    CHECK_THROWS_AS(params_from_phi(16, 0.1, 0.2, 1, 1), ParameterError);        // phi >= b
  }
  SUBCASE("representable closed form re-evaluates") {
    BldParams p = derive_params(16, 0.25, 0.5, 1, 1, 0.05);
    REQUIRE(p.phi_representable);
    const double mu = 3 * 0.05 + 2, D = 9 * 0.05 * 4;
    CHECK(p.phi == doctest::Approx(0.5 / (4 * mu * D) * std::exp(-2 * 0.25 * mu * D)));
    CHECK(p.phi < p.b);
    CHECK(p.log_crossing_bound(1.0) == doctest::Approx(std::log(0.5)));
  }
  SUBCASE("schedules shrink by (1 + 1/log n) alpha") {
    BldParams p = params_from_phi(16, 0.125, 0.1, 2, 1, 3);
    REQUIRE(p.phi_j.size() == 5);
    for (int j = 1; j <= 4; ++j) {
      CHECK(p.phi_j[j] == doctest::Approx(p.phi_j[j - 1] / (1.25 * 2)));
      CHECK(p.b_j[j] / p.phi_j[j] == doctest::Approx(p.tau()));
      CHECK(p.delta_j[j] == doctest::Approx(p.c * p.c * p.b_j[j] / 4));
    }
    CHECK(p.gamma == doctest::Approx(6 * 16));
    CHECK(p.psi(0) == doctest::Approx(0.1 * (1 + 1.0 / 8)));
  }
}

TEST_CASE("decompose examples") {
  BruteForceBsca bsca;
  SUBCASE("a clique is one cluster") {
    MultiGraph g = complete_graph(8);
    BldParams p = battery_params(8);
    DecomposeResult r = decompose_graph(g, p, bsca);
    CHECK(r.partition == partition_of({range_cluster(8)}));
    REQUIRE(r.trace.calls.size() == 1);
    CHECK(r.trace.calls[0].branch == Branch::kExpander);
  }
  SUBCASE("two disjoint cliques split with no crossing edges") {
    MultiGraph g = disjoint_union(complete_graph(5), complete_graph(5));
    BldParams p = battery_params(10);
    DecomposeResult r = decompose_graph(g, p, bsca);
    CHECK(r.partition == partition_of({{0, 1, 2, 3, 4}, {5, 6, 7, 8, 9}}));
    CHECK(crossing_edges(g, r.partition) == 0);
    CHECK(r.trace.calls[0].branch == Branch::kBalancedRecurse);
  }
  SUBCASE("two cliques and a bridge") {
    MultiGraph g = disjoint_union(complete_graph(8), complete_graph(8));
    g.add_edge(3, 12);
    BldParams p = battery_params(16);
    DecomposeResult r = decompose_graph(g, p, bsca);
    CHECK(r.partition.clusters.size() == 2);
    CHECK(crossing_edges(g, r.partition) == 1);
    require_certified(g, r.partition, p);
    require_trace_invariants(r.trace, p);
  }
  SUBCASE("a small sparse blob is trimmed off") {
    MultiGraph g = pendant_blob_graph();
    BldParams p = battery_params(19, 1, 2);
    DecomposeResult r = decompose_graph(g, p, bsca);
    INFO(r.trace.to_text());
    CHECK(r.partition == partition_of({range_cluster(14), {14, 15, 16, 17, 18}}));
    REQUIRE_FALSE(r.trace.calls.empty());
    const CallRecord& top = r.trace.calls[0];
    CHECK(top.branch == Branch::kTrimExpander);
    bool trimmed = false;
    for (const auto& s : top.trim) trimmed |= s.action == TrimStep::kTrimmed;
    CHECK(trimmed);
    require_certified(g, r.partition, p);
    require_trace_invariants(r.trace, p);
  }
  SUBCASE("edgeless graph gives singletons") {
    DecomposeResult r = decompose_graph(MultiGraph(6), battery_params(6), bsca);
    CHECK(r.partition.clusters.size() == 6);
  }
  SUBCASE("input validation") {
    SparsifierProvider prov(4, {});
    BldParams p = battery_params(4);
    provision_slots(prov, p);
    CHECK_THROWS_AS(decompose({}, 0, p, prov, bsca), DomainError);
    CHECK_THROWS_AS(decompose({2, 1}, 0, p, prov, bsca), DomainError);
  }
}

TEST_CASE("decompose properties on random graphs") {
  std::mt19937_64 rng = make_rng(S(11));
  BruteForceBsca bsca;
  for (int t = 0; t < 40; ++t) {
    const int n = 8 + t % 9;
    MultiGraph g = erdos_renyi(n, 0.15 + 0.02 * (t % 10), rng);
    for (int k : {1, 2}) {
      BldParams p = battery_params(n, k);
      SparsifierProvider prov(n, {});
      provision_slots(prov, p);
      prov.feed(g);
      DecomposeResult r = decompose(range_cluster(n), 0, p, prov, bsca);
      r.partition.validate(n);
      require_certified(g, r.partition, p);
      require_trace_invariants(r.trace, p);
      // Slot consumption never exceeds the provisioned budget.
      const double budget = (p.D + 1) + (p.D + 1) * (p.k + 1) * p.h_max;
      CHECK(prov.slots_consumed() <= budget);
      CHECK(prov.slots_consumed() <= prov.slots_provisioned());
    }
  }
}

TEST_CASE("decompose over streams") {
  BruteForceBsca bsca;
  std::mt19937_64 rng = make_rng(S(12));
  SUBCASE("empty stream") {
    EdgeStream s;
    s.n = 8;
    StreamDecomposeResult r = decompose_stream(s, battery_params(8), {}, bsca);
    CHECK(r.result.partition.clusters.size() == 8);
  }
  SUBCASE("full churn") {
    EdgeStream s = full_churn_stream(complete_graph(8), rng);
    s.n = 8;
    ProviderConfig cfg;
    cfg.mode = ProviderMode::kAgm;
    cfg.seed = S(13);
    StreamDecomposeResult r = decompose_stream(s, battery_params(8), cfg, bsca);
    CHECK(r.result.partition.clusters.size() == 8);
  }
  SUBCASE("AGM slots reproduce the exact decomposition") {
    int agree = 0;
    for (int t = 0; t < 20; ++t) {
      MultiGraph g = disjoint_union(erdos_renyi(7, 0.7, rng), erdos_renyi(7, 0.7, rng));
      g.add_edge(static_cast<int>(rng() % 7), 7 + static_cast<int>(rng() % 7));
      BldParams p = battery_params(14);
      EdgeStream s = stream_with_churn(g, 0.3, rng);
      s.n = 14;
      ProviderConfig cfg;
      cfg.mode = ProviderMode::kAgm;
      cfg.seed = S(100 + t);
      StreamDecomposeResult a = decompose_stream(s, p, cfg, bsca);
      DecomposeResult e = decompose_graph(g, p, bsca);
      agree += a.result.partition == e.partition;
      CHECK(a.slots_consumed <= a.slots_provisioned);
      CHECK(a.sketch_words > 0);
    }
    CHECK(agree >= 18);
  }
}

TEST_CASE("offline removal-based sequence") {
  SUBCASE("disjoint cliques: level 2 is all singletons") {
    MultiGraph g = disjoint_union(complete_graph(6), complete_graph(6));
    auto lv = red_offline(g, {});
    REQUIRE(lv.size() == 2);
    CHECK(lv[0].partition == partition_of({range_cluster(6), {6, 7, 8, 9, 10, 11}}));
    CHECK(lv[0].crossing == 0);
    CHECK(lv[1].residual.num_edges() == 0);
    CHECK(lv[1].partition.clusters.size() == 12);
  }
  SUBCASE("residual of level i+1 is G minus the clusters of level i") {
    std::mt19937_64 rng = make_rng(S(14));
    for (int t = 0; t < 10; ++t) {
      MultiGraph g = erdos_renyi(14, 0.3, rng);
      RedOptions opt;
      opt.levels = 3;
      opt.phi = 0.02;
      auto lv = red_offline(g, opt);
      REQUIRE(lv.size() == 3);
      CHECK(lv[0].residual == g);
      for (int i = 0; i + 1 < 3; ++i) {
        CHECK(lv[i + 1].residual == remove_intra_cluster_edges(lv[i].residual, lv[i].partition));
        CHECK(lv[i].crossing == lv[i + 1].residual.num_edges());
      }
      // Every cluster of every level is a phi-expander in the plain induced subgraph.
      for (const auto& l : lv) {
        WeightedGraph w = l.residual.to_weighted();
        for (const auto& c : l.partition.clusters) {
          if (c.size() < 2) continue;
          BoundaryLinkedView view(w, c, 0);
          if (!(view.total_volume() > 0)) continue;
          CHECK(min_sparsity_bruteforce(view).value >= opt.phi * (1 - 1e-9));
        }
      }
    }
  }
  SUBCASE("remove_intra_cluster_edges") {
    MultiGraph g = cycle_graph(4);
    MultiGraph r = remove_intra_cluster_edges(g, partition_of({{0, 1}, {2, 3}}));
    CHECK(r.num_edges() == 2);
  }
}
