#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <sstream>

#include "edstream/lowerbound.hpp"

using namespace eds;

namespace {

HardParams params(int n, int m, int d, uint64_t seed) {
  HardParams p;
  p.n = n;
  p.m = m;
  p.d = d;
  p.seed = seed_from_u64(seed);
  return p;
}

// Independent structural oracle over the edge list.
void require_structure(const HardInstance& inst) {
  const HardParams& p = inst.params;
  const int half = p.n / 2;
  std::vector<int64_t> to_s(p.n, 0), to_t(p.n, 0);
  int64_t st = 0;
  std::set<int> touching_t;
  for (const auto& [e, m] : inst.graph.edges()) {
    bool a = e.first < half, b = e.second < half;
    if (a == b) {
      if (a) REQUIRE(e.first / p.block_size() == e.second / p.block_size());
      continue;
    }
    int s = a ? e.first : e.second, t = a ? e.second : e.first;
    to_s[t] += m;
    to_t[s] += m;
    st += m;
    touching_t.insert(s);
  }
  REQUIRE(st == static_cast<int64_t>(p.d) * p.n / 2);
  for (int t = half; t < p.n; ++t) REQUIRE(to_s[t] == p.d);
  REQUIRE(Cluster(touching_t.begin(), touching_t.end()) == inst.important_vertices);
  for (int v : inst.important_vertices) REQUIRE(to_t[v] == static_cast<int64_t>(p.d) * p.m / 2);
  // E*: edges of G[S] with an endpoint in V*.
  std::set<int> vstar(inst.important_vertices.begin(), inst.important_vertices.end());
  std::vector<VertexPair> estar;
  for (const auto& [e, m] : inst.graph.edges())
    if (e.second < half && (vstar.count(e.first) || vstar.count(e.second))) estar.push_back(e);
  REQUIRE(estar == inst.important_edges);
}

// A RED stand-in that ignores its input and always reports the same U_2.
class FixedRed : public StreamingRed {
 public:
  explicit FixedRed(int n) : n_(n) {}
  void update(int, int, int64_t) override {}
  Blob serialize() const override {
    BlobWriter w;
    w.magic("FIXD", 1);
    w.u32(static_cast<uint32_t>(n_));
    return w.take();
  }
  std::vector<Partition> output() const override {
    Partition p2 = Partition::singletons(n_);
    // Merge vertices 0..3 and n/2..n/2+1 into two clusters.
    Partition out;
    out.clusters = {{0, 1, 2, 3}, {n_ / 2, n_ / 2 + 1}};
    for (int v = 4; v < n_; ++v)
      if (v != n_ / 2 && v != n_ / 2 + 1) out.clusters.push_back({v});
    out.canonicalize();
    return {p2, out};
  }
  std::string name() const override { return "fixed"; }

 private:
  int n_;
};

RedFactory fixed_red() {
  return {[](int n) -> std::unique_ptr<StreamingRed> { return std::make_unique<FixedRed>(n); },
          [](const Blob& b) -> std::unique_ptr<StreamingRed> {
            BlobReader r(b);
            r.magic("FIXD");
            return std::make_unique<FixedRed>(static_cast<int>(r.u32()));
          }};
}

}  // namespace

TEST_CASE("hard parameters") {
  CHECK_NOTHROW(params(480, 24, 4, 1).validate());
  CHECK_NOTHROW(params(96, 16, 3, 1).validate());
  CHECK_THROWS_AS(params(480, 24, 2, 1).validate(), ParameterError);   // d < 3
  CHECK_THROWS_AS(params(480, 25, 4, 1).validate(), ParameterError);   // m odd
  CHECK_THROWS_AS(params(400, 24, 4, 1).validate(), ParameterError);   // m does not divide n
  CHECK_THROWS_AS(params(144, 24, 4, 1).validate(), ParameterError);   // dm does not divide n
  CHECK(params(480, 24, 4, 1).block_p() == doctest::Approx(4.0 * 4 / 24));
}

TEST_CASE("hard instance structure") {
  SUBCASE("n = 480, m = 24, d = 4 over many seeds") {
    for (uint64_t seed = 0; seed < 20; ++seed) {
      HardInstance inst = gen_hard(params(480, 24, 4, seed));
      require_structure(inst);
      CHECK(inst.st_edges(inst.K).size() == 960);
      CHECK(inst.psi_t > 0);
    }
  }
  SUBCASE("(G', K) round trip") {
    HardInstance inst = gen_hard(params(96, 16, 3, 7));
    HardInstance again = hard_from_factorization(inst.params, inst.left_graph(), inst.K);
    CHECK(again.graph == inst.graph);
    CHECK(again.important_edges == inst.important_edges);
    // Same G' with a different K moves only the S-T edges.
    const int k2 = (inst.K + 1) % inst.params.block_size();
    HardInstance other = hard_from_factorization(inst.params, inst.left_graph(), k2);
    CHECK(other.left_graph() == inst.left_graph());
    CHECK(other.tgraph == inst.tgraph);
    CHECK_FALSE(other.graph == inst.graph);
    require_structure(other);
  }
  SUBCASE("metadata round trip") {
    HardInstance inst = gen_hard(params(96, 16, 3, 8));
    std::stringstream ss;
    write_hard_meta(ss, inst);
    HardMeta m = read_hard_meta(ss);
    CHECK(m.K == inst.K);
    CHECK(m.params.seed == inst.params.seed);
    CHECK(gen_hard(m.params).graph == inst.graph);
  }
  SUBCASE("malformed left graph") {
    HardParams p = params(96, 16, 3, 9);
    MultiGraph left(48);
    left.add_edge(0, 8);  // across blocks
    CHECK_THROWS_AS(hard_from_factorization(p, left, 0), DomainError);
  }
  SUBCASE("determinism") {
    CHECK(gen_hard(params(96, 16, 3, 5)).graph == gen_hard(params(96, 16, 3, 5)).graph);
  }
}

TEST_CASE("ER block check") {
  SUBCASE("near-clique blocks always expand") {
    ErBlockReport r = check_er_block(16, 0.9, 200, seed_from_u64(1));
    CHECK(r.exact);
    CHECK(r.expansion_failures == 0);
    CHECK(r.min_expansion >= 1.0 / 3);
    MESSAGE("N=16 p=0.9: degree failures " << r.degree_failures << "/200");
  }
  SUBCASE("empty blocks never expand") {
    ErBlockReport r = check_er_block(12, 0.0, 10, seed_from_u64(2));
    CHECK(r.expansion_failures == 10);
    CHECK(r.frequency() == 1);
  }
  SUBCASE("spectral path reports frequency and bound") {
    ErBlockReport r = check_er_block(64, 0.5, 100, seed_from_u64(3));
    CHECK_FALSE(r.exact);
    CHECK(r.bound > 1);
    CHECK(r.frequency() <= r.bound);
    CHECK(r.to_text().find("er.bound_vacuous=true") != std::string::npos);
  }
  SUBCASE("degree concentration at large 2d") {
    ErBlockReport r = check_er_block(500, 0.8, 10, seed_from_u64(4));
    CHECK(r.within_2d >= 9);
    CHECK(r.degree_failures == 0);
  }
  CHECK_THROWS_AS(check_er_block(9, 0.5, 1, seed_from_u64(5)), ParameterError);
}

TEST_CASE("special edges") {
  HardInstance inst = gen_hard(params(96, 16, 3, 11));
  const int n = inst.params.n;
  SpecialEdgeReport whole = check_special_edges(inst, Partition::whole(n));
  CHECK(whole.fraction == 0);
  SpecialEdgeReport single = check_special_edges(inst, Partition::singletons(n));
  CHECK(single.fraction == 1);
  CHECK(single.important == static_cast<int64_t>(inst.important_edges.size()));
  CHECK_FALSE(single.preconditions_met);  // m >= 500 and n >= 100 m fail at this size
  CHECK(single.unmet.size() >= 2);
}

TEST_CASE("recover game") {
  HardInstance inst = gen_hard(params(96, 16, 3, 12));
  SUBCASE("all-singleton strawman learns nothing") {
    RecoverOutcome o = recover_sim(all_singleton_red(), inst, 0.1);
    CHECK(o.f_size == 0);
    CHECK_FALSE(o.flag_learns);
    CHECK(o.flag_small);
    CHECK(o.special_fraction == 1);
    Blob b = recover_alice(all_singleton_red(), inst.params, inst.left_graph());
    CHECK(o.message_bits == static_cast<int64_t>(b.size()) * 8);
  }
  SUBCASE("identical clone outputs give a union of shifted pair sets") {
    Blob b = recover_alice(fixed_red(), inst.params, inst.left_graph());
    BobOutput bob = recover_bob(fixed_red(), inst.params, b, 0.1);
    // Non-isolated S vertices are 0..3, all in block 0 of size 8.
    const int64_t clones = inst.params.block_size();
    CHECK(static_cast<int64_t>(bob.F.size()) <= clones * bob.non_isolated[0]);
    for (const auto& [u, v] : bob.F) {
      CHECK(u / 8 == 0);
      CHECK(v / 8 == 0);
    }
  }
  SUBCASE("offline exact RED oracle") {
    RedOptions opt;
    opt.phi = 0.005;
    RedFactory alg = offline_exact_red(opt);
    Blob b = recover_alice(alg, inst.params, inst.left_graph());
    RecoverOutcome o = recover_sim(alg, inst, 0.1, 2);
    CHECK(o.message_bits == static_cast<int64_t>(b.size()) * 8);
    CHECK(o.left_edges == inst.left_graph().num_edges());
    CHECK(o.f_hits <= o.f_size);
    CHECK(o.clones == 8);
    std::string text = o.to_text();
    for (const char* key : {"recover.flag_small=", "recover.flag_learns=", "recover.special_fraction=",
                            "recover.message_bits="})
      CHECK(text.find(key) != std::string::npos);
    MESSAGE(text);
  }
  SUBCASE("missing restore is a clone failure") {
    RedFactory broken = all_singleton_red();
    broken.restore = nullptr;
    Blob b = recover_alice(broken, inst.params, inst.left_graph());
    CHECK_THROWS_AS(recover_bob(broken, inst.params, b, 0.1), Error);
  }
}
