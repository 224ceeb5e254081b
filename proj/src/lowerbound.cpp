#include "edstream/lowerbound.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "edstream/cuts.hpp"
#include "edstream/generators.hpp"
#include "edstream/io.hpp"
#include "edstream/spectral.hpp"
#include "edstream/stream.hpp"

namespace eds {

// ------------------------------------------------------------------ params

double HardParams::block_p() const { return std::min(1.0, 4.0 * d / m); }

void HardParams::validate() const {
  if (!(3 <= d && d < m && m < n)) throw ParameterError("hard instance needs 3 <= d < m < n");
  if (m % 2 != 0) throw ParameterError("hard instance needs m even");
  if (m / 2 < 2) throw ParameterError("hard instance needs m/2 >= 2");
  if (n % 2 != 0) throw ParameterError("hard instance needs n even");
  if (n % m != 0) throw ParameterError("hard instance needs m | n");
  if (n % (d * m) != 0) throw ParameterError("hard instance needs (d m) | n for the T-partition");
  if (d >= n / 2) throw ParameterError("T-graph degree d must be below n/2");
  if ((static_cast<int64_t>(n / 2) * d) % 2 != 0) throw ParameterError("d-regular T-graph needs (n/2) d even");
}

Cluster HardInstance::range(int a, int b) {
  Cluster c;
  for (int v = a; v < b; ++v) c.push_back(v);
  return c;
}

MultiGraph HardInstance::left_graph() const {
  const int half = params.n / 2;
  MultiGraph g(half);
  for (const auto& [e, m] : graph.edges())
    if (e.second < half) g.add_edge(e.first, e.second, m);
  return g;
}

std::vector<VertexPair> HardInstance::st_edges(int k) const { return hard_st_edges(params, k); }

std::vector<VertexPair> hard_st_edges(const HardParams& p, int k) {
  if (k < 0 || k >= p.block_size()) throw ParameterError("important index out of range");
  std::vector<VertexPair> out;
  const int half = p.n / 2;
  for (int i = 0; i < p.blocks(); ++i) {
    const int group = i / p.d;
    for (int t = 0; t < p.group_size(); ++t) out.push_back({p.s(i, k), half + group * p.group_size() + t});
  }
  return out;
}

MultiGraph hard_tgraph(const HardParams& p, double* lambda2, std::vector<std::string>* warnings) {
  p.validate();
  const int attempts = 20;
  for (int a = 0; a < attempts; ++a) {
    std::mt19937_64 rng = make_rng(derive_seed(p.seed, "tgraph", static_cast<uint64_t>(a)));
    MultiGraph t = random_regular(p.n / 2, p.d, rng);
    const double l2 = normalized_lambda2(t.to_weighted());
    if (l2 / 2 >= p.psi_target) {
      if (lambda2) *lambda2 = l2;
      if (warnings && a > 0)
        warnings->push_back("T-graph accepted after " + std::to_string(a + 1) + " draws");
      return t;
    }
  }
  throw Error("no d-regular T-graph with lambda_2/2 >= " + fmt_real(p.psi_target) + " in " +
              std::to_string(attempts) + " draws");
}

HardInstance hard_from_factorization(const HardParams& p, const MultiGraph& left, int K) {
  p.validate();
  const int half = p.n / 2;
  if (left.n() != half) throw DomainError("left graph must have n/2 vertices");
  if (K < 0 || K >= p.block_size()) throw DomainError("important index K out of range");
  for (int v = 0; v < half; ++v)
    if (left.loops(v)) throw DomainError("left graph must be loop-free");
  for (const auto& [e, m] : left.edges())
    if (e.first / p.block_size() != e.second / p.block_size() || m != 1)
      throw DomainError("left graph must be a disjoint union of simple blocks");

  HardInstance inst;
  inst.params = p;
  inst.K = K;
  inst.tgraph = hard_tgraph(p, &inst.t_lambda2, &inst.warnings);
  inst.psi_t = inst.t_lambda2 / 2;
  if (4.0 * p.d / p.m > 1) inst.warnings.push_back("block probability 4d/m capped at 1");

  inst.graph = MultiGraph(p.n);
  for (const auto& [e, m] : left.edges()) inst.graph.add_edge(e.first, e.second, m);
  for (const auto& [e, m] : inst.tgraph.edges()) inst.graph.add_edge(half + e.first, half + e.second, m);
  for (const auto& [s, t] : hard_st_edges(p, K)) inst.graph.add_edge(s, t);

  for (int i = 0; i < p.blocks(); ++i) inst.important_vertices.push_back(p.s(i, K));
  std::vector<char> important(p.n, 0);
  for (int v : inst.important_vertices) important[v] = 1;
  for (const auto& [e, m] : left.edges())
    if (important[e.first] || important[e.second]) inst.important_edges.push_back(e);

  // Structural invariants.
  std::vector<int64_t> s_edges(p.n, 0);
  int64_t st = 0;
  for (const auto& [e, m] : inst.graph.edges())
    if (e.first < half && e.second >= half) {
      s_edges[e.first] += m;
      s_edges[e.second] += m;
      st += m;
    }
  if (st != static_cast<int64_t>(p.d) * p.n / 2) throw TheoryViolation("|E(S,T)| differs from dn/2");
  for (int t = half; t < p.n; ++t)
    if (s_edges[t] != p.d) throw TheoryViolation("a vertex of T does not have exactly d edges into S");
  for (int s = 0; s < half; ++s) {
    const int64_t want = important[s] ? static_cast<int64_t>(p.d) * p.m / 2 : 0;
    if (s_edges[s] != want) throw TheoryViolation("E(S,T) is not incident exactly on the important vertices");
  }
  for (int t = 0; t < half; ++t)
    if (inst.tgraph.degree(t) != p.d) throw TheoryViolation("T-graph is not d-regular");
  return inst;
}

HardInstance gen_hard(const HardParams& p) {
  p.validate();
  const int half = p.n / 2;
  MultiGraph left(half);
  for (int i = 0; i < p.blocks(); ++i) {
    std::mt19937_64 rng = make_rng(derive_seed(p.seed, "block", static_cast<uint64_t>(i)));
    MultiGraph b = erdos_renyi(p.block_size(), p.block_p(), rng);
    for (const auto& [e, m] : b.edges()) left.add_edge(p.s(i, e.first), p.s(i, e.second), m);
  }
  std::mt19937_64 krng = make_rng(derive_seed(p.seed, "K"));
  const int K = static_cast<int>(std::uniform_int_distribution<int>(0, p.block_size() - 1)(krng));
  return hard_from_factorization(p, left, K);
}

void write_hard_meta(std::ostream& out, const HardInstance& inst) {
  const HardParams& p = inst.params;
  out << "n=" << p.n << "\n";
  out << "d=" << p.d << "\n";
  out << "m=" << p.m << "\n";
  out << "seed=" << seed_to_string(p.seed) << "\n";
  out << "psi_target=" << fmt_real(p.psi_target) << "\n";
  out << "K=" << inst.K << "\n";
  out << "block_size=" << p.block_size() << "\n";
  out << "blocks=" << p.blocks() << "\n";
  out << "t_lambda2=" << fmt_real(inst.t_lambda2) << "\n";
  out << "psi_t=" << fmt_real(inst.psi_t) << "\n";
  out << "important_vertices=";
  for (size_t i = 0; i < inst.important_vertices.size(); ++i) out << (i ? " " : "") << inst.important_vertices[i];
  out << "\n";
  out << "important_edges=" << inst.important_edges.size() << "\n";
  for (const auto& w : inst.warnings) out << "warning=" << w << "\n";
}

HardMeta read_hard_meta(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw FormatError("metadata line without '=': " + line);
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  auto need = [&](const std::string& k) -> const std::string& {
    auto it = kv.find(k);
    if (it == kv.end()) throw FormatError("metadata is missing key " + k);
    return it->second;
  };
  HardMeta m;
  try {
    m.params.n = std::stoi(need("n"));
    m.params.d = std::stoi(need("d"));
    m.params.m = std::stoi(need("m"));
    m.params.seed = seed_from_string(need("seed"));
    m.params.psi_target = std::stod(need("psi_target"));
    m.K = std::stoi(need("K"));
  } catch (const std::invalid_argument&) {
    throw FormatError("malformed number in hard-instance metadata");
  } catch (const std::out_of_range&) {
    throw FormatError("number out of range in hard-instance metadata");
  }
  return m;
}

// ------------------------------------------------------------------ ER blocks

ErBlockReport check_er_block(int N, double p, int trials, const Seed128& seed, int cap) {
  if (N < 10) throw ParameterError("ER block check needs N >= 10");
  if (!(p >= 0 && p <= 1)) throw ParameterError("edge probability must lie in [0,1]");
  ErBlockReport r;
  r.N = N;
  r.p = p;
  r.trials = trials;
  r.exact = N <= cap;
  r.bound = 4.0 * N * std::exp(-p * N / 600.0);
  r.min_expansion = INFINITY;
  const double dbar = p * (N - 1);
  const double two_d = p * N;
  for (int t = 0; t < trials; ++t) {
    std::mt19937_64 rng = make_rng(derive_seed(seed, "er-block", static_cast<uint64_t>(t)));
    MultiGraph g = erdos_renyi(N, p, rng);
    bool deg_bad = false, conc = true;
    bool isolated = false;
    for (int v = 0; v < N; ++v) {
      const double dv = static_cast<double>(g.degree(v));
      deg_bad |= std::abs(dv - dbar) > dbar / 11 * (1 + kRelTol);
      conc &= std::abs(dv - two_d) <= two_d / 10 * (1 + kRelTol);
      isolated |= dv == 0;
    }
    double expansion;
    if (r.exact) {
      MinSparsity ms = min_sparsity_bruteforce(g.to_weighted(), cap);
      expansion = ms.degenerate ? 0.0 : ms.value;
    } else {
      // Cheeger: Phi >= lambda_2 / 2. An isolated vertex leaves lambda_2 = 0.
      expansion = isolated ? 0.0 : normalized_lambda2(g.to_weighted()) / 2;
    }
    const bool exp_bad = expansion < 1.0 / 3;
    r.min_expansion = std::min(r.min_expansion, expansion);
    r.expansion_failures += exp_bad;
    r.degree_failures += deg_bad;
    r.bad_events += exp_bad || deg_bad;
    r.within_2d += conc;
  }
  return r;
}

std::string ErBlockReport::to_text() const {
  std::ostringstream os;
  os << "er.N=" << N << "\n";
  os << "er.p=" << fmt_real(p) << "\n";
  os << "er.trials=" << trials << "\n";
  os << "er.expansion_method=" << (exact ? "exhaustive" : "cheeger-lambda2") << "\n";
  os << "er.expansion_failures=" << expansion_failures << "\n";
  os << "er.degree_failures=" << degree_failures << "\n";
  os << "er.bad_events=" << bad_events << "\n";
  os << "er.frequency=" << fmt_real(frequency()) << "\n";
  os << "er.bound=" << fmt_real(bound) << "\n";
  os << "er.bound_vacuous=" << (bound >= 1 ? "true" : "false") << "\n";
  os << "er.within_2d=" << within_2d << "\n";
  os << "er.min_expansion=" << (std::isinf(min_expansion) ? "inf" : fmt_real(min_expansion)) << "\n";
  return os.str();
}

// ------------------------------------------------------------------ special edges

SpecialEdgeReport check_special_edges(const HardInstance& inst, const Partition& part, double eps, double phi) {
  const HardParams& p = inst.params;
  part.validate(p.n);
  auto owner = part.owner(p.n);
  SpecialEdgeReport r;
  r.important = static_cast<int64_t>(inst.important_edges.size());
  for (const auto& e : inst.important_edges) r.crossing_important += owner[e.first] != owner[e.second];
  r.fraction = r.important ? static_cast<double>(r.crossing_important) / static_cast<double>(r.important) : 0.0;

  if (!(eps <= 1e-5 * inst.psi_t * p.d / p.m)) r.unmet.push_back("eps <= 1e-5 psi d / m");
  if (!(phi >= 11.0 / p.m)) r.unmet.push_back("phi >= 11/m");
  if (!(p.n >= 100 * p.m)) r.unmet.push_back("n >= 100 m");
  if (!(p.m >= 500)) r.unmet.push_back("m >= 500");
  if (r.unmet.empty()) {
    // Blocks must be (1 +- 1/10) 2d-regular 1/3-expanders.
    const double two_d = 2.0 * p.d;
    for (int i = 0; i < p.blocks() && r.unmet.empty(); ++i) {
      Cluster b = inst.block(i);
      MultiGraph g(p.block_size());
      for (const auto& [e, m] : inst.graph.edges())
        if (e.first / p.block_size() == i && e.second / p.block_size() == i && e.second < p.n / 2)
          g.add_edge(e.first - b.front(), e.second - b.front(), m);
      bool ok = true;
      for (int v = 0; v < g.n(); ++v) ok &= std::abs(g.degree(v) - two_d) <= two_d / 10;
      if (ok) {
        bool isolated = false;
        for (int v = 0; v < g.n(); ++v) isolated |= g.degree(v) == 0;
        ok = !isolated && normalized_lambda2(g.to_weighted()) / 2 >= 1.0 / 3;
      }
      if (!ok) r.unmet.push_back("block " + std::to_string(i) + " is not a certified near-regular 1/3-expander");
    }
  }
  r.preconditions_met = r.unmet.empty();
  return r;
}

// ------------------------------------------------------------------ algorithms for the game

namespace {

class OfflineExactRed : public StreamingRed {
 public:
  OfflineExactRed(int n, RedOptions opt) : live_(n), opt_(opt) {}

  void update(int u, int v, int64_t delta) override { live_.apply(u, v, delta); }

  Blob serialize() const override {
    BlobWriter w;
    w.magic("OXRD", 1);
    w.u32(static_cast<uint32_t>(live_.n()));
    w.u32(static_cast<uint32_t>(opt_.levels));
    w.f64(opt_.phi);
    w.f64(opt_.tau);
    w.u32(static_cast<uint32_t>(opt_.k));
    w.u32(static_cast<uint32_t>(opt_.cap));
    w.u64(live_.edges().size());
    for (const auto& [e, m] : live_.edges()) {
      w.u32(static_cast<uint32_t>(e.first));
      w.u32(static_cast<uint32_t>(e.second));
      w.i64(m);
    }
    return w.take();
  }

  static std::unique_ptr<StreamingRed> restore(const Blob& b) {
    BlobReader r(b);
    if (r.magic("OXRD") != 1) throw FormatError("unsupported offline-RED blob version");
    const int n = static_cast<int>(r.u32());
    RedOptions opt;
    opt.levels = static_cast<int>(r.u32());
    opt.phi = r.f64();
    opt.tau = r.f64();
    opt.k = static_cast<int>(r.u32());
    opt.cap = static_cast<int>(r.u32());
    auto alg = std::make_unique<OfflineExactRed>(n, opt);
    const uint64_t count = r.u64();
    for (uint64_t i = 0; i < count; ++i) {
      const int u = static_cast<int>(r.u32());
      const int v = static_cast<int>(r.u32());
      alg->update(u, v, r.i64());
    }
    r.expect_done();
    return alg;
  }

  std::vector<Partition> output() const override {
    std::vector<Partition> out;
    for (auto& l : red_offline(live_.to_multigraph(), opt_)) out.push_back(std::move(l.partition));
    return out;
  }

  std::string name() const override { return "offline-exact-red"; }

 private:
  LiveGraph live_;
  RedOptions opt_;
};

class AllSingletonRed : public StreamingRed {
 public:
  explicit AllSingletonRed(int n) : n_(n) {}
  void update(int, int, int64_t) override {}
  Blob serialize() const override {
    BlobWriter w;
    w.magic("SNGL", 1);
    w.u32(static_cast<uint32_t>(n_));
    return w.take();
  }
  static std::unique_ptr<StreamingRed> restore(const Blob& b) {
    BlobReader r(b);
    if (r.magic("SNGL") != 1) throw FormatError("unsupported singleton-RED blob version");
    auto alg = std::make_unique<AllSingletonRed>(static_cast<int>(r.u32()));
    r.expect_done();
    return alg;
  }
  std::vector<Partition> output() const override {
    return {Partition::singletons(n_), Partition::singletons(n_)};
  }
  std::string name() const override { return "all-singletons"; }

 private:
  int n_;
};

}  // namespace

RedFactory offline_exact_red(const RedOptions& opt) {
  if (opt.levels != 2) throw ParameterError("the recover game uses a 2-level sequence");
  return {[opt](int n) -> std::unique_ptr<StreamingRed> { return std::make_unique<OfflineExactRed>(n, opt); },
          &OfflineExactRed::restore};
}

RedFactory all_singleton_red() {
  return {[](int n) -> std::unique_ptr<StreamingRed> { return std::make_unique<AllSingletonRed>(n); },
          &AllSingletonRed::restore};
}

// ------------------------------------------------------------------ recover game

Blob recover_alice(const RedFactory& alg, const HardParams& p, const MultiGraph& left) {
  p.validate();
  if (!alg.create) throw Error("algorithm cannot be instantiated");
  auto a = alg.create(p.n);
  for (const auto& [e, m] : left.edges()) a->update(e.first, e.second, m);
  const MultiGraph t = hard_tgraph(p);
  const int half = p.n / 2;
  for (const auto& [e, m] : t.edges()) a->update(half + e.first, half + e.second, m);
  return a->serialize();
}

BobOutput recover_bob(const RedFactory& alg, const HardParams& p, const Blob& message, double eps, int threads) {
  p.validate();
  if (!alg.restore) throw Error("algorithm state cannot be cloned: no restore from a serialised blob");
  const int clones = p.block_size();
  BobOutput out;
  out.outputs.resize(clones);
  out.non_isolated.assign(clones, 0);
  out.used.assign(clones, 0);
  parallel_for(static_cast<size_t>(clones), threads, [&](size_t k) {
    auto a = alg.restore(message);
    for (const auto& [s, t] : hard_st_edges(p, static_cast<int>(k))) a->update(s, t, 1);
    out.outputs[k] = a->output();
    if (out.outputs[k].size() < 2) throw Error("RED algorithm returned fewer than two levels");
  });
  const double threshold = 3 * eps * p.d * p.n;
  std::set<VertexPair> F;
  for (int k = 0; k < clones; ++k) {
    const Partition& u2 = out.outputs[k][1];
    std::vector<char> non_isolated(p.n, 0);
    for (const auto& c : u2.clusters)
      if (c.size() >= 2)
        for (int v : c) non_isolated[v] = 1;
    int64_t count = 0;
    for (char x : non_isolated) count += x;
    out.non_isolated[k] = count;
    if (static_cast<double>(count) > threshold) continue;
    out.used[k] = 1;
    for (int i = 0; i < p.blocks(); ++i) {
      const int hub = p.s(i, k);
      for (int r = 0; r < p.block_size(); ++r) {
        const int s = p.s(i, r);
        if (s != hub && non_isolated[s]) F.insert(sorted_pair(s, hub));
      }
    }
  }
  out.F.assign(F.begin(), F.end());
  return out;
}

RecoverOutcome recover_sim(const RedFactory& alg, const HardInstance& inst, double eps, int threads) {
  const HardParams& p = inst.params;
  const MultiGraph left = inst.left_graph();
  const Blob message = recover_alice(alg, p, left);
  BobOutput bob = recover_bob(alg, p, message, eps, threads);

  RecoverOutcome o;
  o.algorithm = alg.create ? alg.create(p.n)->name() : "?";
  o.n = p.n;
  o.d = p.d;
  o.m = p.m;
  o.eps = eps;
  o.xi = eps * p.m;
  o.message_bits = static_cast<int64_t>(message.size()) * 8;
  o.left_edges = left.num_edges();
  o.f_size = static_cast<int64_t>(bob.F.size());
  for (const auto& e : bob.F) o.f_hits += left.multiplicity(e.first, e.second) > 0;
  o.clones = p.block_size();
  for (size_t k = 0; k < bob.used.size(); ++k) {
    o.clones_used += bob.used[k];
    o.max_non_isolated = std::max(o.max_non_isolated, bob.non_isolated[k]);
  }
  o.flag_small = static_cast<double>(o.f_size) <= 6 * o.xi * static_cast<double>(o.left_edges);
  o.flag_learns = 10 * o.f_hits >= o.left_edges && o.left_edges > 0;
  o.special_fraction = check_special_edges(inst, bob.outputs[inst.K][0]).fraction;
  return o;
}

std::string RecoverOutcome::to_text() const {
  std::ostringstream os;
  os << "recover.algorithm=" << algorithm << "\n";
  os << "recover.n=" << n << "\n";
  os << "recover.d=" << d << "\n";
  os << "recover.m=" << m << "\n";
  os << "recover.eps=" << fmt_real(eps) << "\n";
  os << "recover.xi=" << fmt_real(xi) << "\n";
  os << "recover.message_bits=" << message_bits << "\n";
  os << "recover.left_edges=" << left_edges << "\n";
  os << "recover.f_size=" << f_size << "\n";
  os << "recover.f_hits=" << f_hits << "\n";
  os << "recover.clones=" << clones << "\n";
  os << "recover.clones_used=" << clones_used << "\n";
  os << "recover.max_non_isolated=" << max_non_isolated << "\n";
  os << "recover.flag_small=" << (flag_small ? "true" : "false") << "\n";
  os << "recover.flag_learns=" << (flag_learns ? "true" : "false") << "\n";
  os << "recover.special_fraction=" << fmt_real(special_fraction) << "\n";
  return os.str();
}

}  // namespace eds
