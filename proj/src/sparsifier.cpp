#include "edstream/sparsifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "edstream/cuts.hpp"
#include "edstream/io.hpp"

namespace eds {

std::string to_string(const SlotKey& k) {
  return "(" + std::to_string(k.level) + "," + std::to_string(k.j) + "," + std::to_string(k.h) + ")";
}

// ------------------------------------------------------------------ provider

SparsifierProvider::SparsifierProvider(int n, const ProviderConfig& cfg) : n_(n), cfg_(cfg), live_(n) {
  if (n <= 0) throw ParameterError("sparsifier provider needs n > 0");
}

void SparsifierProvider::provision(int max_level, int max_j, int max_h, std::vector<double> delta_by_j) {
  if (max_level < 0 || max_j < 0 || max_h < 0) throw ParameterError("slot range must be non-negative");
  if (static_cast<int>(delta_by_j.size()) != max_j + 1)
    throw ParameterError("delta schedule must have one entry per Trim iteration plus the Decompose entry");
  for (double d : delta_by_j)
    if (!(d >= 0)) throw ParameterError("sparsifier error delta must be non-negative");
  max_level_ = max_level;
  max_j_ = max_j;
  max_h_ = max_h;
  delta_by_j_ = std::move(delta_by_j);
}

Blob SparsifierProvider::serialize() const {
  BlobWriter w;
  w.magic("SPRV", 1);
  w.u32(static_cast<uint32_t>(n_));
  w.u8(cfg_.mode == ProviderMode::kAgm ? 1 : 0);
  w.u64(cfg_.seed.hi);
  w.u64(cfg_.seed.lo);
  w.f64(cfg_.C);
  w.u8(cfg_.estimator == EstimatorMode::kWitness ? 1 : 0);
  w.i64(cfg_.k_override);
  w.i64(max_level_);
  w.i64(max_j_);
  w.i64(max_h_);
  w.u32(static_cast<uint32_t>(delta_by_j_.size()));
  for (double d : delta_by_j_) w.f64(d);
  w.u64(live_.edges().size());
  for (const auto& [e, m] : live_.edges()) {
    w.u32(static_cast<uint32_t>(e.first));
    w.u32(static_cast<uint32_t>(e.second));
    w.i64(m);
  }
  return w.take();
}

SparsifierProvider SparsifierProvider::deserialize(const Blob& b) {
  BlobReader r(b);
  if (r.magic("SPRV") != 1) throw FormatError("unsupported sparsifier bundle version");
  const int n = static_cast<int>(r.u32());
  ProviderConfig cfg;
  cfg.mode = r.u8() ? ProviderMode::kAgm : ProviderMode::kExact;
  cfg.seed.hi = r.u64();
  cfg.seed.lo = r.u64();
  cfg.C = r.f64();
  cfg.estimator = r.u8() ? EstimatorMode::kWitness : EstimatorMode::kExact;
  cfg.k_override = r.i64();
  SparsifierProvider p(n, cfg);
  const int64_t max_level = r.i64(), max_j = r.i64(), max_h = r.i64();
  std::vector<double> deltas(r.u32());
  for (double& d : deltas) d = r.f64();
  if (max_level >= 0) p.provision(static_cast<int>(max_level), static_cast<int>(max_j), static_cast<int>(max_h), deltas);
  const uint64_t count = r.u64();
  for (uint64_t i = 0; i < count; ++i) {
    const int u = static_cast<int>(r.u32());
    const int v = static_cast<int>(r.u32());
    const int64_t m = r.i64();
    if (u < 0 || v < 0 || u >= n || v >= n) throw FormatError("bundle edge out of range");
    p.update(u, v, m);
  }
  r.expect_done();
  return p;
}

void SparsifierProvider::feed(const MultiGraph& g) {
  if (g.n() != n_) throw DomainError("graph size does not match provider");
  for (const auto& [e, m] : g.edges()) live_.apply(e.first, e.second, m);
}

bool SparsifierProvider::in_range(const SlotKey& k) const {
  if (k.level < 0 || k.level > max_level_) return false;
  if (k.j == 0) return k.h == 0;
  return k.j >= 1 && k.j <= max_j_ && k.h >= 1 && k.h <= max_h_;
}

double SparsifierProvider::delta_for(const SlotKey& k) const {
  if (!in_range(k)) throw ProvisioningError("slot " + to_string(k) + " was not provisioned");
  return delta_by_j_.at(k.j);
}

int64_t SparsifierProvider::slots_provisioned() const {
  if (max_level_ < 0) return 0;
  int64_t per_level = 1 + static_cast<int64_t>(max_j_) * max_h_;
  return per_level * (max_level_ + 1);
}

double SparsifierProvider::analytic_words() const {
  if (cfg_.mode == ProviderMode::kExact || max_level_ < 0 || n_ < 4) return 0;
  double total = 0;
  for (int j = 0; j <= max_j_; ++j) {
    double d = delta_by_j_[j];
    if (!(d > 0 && d < 1)) continue;
    int64_t k = cfg_.k_override > 0 ? cfg_.k_override : AgmSketch::k_for(n_, d, cfg_.C);
    double count = (j == 0 ? 1.0 : static_cast<double>(max_h_)) * (max_level_ + 1);
    total += count * AgmSketch::analytic_words(n_, k);
  }
  return total;
}

Seed128 SparsifierProvider::slot_seed(const SlotKey& k) const {
  uint64_t idx = (static_cast<uint64_t>(k.level) << 40) | (static_cast<uint64_t>(k.j) << 20) |
                 static_cast<uint64_t>(k.h);
  return derive_seed(cfg_.seed, "slot", idx);
}

const WeightedGraph& SparsifierProvider::provide(const SlotKey& key, const Cluster& U) {
  if (!in_range(key)) throw ProvisioningError("slot " + to_string(key) + " was not provisioned");
  if (U.empty()) throw DomainError("cannot sparsify an empty cluster");
  auto& mask = served_[key];
  if (mask.empty()) mask.assign(n_, 0);
  for (int v : U) {
    if (v < 0 || v >= n_) throw DomainError("cluster vertex out of range");
    if (mask[v])
      throw ProvisioningError("slot " + to_string(key) + " already served a cluster containing vertex " +
                              std::to_string(v));
  }
  for (int v : U) mask[v] = 1;
  ledger_.push_back({key, U});

  auto it = decoded_.find(key);
  if (it != decoded_.end()) return it->second;

  if (cfg_.mode == ProviderMode::kExact) {
    if (!exact_) exact_ = std::make_unique<WeightedGraph>(live_.to_multigraph().to_weighted());
    return decoded_.emplace(key, *exact_).first->second;
  }

  AgmConfig ac;
  ac.delta = delta_for(key);
  ac.C = cfg_.C;
  ac.seed = slot_seed(key);
  ac.estimator = cfg_.estimator;
  ac.materialization = Materialization::kDeferred;
  ac.k_override = cfg_.k_override;
  AgmSketch sketch(n_, ac);
  for (const auto& [e, m] : live_.edges()) sketch.update(e.first, e.second, m);
  AgmResult r;
  try {
    r = sketch.decode();
  } catch (const DecodeError& err) {
    throw DecodeError("slot " + to_string(key) + ": " + err.what());
  }
  diag_[key] = r.diag;
  return decoded_.emplace(key, std::move(r.graph)).first->second;
}

// ------------------------------------------------------------------ checker

namespace {

// Error ratio of an estimate; +infinity when the truth is zero but the estimate is not.
double ratio(double estimate, double local_truth, double global_truth) {
  double diff = std::fabs(estimate - local_truth);
  if (approx_equal(estimate, local_truth)) return 0.0;
  if (!(global_truth > 0)) return std::numeric_limits<double>::infinity();
  return diff / global_truth;
}

bool within(double r, double delta) { return r <= delta * (1 + kRelTol) + kRelTol; }

struct EdgeList {
  std::vector<int> a, b;
  std::vector<double> w;
  explicit EdgeList(const WeightedGraph& g) {
    for (const auto& [e, x] : g.edges()) {
      a.push_back(e.first);
      b.push_back(e.second);
      w.push_back(x);
    }
  }
  double cut(const std::vector<char>& in) const {
    double t = 0;
    for (size_t i = 0; i < w.size(); ++i)
      if (in[a[i]] != in[b[i]]) t += w[i];
    return t;
  }
};

}  // namespace

SparsifierReport check_local(const WeightedGraph& g, const WeightedGraph& h, const Cluster& U, double delta,
                             int cap) {
  if (g.n() != h.n()) throw DomainError("sparsifier and graph differ in vertex count");
  const int k = static_cast<int>(U.size());
  if (k > cap) throw SizeError("local sparsifier check over " + std::to_string(k) + " vertices exceeds cap");
  auto in_u = detail::membership(g.n(), U, "cluster");
  std::vector<int> local(g.n(), -1);
  for (int i = 0; i < k; ++i) local[U[i]] = i;

  std::vector<double> wg(static_cast<size_t>(k) * k, 0), wh(static_cast<size_t>(k) * k, 0), out(k, 0);
  for (int i = 0; i < k; ++i) {
    for (const auto& [y, x] : g.adj(U[i])) {
      if (in_u[y])
        wg[static_cast<size_t>(i) * k + local[y]] = x;
      else
        out[i] += x;
    }
    for (const auto& [y, x] : h.adj(U[i]))
      if (in_u[y]) wh[static_cast<size_t>(i) * k + local[y]] = x;
  }

  SparsifierReport rep;
  if (k < 2) return rep;
  uint64_t mask = 0;
  double cg = 0, ch = 0, outs = 0;
  const uint64_t total = uint64_t{1} << k;
  uint64_t worst_mask = 0;
  for (uint64_t i = 1; i < total; ++i) {
    int x = __builtin_ctzll(i);
    const bool was_in = (mask >> x) & 1u;
    double dg = 0, dh = 0;
    for (int y = 0; y < k; ++y) {
      if (y == x) continue;
      const bool y_in = (mask >> y) & 1u;
      double s = (y_in == was_in) ? 1.0 : -1.0;
      dg += s * wg[static_cast<size_t>(x) * k + y];
      dh += s * wh[static_cast<size_t>(x) * k + y];
    }
    cg += dg;
    ch += dh;
    outs += was_in ? -out[x] : out[x];
    mask ^= uint64_t{1} << x;
    if (mask == total - 1) continue;  // S = U: both local cuts are zero
    ++rep.local_cuts;
    double r = ratio(ch, cg, cg + outs);
    if (r > rep.worst_local_ratio) {
      rep.worst_local_ratio = r;
      worst_mask = mask;
    }
  }
  rep.local_pass = within(rep.worst_local_ratio, delta);
  if (worst_mask)
    for (int i = 0; i < k; ++i)
      if ((worst_mask >> i) & 1u) rep.worst_local_cut.push_back(U[i]);
  return rep;
}

SparsifierReport check_global(const WeightedGraph& g, const WeightedGraph& h, double delta,
                              const SparsifierCheckOptions& opt) {
  if (g.n() != h.n()) throw DomainError("sparsifier and graph differ in vertex count");
  const int n = g.n();
  SparsifierReport rep;
  rep.global_checked = true;
  if (n < 2) return rep;
  EdgeList eg(g), eh(h);
  std::vector<char> in(n, 0), worst;
  auto consider = [&]() {
    ++rep.global_cuts;
    double tg = eg.cut(in), th = eh.cut(in);
    double r = ratio(th, tg, tg);
    if (r > rep.worst_global_ratio) {
      rep.worst_global_ratio = r;
      worst = in;
    }
  };
  if (n <= opt.cap) {
    // Vertex n-1 stays outside: cuts are symmetric under complement.
    const uint64_t total = uint64_t{1} << (n - 1);
    for (uint64_t m = 1; m < total; ++m) {
      for (int v = 0; v < n - 1; ++v) in[v] = (m >> v) & 1u;
      in[n - 1] = 0;
      consider();
    }
  } else {
    rep.global_probabilistic = true;
    for (int v = 0; v < n; ++v) {
      std::fill(in.begin(), in.end(), 0);
      in[v] = 1;
      consider();
    }
    std::mt19937_64 rng = make_rng(derive_seed(opt.seed, "global-cuts"));
    const int64_t samples = opt.samples_per_n2 * static_cast<int64_t>(n) * n;
    for (int64_t s = 0; s < samples; ++s) {
      int count = 0;
      for (int v = 0; v < n; ++v) count += (in[v] = static_cast<char>(rng() & 1u));
      if (count == 0 || count == n) continue;
      consider();
    }
  }
  rep.global_pass = within(rep.worst_global_ratio, delta);
  if (!worst.empty())
    for (int v = 0; v < n; ++v)
      if (worst[v]) rep.worst_global_cut.push_back(v);
  return rep;
}

SparsifierReport check_cluster_sparsifier(const WeightedGraph& g, const WeightedGraph& h, const Cluster& U,
                                          double delta, const SparsifierCheckOptions& opt) {
  SparsifierReport rep = check_local(g, h, U, delta, opt.cap);
  if (opt.check_global) {
    SparsifierReport glob = check_global(g, h, delta, opt);
    rep.global_pass = glob.global_pass;
    rep.worst_global_ratio = glob.worst_global_ratio;
    rep.worst_global_cut = glob.worst_global_cut;
    rep.global_checked = true;
    rep.global_probabilistic = glob.global_probabilistic;
    rep.global_cuts = glob.global_cuts;
  }
  return rep;
}

// ------------------------------------------------------------------ pass-rate experiment

SparsTrialReport spars_trial(const MultiGraph& g, const Seed128& seed, const SparsTrialOptions& opt) {
  if (opt.clusters < 1) throw ParameterError("spars_trial needs at least one cluster");
  if (opt.max_size < 2) throw ParameterError("spars_trial cluster size must allow two vertices");
  if (!(opt.delta > 0 && opt.delta < 1)) throw ParameterError("spars_trial needs delta in (0, 1)");
  const int n = g.n();
  if (n < 2) throw ParameterError("spars_trial needs at least two vertices");
  SparsTrialReport rep;
  rep.n = n;
  rep.edges = g.num_edges();
  rep.delta = opt.delta;

  std::mt19937_64 churn_rng = make_rng(derive_seed(seed, "churn"));
  EdgeStream s = stream_with_churn(g, opt.churn, churn_rng);
  rep.updates = static_cast<int64_t>(s.updates.size());
  ProviderConfig cfg;
  cfg.mode = ProviderMode::kAgm;
  cfg.seed = derive_seed(seed, "sparsifier");
  cfg.C = opt.C;
  cfg.estimator = opt.estimator;
  SparsifierProvider prov(n, cfg);
  prov.provision(opt.clusters - 1, 0, 0, {opt.delta});
  for (const auto& u : s.updates) prov.update(u);

  std::mt19937_64 cluster_rng = make_rng(derive_seed(seed, "clusters"));
  const int max_size = std::min(opt.max_size, n);
  std::vector<const WeightedGraph*> hs;
  for (int i = 0; i < opt.clusters; ++i) {
    const int size = 2 + static_cast<int>(cluster_rng() % static_cast<uint64_t>(max_size - 1));
    std::vector<int> all = range_cluster(n);
    std::shuffle(all.begin(), all.end(), cluster_rng);
    Cluster c(all.begin(), all.begin() + size);
    normalize_cluster(c);
    rep.clusters.push_back(c);
    hs.push_back(&prov.provide({i, 0, 0}, c));
  }
  const WeightedGraph gw = g.to_weighted();
  rep.reports.resize(rep.clusters.size());
  parallel_for(rep.clusters.size(), opt.threads, [&](size_t i) {
    SparsifierCheckOptions co;
    co.seed = derive_seed(seed, "check", i);
    co.samples_per_n2 = opt.samples_per_n2;
    rep.reports[i] = check_cluster_sparsifier(gw, *hs[i], rep.clusters[i], opt.delta, co);
  });
  for (const auto& r : rep.reports) {
    rep.passed += r.pass();
    rep.local_passed += r.local_pass;
    rep.global_passed += r.global_pass;
    rep.worst_local_ratio = std::max(rep.worst_local_ratio, r.worst_local_ratio);
    rep.worst_global_ratio = std::max(rep.worst_global_ratio, r.worst_global_ratio);
    rep.global_sampled |= r.global_probabilistic;
  }
  for (const auto& [key, d] : prov.agm_diagnostics()) rep.deepest_level_needed = std::max(rep.deepest_level_needed, d.deepest_needed);
  return rep;
}

std::string SparsTrialReport::to_text() const {
  std::ostringstream o;
  o << "n=" << n << "\nedges=" << edges << "\nupdates=" << updates << "\ndelta=" << fmt_real(delta)
    << "\nclusters=" << clusters.size() << "\npassed=" << passed << "\nlocal_passed=" << local_passed
    << "\nglobal_passed=" << global_passed << "\npass_rate=" << fmt_real(pass_rate())
    << "\nworst_local_ratio=" << fmt_real(worst_local_ratio) << "\nworst_global_ratio=" << fmt_real(worst_global_ratio)
    << "\nglobal_sampled=" << (global_sampled ? "true" : "false") << "\ndeepest_level_needed=" << deepest_level_needed
    << "\n";
  for (size_t i = 0; i < reports.size(); ++i)
    if (!reports[i].pass())
      o << "cluster " << i << ": size=" << clusters[i].size() << " local_ratio=" << fmt_real(reports[i].worst_local_ratio)
        << " global_ratio=" << fmt_real(reports[i].worst_global_ratio) << "\n";
  return o.str();
}

}  // namespace eds
