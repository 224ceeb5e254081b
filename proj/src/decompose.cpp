#include "edstream/decompose.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <sstream>

#include "edstream/cuts.hpp"

namespace eds {

// ------------------------------------------------------------------ params

double BldParams::log_crossing_bound(double volume) const {
  if (!(volume > 0)) return -INFINITY;
  return std::log(4 * mu() * volume * D) + log_phi + 2 * b * mu() * D;
}

namespace {

void fill_schedules(BldParams& p) {
  const double shrink = (1 + 1 / p.logn) * p.alpha;
  p.b_j.assign(p.k + 2, 0);
  p.phi_j.assign(p.k + 2, 0);
  p.delta_j.assign(p.k + 2, 0);
  p.b_j[0] = p.b;
  p.phi_j[0] = p.phi;
  for (int j = 1; j <= p.k + 1; ++j) {
    p.b_j[j] = p.b_j[j - 1] / shrink;
    p.phi_j[j] = p.phi_j[j - 1] / shrink;
  }
  for (int j = 0; j <= p.k + 1; ++j) p.delta_j[j] = p.c * p.c * p.b_j[j] / p.logn;
  p.delta = p.delta_j[0];
  p.D = 9 * p.C * p.lambda * p.logn;
  p.max_level = static_cast<int>(std::floor(p.D));
  p.h_max = static_cast<int>(std::ceil(1 / p.b - 1e-12));
  p.gamma = 6 * std::pow(p.alpha, p.k + 1);
}

int k_formula(int n, double b, double alpha, double lambda) {
  double r = std::pow(b, -0.5) / lambda;
  if (!(r > 1)) return 0;
  return static_cast<int>(std::ceil(std::log(std::pow(static_cast<double>(n), 5) * alpha) / std::log(r) - 1e-12));
}

void check_common(int n, double b, double alpha, double lambda, double C, double c) {
  if (n < 2) throw ParameterError("decomposition parameters need n >= 2");
  if (!(b > 0 && b < 1)) throw ParameterError("b must lie in (0,1)");
  if (!(alpha >= 1) || !(lambda >= 1)) throw ParameterError("BSCA parameters alpha, lambda must be >= 1");
  if (!(C > 0) || !(c > 0)) throw ParameterError("constants C, c must be positive");
}

}  // namespace

BldParams derive_params(int n, double b, double eps, double alpha, double lambda, double C, double c) {
  check_common(n, b, alpha, lambda, C, c);
  if (n < 4) throw ParameterError("derive_params needs n >= 4");
  BldParams p;
  p.n = n;
  p.logn = std::log2(static_cast<double>(n));
  p.b = b;
  p.eps = eps;
  p.alpha = alpha;
  p.lambda = lambda;
  p.C = C;
  p.c = c;
  if (b > 1 / p.logn * (1 + kRelTol))
    throw ParameterError("precondition b <= 1/log n violated (b = " + std::to_string(b) +
                         ", 1/log n = " + std::to_string(1 / p.logn) + ")");
  const double nn = static_cast<double>(n);
  if (eps < 1 / (nn * nn) * (1 - kRelTol) || eps > b * p.logn * (1 + kRelTol))
    throw ParameterError("precondition n^-2 <= eps <= b log n violated (eps = " + std::to_string(eps) +
                         ", b log n = " + std::to_string(b * p.logn) + ")");
  if (alpha > 1 / (b * p.logn) * (1 + kRelTol))
    throw ParameterError("precondition alpha <= 1/(b log n) violated");
  p.k_formula = k_formula(n, b, alpha, lambda);
  if (p.k_formula == 0) throw ParameterError("precondition b^{-1/2} > lambda violated: k is undefined");
  const int k_cap = static_cast<int>(std::floor(p.logn + 1e-12));
  p.k = std::max(1, std::min(p.k_formula, k_cap));
  if (p.k_formula > k_cap)
    p.notes.push_back("k lower bound " + std::to_string(p.k_formula) + " exceeds log n; using k = " +
                      std::to_string(p.k));
  p.D = 9 * C * lambda * p.logn;
  p.log_phi = std::log(eps) - std::log(4 * p.mu() * p.D) - 2 * b * p.mu() * p.D;
  p.phi = std::exp(p.log_phi);
  p.phi_representable = p.phi >= DBL_MIN;
  if (!p.phi_representable) {
    p.phi = 0;
    p.notes.push_back("closed-form phi = exp(" + std::to_string(p.log_phi) + ") underflows a double");
  } else if (!(p.phi < b)) {
    throw ParameterError("derived phi is not below b");
  }
  p.log_eps_bound = std::log(eps);
  fill_schedules(p);
  return p;
}

BldParams params_from_phi(int n, double b, double phi, double alpha, double lambda, int k, double C, double c) {
  check_common(n, b, alpha, lambda, C, c);
  if (!(phi > 0 && phi < 1)) throw ParameterError("phi must lie in (0,1)");
  if (!(phi < b)) throw ParameterError("phi must be below b");
  BldParams p;
  p.n = n;
  p.logn = std::max(1.0, std::log2(static_cast<double>(n)));
  p.b = b;
  p.phi = phi;
  p.log_phi = std::log(phi);
  p.alpha = alpha;
  p.lambda = lambda;
  p.C = C;
  p.c = c;
  p.k_formula = k_formula(n, b, alpha, lambda);
  p.k = k > 0 ? k : std::max(1, static_cast<int>(std::floor(p.logn + 1e-12)));
  fill_schedules(p);
  p.log_eps_bound = std::log(4 * p.mu() * p.D) + p.log_phi + 2 * b * p.mu() * p.D;
  p.eps = std::exp(std::min(p.log_eps_bound, 700.0));
  if (b > 1 / p.logn) p.notes.push_back("b exceeds 1/log n");
  if (alpha > 1 / (b * p.logn)) p.notes.push_back("alpha exceeds 1/(b log n)");
  if (p.k_formula == 0 || p.k < p.k_formula) p.notes.push_back("k below its lower bound");
  if (p.log_eps_bound > 0) p.notes.push_back("crossing bound is vacuous (epsilon > 1)");
  return p;
}

// ------------------------------------------------------------------ trace

const char* to_string(Branch b) {
  switch (b) {
    case Branch::kExpander:
      return "expander";
    case Branch::kBalancedRecurse:
      return "balanced-recurse";
    case Branch::kTrimExpander:
      return "trim-expander";
    case Branch::kTrimBalanced:
      return "trim-balanced";
  }
  return "?";
}

namespace {

std::string join(const Cluster& c) {
  std::string s;
  for (size_t i = 0; i < c.size(); ++i) s += (i ? " " : "") + std::to_string(c[i]);
  return s;
}

const char* action_name(TrimStep::Action a) {
  switch (a) {
    case TrimStep::kExpander:
      return "expander";
    case TrimStep::kRelaxed:
      return "relaxed";
    case TrimStep::kTrimmed:
      return "trimmed";
    case TrimStep::kBreak:
      return "break";
  }
  return "?";
}

}  // namespace

std::string DecomposeTrace::to_text() const {
  std::ostringstream os;
  os << "trace.calls=" << calls.size() << "\n";
  os << "trace.max_depth=" << max_depth << "\n";
  os << "trace.max_inner=" << max_inner << "\n";
  os << "trace.max_break_j=" << max_break_j << "\n";
  os << "trace.bsca_calls=" << bsca_calls << "\n";
  for (size_t i = 0; i < calls.size(); ++i) {
    const auto& c = calls[i];
    os << "call " << i << " level=" << c.level << " size=" << c.cluster.size() << " branch=" << to_string(c.branch)
       << " bottom=" << c.bottom << " nu=" << c.nu << " vol_hat=" << c.vol_hat << " slots=";
    for (size_t s = 0; s < c.slots.size(); ++s) os << (s ? "," : "") << to_string(c.slots[s]);
    os << " cluster=[" << join(c.cluster) << "]";
    if (!c.bottom) os << " R=[" << join(c.R) << "]";
    os << "\n";
    for (const auto& t : c.trim)
      os << "  trim j=" << t.j << " h=" << t.h << " |A|=" << t.a_size << " action=" << action_name(t.action)
         << " nu=" << t.nu << " vol_hat=" << t.vol_hat << "\n";
  }
  return os.str();
}

// ------------------------------------------------------------------ algorithms

namespace {

struct Cut {
  Bscw w;          // R in base ids
  double vol_hat;  // estimated boundary-linked volume of `vol_of`
};

// Runs the BSCA on H[X]^tau and maps the witness back to base ids. vol_of is
// the cluster whose estimated boundary-linked volume the caller compares with.
Cut run_bsca(const WeightedGraph& h, const Cluster& X, const Cluster& vol_of, double tau, double psi,
             const Bsca& bsca, DecomposeTrace& trace) {
  BoundaryLinkedView view(h, X, tau);
  Cut out;
  ++trace.bsca_calls;
  out.w = bsca.run(view.materialize(), psi);
  if (!out.w.bottom) {
    for (int& v : out.w.R) v = X.at(v);
    normalize_cluster(out.w.R);
    if (out.w.R.empty() || out.w.R.size() >= X.size())
      throw TheoryViolation("BSCA returned an empty or improper cut");
  }
  out.vol_hat = &vol_of == &X ? view.total_volume() : BoundaryLinkedView(h, vol_of, tau).total_volume();
  return out;
}

}  // namespace

TrimResult trim(const Cluster& U, int level, const BldParams& p, SparsifierProvider& prov, const Bsca& bsca,
                CallRecord& rec, DecomposeTrace& trace) {
  Cluster A = U;
  const double tau = p.tau();
  for (int j = 1; j <= p.k + 1; ++j) {
    for (int h = 1;; ++h) {
      if (h > p.h_max)
        throw TheoryViolation("Trim inner loop exceeded ceil(1/b) = " + std::to_string(p.h_max) +
                              " iterations (inner-loop bound) at level " + std::to_string(level) + ", j = " +
                              std::to_string(j));
      trace.max_inner = std::max(trace.max_inner, h);
      SlotKey key{level, j, h};
      const WeightedGraph& H = prov.provide(key, A);
      rec.slots.push_back(key);
      Cut cut = run_bsca(H, A, U, tau, p.psi(j), bsca, trace);
      TrimStep step;
      step.j = j;
      step.h = h;
      step.a_size = A.size();
      step.vol_hat = cut.vol_hat;
      step.nu = cut.w.nu;
      if (cut.w.bottom) {
        step.action = TrimStep::kExpander;
        rec.trim.push_back(step);
        return {A, true};
      }
      const double relax = cut.vol_hat / (p.C * p.lambda);
      if (cut.w.nu >= relax) {
        step.action = TrimStep::kRelaxed;
        rec.trim.push_back(step);
        return {cut.w.R, false};
      }
      const double trim_threshold =
          std::pow(cut.vol_hat, 1.0 - static_cast<double>(j - 1) / p.k) / (p.C * p.lambda);
      if (cut.w.nu >= trim_threshold) {
        step.action = TrimStep::kTrimmed;
        rec.trim.push_back(step);
        A = complement_in(A, cut.w.R);
        continue;
      }
      step.action = TrimStep::kBreak;
      rec.trim.push_back(step);
      trace.max_break_j = std::max(trace.max_break_j, j);
      if (j == p.k + 1)
        throw TheoryViolation("Trim broke out of outer iteration j = k + 1 = " + std::to_string(j) +
                              " (outer-loop bound requires j <= k)");
      break;
    }
  }
  throw TheoryViolation("Trim left its outer loop without a result");
}

void provision_slots(SparsifierProvider& prov, const BldParams& p) {
  prov.provision(p.max_level, p.k + 1, p.h_max, p.delta_j);
}

DecomposeResult decompose(const Cluster& U0, int level0, const BldParams& p, SparsifierProvider& prov,
                          const Bsca& bsca) {
  if (U0.empty()) throw DomainError("Decompose needs a non-empty cluster");
  if (!is_normalized(U0)) throw DomainError("Decompose cluster must be sorted and duplicate-free");
  if (!p.phi_representable || !(p.phi > 0)) throw ParameterError("phi is not representable; use params_from_phi");
  DecomposeResult res;
  struct Work {
    Cluster U;
    int level;
  };
  std::vector<Work> stack{{U0, level0}};
  // Sibling calls at one level must act on disjoint vertex sets.
  std::vector<std::vector<char>> seen_at_level;
  const double tau = p.tau();

  while (!stack.empty()) {
    Work w = std::move(stack.back());
    stack.pop_back();
    const int level = w.level;
    if (level > p.D)
      throw TheoryViolation("recursion depth " + std::to_string(level) + " exceeds the depth bound D = " +
                            std::to_string(p.D));
    res.trace.max_depth = std::max(res.trace.max_depth, level);
    if (static_cast<int>(seen_at_level.size()) <= level) seen_at_level.resize(level + 1);
    auto& seen = seen_at_level[level];
    if (seen.empty()) seen.assign(prov.n(), 0);
    for (int v : w.U) {
      if (seen[v]) throw TheoryViolation("sibling Decompose calls overlap at level " + std::to_string(level));
      seen[v] = 1;
    }

    CallRecord rec;
    rec.cluster = w.U;
    rec.level = level;
    SlotKey key{level, 0, 0};
    const WeightedGraph& H = prov.provide(key, w.U);
    rec.slots.push_back(key);
    Cut cut = run_bsca(H, w.U, w.U, tau, p.psi(0), bsca, res.trace);
    rec.bottom = cut.w.bottom;
    rec.R = cut.w.R;
    rec.nu = cut.w.nu;
    rec.vol_hat = cut.vol_hat;

    std::vector<Cluster> recurse;
    if (cut.w.bottom && !(cut.vol_hat > 0)) {
      // No edge touches U: every vertex is its own (vacuous) expander.
      rec.branch = Branch::kExpander;
      for (int v : w.U) res.partition.clusters.push_back({v});
    } else if (cut.w.bottom) {
      rec.branch = Branch::kExpander;
      res.partition.clusters.push_back(w.U);
    } else if (cut.w.nu >= cut.vol_hat / (p.C * p.lambda)) {
      rec.branch = Branch::kBalancedRecurse;
      recurse = {cut.w.R, complement_in(w.U, cut.w.R)};
    } else {
      TrimResult t = trim(w.U, level, p, prov, bsca, rec, res.trace);
      if (t.expander) {
        rec.branch = Branch::kTrimExpander;
        res.partition.clusters.push_back(t.S);
        Cluster rest = complement_in(w.U, t.S);
        if (!rest.empty()) recurse = {rest};
      } else {
        rec.branch = Branch::kTrimBalanced;
        recurse = {t.S, complement_in(w.U, t.S)};
      }
    }
    res.trace.calls.push_back(std::move(rec));
    for (auto it = recurse.rbegin(); it != recurse.rend(); ++it) stack.push_back({std::move(*it), level + 1});
  }
  res.partition.canonicalize();
  // The output must be a partition of U0.
  size_t covered = 0;
  std::vector<char> mark(prov.n(), 0);
  for (const auto& c : res.partition.clusters)
    for (int v : c) {
      if (mark[v]) throw TheoryViolation("Decompose produced overlapping clusters");
      mark[v] = 1;
      ++covered;
    }
  if (covered != U0.size()) throw TheoryViolation("Decompose output does not cover its input");
  return res;
}

StreamDecomposeResult decompose_stream(const EdgeStream& s, const BldParams& p, const ProviderConfig& cfg,
                                       const Bsca& bsca) {
  if (s.n != p.n) throw ParameterError("stream vertex count does not match the parameters");
  SparsifierProvider prov(s.n, cfg);
  provision_slots(prov, p);
  for (const auto& u : s.updates) prov.update(u);
  StreamDecomposeResult out;
  out.result = decompose(range_cluster(s.n), 0, p, prov, bsca);
  out.slots_provisioned = prov.slots_provisioned();
  out.slots_consumed = prov.slots_consumed();
  out.sketch_words = prov.analytic_words();
  return out;
}

DecomposeResult decompose_graph(const MultiGraph& g, const BldParams& p, const Bsca& bsca) {
  if (g.n() != p.n) throw ParameterError("graph vertex count does not match the parameters");
  SparsifierProvider prov(g.n(), {});
  provision_slots(prov, p);
  prov.feed(g);
  return decompose(range_cluster(g.n()), 0, p, prov, bsca);
}

// ------------------------------------------------------------------ RED

MultiGraph remove_intra_cluster_edges(const MultiGraph& g, const Partition& p) {
  p.validate(g.n());
  auto owner = p.owner(g.n());
  MultiGraph out(g.n());
  for (const auto& [e, m] : g.edges())
    if (owner[e.first] != owner[e.second]) out.add_edge(e.first, e.second, m);
  return out;
}

std::vector<RedLevel> red_offline(const MultiGraph& g, const RedOptions& opt) {
  if (opt.levels < 1) throw ParameterError("RED needs at least one level");
  if (!(opt.phi > 0 && opt.phi < 1)) throw ParameterError("RED phi must lie in (0,1)");
  if (!(opt.tau > 1)) throw ParameterError("RED tau = b/phi must exceed 1");
  std::vector<RedLevel> out;
  MultiGraph cur = g;
  const int n = g.n();
  const double logn = std::max(1.0, std::log2(static_cast<double>(n)));
  auto brute = std::make_shared<BruteForceBsca>(opt.cap);
  HybridBsca hybrid(opt.cap);
  for (int i = 0; i < opt.levels; ++i) {
    RedLevel lvl;
    lvl.residual = cur;
    SparsifierProvider prov(n, {});
    prov.feed(cur);
    bool provisioned = false;
    for (const auto& comp : connected_components(cur)) {
      if (comp.size() == 1) {
        lvl.partition.clusters.push_back(comp);
        continue;
      }
      const Bsca& bsca = static_cast<int>(comp.size()) <= opt.cap ? static_cast<const Bsca&>(*brute) : hybrid;
      // phi_{k+1} = phi_dec / ((1 + 1/log n) alpha)^{k+1} must equal the target phi.
      double phi_dec = opt.phi * std::pow((1 + 1 / logn) * bsca.alpha(), opt.k + 1);
      double b = opt.tau * phi_dec;
      if (!(b < 1))
        throw ParameterError("RED: phi = " + std::to_string(opt.phi) + " needs b = " + std::to_string(b) +
                             " >= 1 for a component of size " + std::to_string(comp.size()));
      BldParams p = params_from_phi(n, b, phi_dec, bsca.alpha(), bsca.lambda(), opt.k);
      lvl.phi_dec = std::max(lvl.phi_dec, phi_dec);
      if (!provisioned) {
        // Slot ranges only depend on (D, k, b); take the widest over both BSCAs.
        BldParams widest = params_from_phi(n, opt.tau * opt.phi * std::pow((1 + 1 / logn), opt.k + 1),
                                           opt.phi * std::pow((1 + 1 / logn), opt.k + 1), 1, hybrid.lambda(),
                                           opt.k);
        prov.provision(widest.max_level, opt.k + 1, widest.h_max, widest.delta_j);
        provisioned = true;
      }
      DecomposeResult r = decompose(comp, 0, p, prov, bsca);
      for (auto& c : r.partition.clusters) lvl.partition.clusters.push_back(std::move(c));
    }
    lvl.partition.canonicalize();
    lvl.partition.validate(n);
    MultiGraph next = remove_intra_cluster_edges(cur, lvl.partition);
    lvl.crossing = next.num_edges();
    cur = std::move(next);
    out.push_back(std::move(lvl));
  }
  return out;
}

}  // namespace eds
