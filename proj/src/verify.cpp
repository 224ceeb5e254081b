#include "edstream/verify.hpp"

#include <cmath>
#include <sstream>

#include "edstream/cuts.hpp"
#include "edstream/io.hpp"

namespace eds {

const char* to_string(ClusterStatus s) {
  switch (s) {
    case ClusterStatus::kVerified:
      return "verified";
    case ClusterStatus::kFailed:
      return "failed";
    case ClusterStatus::kUnchecked:
      return "unchecked";
    case ClusterStatus::kVacuous:
      return "vacuous";
  }
  return "?";
}

int64_t crossing_edges(const MultiGraph& g, const Partition& p) {
  auto owner = p.owner(g.n());
  int64_t x = 0;
  for (const auto& [e, m] : g.edges())
    if (owner[e.first] != owner[e.second]) x += m;
  return x;
}

namespace {

ClusterCheck check_cluster(const WeightedGraph& w, const Cluster& c, double tau, double threshold, int cap,
                           bool assert_plain) {
  ClusterCheck out;
  out.size = c.size();
  BoundaryLinkedView view(w, c, tau);
  out.volume = view.total_volume();
  out.expansion = INFINITY;
  if (static_cast<int>(c.size()) > cap) {
    out.status = ClusterStatus::kUnchecked;
    return out;
  }
  if (c.size() < 2) {
    out.status = ClusterStatus::kVacuous;
    return out;
  }
  MinSparsity ms = min_sparsity_bruteforce(view, cap);
  if (ms.degenerate || std::isinf(ms.value)) {
    out.status = ClusterStatus::kVacuous;
    return out;
  }
  out.expansion = ms.value;
  out.witness = ms.witness;
  out.status = ms.value >= threshold * (1 - 1e-9) ? ClusterStatus::kVerified : ClusterStatus::kFailed;
  if (assert_plain && out.status == ClusterStatus::kVerified) {
    MinSparsity plain = min_sparsity_bruteforce(BoundaryLinkedView(w, c, 0), cap);
    if (plain.value < threshold * (1 - 1e-9))
      throw TheoryViolation("boundary-linked cluster verified at " + fmt_real(threshold) +
                            " but its induced subgraph has expansion " + fmt_real(plain.value));
  }
  return out;
}

VerifyReport run_checks(const MultiGraph& g, const Partition& in, double eps, double threshold, double tau,
                        int cap, int threads, bool assert_plain, std::string kind) {
  in.validate(g.n());
  Partition p = in;
  p.canonicalize();
  VerifyReport r;
  r.kind = std::move(kind);
  r.eps = eps;
  r.threshold = threshold;
  r.tau = tau;
  r.edges = g.num_edges();
  r.crossing = crossing_edges(g, p);
  r.crossing_fraction = r.edges ? static_cast<double>(r.crossing) / static_cast<double>(r.edges) : 0.0;
  r.crossing_pass = static_cast<double>(r.crossing) <= eps * static_cast<double>(r.edges) * (1 + kRelTol);

  const WeightedGraph w = g.to_weighted();
  r.clusters.resize(p.clusters.size());
  parallel_for(p.clusters.size(), threads, [&](size_t i) {
    r.clusters[i] = check_cluster(w, p.clusters[i], tau, threshold, cap, assert_plain);
    r.clusters[i].index = i;
  });

  r.worst_expansion = INFINITY;
  for (const auto& c : r.clusters) {
    switch (c.status) {
      case ClusterStatus::kVerified:
        ++r.verified;
        break;
      case ClusterStatus::kFailed:
        ++r.failed;
        break;
      case ClusterStatus::kUnchecked:
        ++r.unchecked;
        r.unchecked_volume += vol(w, p.clusters[c.index]);
        break;
      case ClusterStatus::kVacuous:
        ++r.vacuous;
        break;
    }
    if (c.expansion < r.worst_expansion) {
      r.worst_expansion = c.expansion;
      r.worst_cluster = static_cast<int64_t>(c.index);
    }
  }
  return r;
}

std::string join(const Cluster& c) {
  std::string s;
  for (size_t i = 0; i < c.size(); ++i) s += (i ? " " : "") + std::to_string(c[i]);
  return s;
}

}  // namespace

std::string VerifyReport::to_text(const std::string& prefix) const {
  std::ostringstream os;
  auto kv = [&](const std::string& k, const std::string& v) { os << prefix << k << '=' << v << '\n'; };
  kv("kind", kind);
  kv("pass", pass() ? "true" : "false");
  kv("edges", std::to_string(edges));
  kv("crossing", std::to_string(crossing));
  kv("crossing_fraction", fmt_real(crossing_fraction));
  kv("eps", fmt_real(eps));
  kv("crossing_pass", crossing_pass ? "true" : "false");
  kv("threshold", fmt_real(threshold));
  kv("tau", fmt_real(tau));
  kv("clusters", std::to_string(clusters.size()));
  kv("verified", std::to_string(verified));
  kv("failed", std::to_string(failed));
  kv("unchecked", std::to_string(unchecked));
  kv("vacuous", std::to_string(vacuous));
  kv("unchecked_volume", fmt_real(unchecked_volume));
  kv("worst_expansion", std::isinf(worst_expansion) ? "inf" : fmt_real(worst_expansion));
  kv("worst_cluster", std::to_string(worst_cluster));
  for (const auto& c : clusters) {
    if (c.status != ClusterStatus::kFailed && c.status != ClusterStatus::kUnchecked) continue;
    os << prefix << "cluster " << c.index << ": status=" << to_string(c.status) << " size=" << c.size
       << " volume=" << fmt_real(c.volume);
    if (c.status == ClusterStatus::kFailed)
      os << " expansion=" << fmt_real(c.expansion) << " witness=[" << join(c.witness) << "]";
    os << '\n';
  }
  return os.str();
}

VerifyReport verify_ed(const MultiGraph& g, const Partition& p, double eps, double phi, int cap, int threads) {
  return run_checks(g, p, eps, phi, 0.0, cap, threads, false, "ed");
}

VerifyReport verify_bld(const MultiGraph& g, const Partition& p, double b, double eps, double phi, double gamma,
                        int cap, int threads) {
  if (!(phi > 0) || !(b >= phi)) throw ParameterError("boundary-linked check needs 0 < phi <= b");
  if (!(gamma >= 1)) throw ParameterError("gamma must be >= 1");
  return run_checks(g, p, eps, phi / gamma, b / phi, cap, threads, true, "bld");
}

bool RedReport::pass() const {
  for (const auto& l : levels)
    if (!l.pass()) return false;
  return true;
}

std::string RedReport::to_text() const {
  std::ostringstream os;
  os << "kind=red\n";
  os << "levels=" << levels.size() << "\n";
  os << "pass=" << (pass() ? "true" : "false") << "\n";
  for (size_t i = 0; i < levels.size(); ++i) os << levels[i].to_text("level" + std::to_string(i + 1) + ".");
  return os.str();
}

RedReport verify_red(const MultiGraph& g, const std::vector<Partition>& partitions, double eps, double phi, int cap,
                     int threads) {
  if (partitions.empty()) throw ParameterError("verify_red needs at least one partition");
  RedReport r;
  MultiGraph cur = g;
  for (size_t i = 0; i < partitions.size(); ++i) {
    r.levels.push_back(verify_ed(cur, partitions[i], eps, phi, cap, threads));
    if (i + 1 == partitions.size()) break;
    auto owner = partitions[i].owner(cur.n());
    MultiGraph next(cur.n());
    for (const auto& [e, m] : cur.edges())
      if (owner[e.first] != owner[e.second]) next.add_edge(e.first, e.second, m);
    cur = std::move(next);
  }
  return r;
}

}  // namespace eds
