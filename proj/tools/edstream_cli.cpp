// edstream: batch front-end for generating instances, streaming
// decompositions and checking their guarantees.
//
// Exit codes: 0 ok, 1 a check failed, 2 usage or infeasible parameters,
// 3 internal assertion (a theory violation; always a bug).

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "edstream/decompose.hpp"
#include "edstream/generators.hpp"
#include "edstream/io.hpp"
#include "edstream/lowerbound.hpp"
#include "edstream/sparsifier.hpp"
#include "edstream/stream.hpp"
#include "edstream/verify.hpp"

using namespace eds;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInternal = 3;

struct Globals {
  std::string seed = "1";
  int threads = 1;
};

// A decimal integer, or 32 hex digits for a full 128-bit seed.
Seed128 parse_seed(const std::string& text) {
  if (text.size() == 32) return seed_from_string(text);
  try {
    size_t used = 0;
    unsigned long long v = std::stoull(text, &used, 10);
    if (used == text.size()) return seed_from_u64(v);
  } catch (const std::exception&) {
  }
  throw ParameterError("--seed must be a decimal integer or 32 hex digits, got '" + text + "'");
}

std::ofstream open_out(const std::string& path, bool binary = false) {
  std::ofstream f(path, binary ? std::ios::binary : std::ios::out);
  if (!f) throw Error("cannot open '" + path + "' for writing");
  return f;
}

void write_text_file(const std::string& path, const std::string& text) {
  auto f = open_out(path);
  f << text;
}

std::unique_ptr<Bsca> make_bsca(const std::string& name) {
  if (name == "brute") return std::make_unique<BruteForceBsca>();
  if (name == "hybrid") return std::make_unique<HybridBsca>();
  throw ParameterError("unknown BSCA '" + name + "' (expected brute or hybrid)");
}

ProviderMode parse_mode(const std::string& m) {
  if (m == "exact") return ProviderMode::kExact;
  if (m == "agm") return ProviderMode::kAgm;
  throw ParameterError("unknown mode '" + m + "' (expected exact or agm)");
}

void print_notes(std::ostream& out, const BldParams& p) {
  for (const auto& n : p.notes) out << "note=" << n << "\n";
}

void print_params(std::ostream& out, const BldParams& p) {
  out << "b=" << fmt_real(p.b) << "\n";
  out << "k=" << p.k << "\n";
  out << "k_formula=" << p.k_formula << "\n";
  out << "alpha=" << fmt_real(p.alpha) << "\n";
  out << "lambda=" << fmt_real(p.lambda) << "\n";
  out << "phi_representable=" << (p.phi_representable ? "true" : "false") << "\n";
  if (p.phi_representable) out << "phi=" << fmt_real(p.phi) << "\n";
  out << "log_phi=" << fmt_real(p.log_phi) << "\n";
  out << "log_eps_bound=" << fmt_real(p.log_eps_bound) << "\n";
  out << "depth_budget=" << fmt_real(p.D) << "\n";
  out << "max_level=" << p.max_level << "\n";
  out << "h_max=" << p.h_max << "\n";
  out << "gamma=" << fmt_real(p.gamma) << "\n";
}

// Shared parameter flags of sketch and decompose.
struct ParamFlags {
  double b = 0.125;
  double eps = 0;
  double phi = 0;
  int k = 0;
  double C = 40;
  std::string bsca = "brute";

  void add(CLI::App* cmd) {
    cmd->add_option("--b", b, "boundary-linkedness parameter b")->capture_default_str();
    cmd->add_option("--eps", eps, "target crossing fraction; phi follows from the closed form (takes precedence over --phi)");
    cmd->add_option("--phi", phi, "explicit expansion phi");
    cmd->add_option("--k", k, "Trim outer iterations (default: derived)");
    cmd->add_option("--C", C, "recursion constant C")->capture_default_str();
    cmd->add_option("--bsca", bsca, "BSCA: brute or hybrid")->capture_default_str();
  }

  BldParams build(int n, const Bsca& a) const {
    if (eps > 0) {
      BldParams p = derive_params(n, b, eps, a.alpha(), a.lambda(), C);
      if (k > 0 && k != p.k) throw ParameterError("--k cannot override the derived k; use --phi");
      return p;
    }
    if (phi > 0) return params_from_phi(n, b, phi, a.alpha(), a.lambda(), k, C);
    throw ParameterError("give --phi, or --eps for the closed-form phi");
  }
};

// ------------------------------------------------------------------ gen

struct GenOpts {
  int n = 32;
  double p = 0.3;
  double churn = 0.3;
  int m = 16;
  int d = 3;
  double psi_target = 0;
  std::string graph;
  std::string out;
};

int run_gen_random(const Globals& g, const GenOpts& o) {
  auto rng = make_rng(derive_seed(parse_seed(g.seed), "gen-random"));
  MultiGraph graph = erdos_renyi(o.n, o.p, rng);
  auto f = open_out(o.out);
  write_multigraph(f, graph);
  std::cout << "n=" << graph.n() << "\nedges=" << graph.num_edges() << "\n";
  return kExitOk;
}

int run_gen_stream(const Globals& g, const GenOpts& o) {
  const Seed128 root = parse_seed(g.seed);
  MultiGraph graph;
  if (!o.graph.empty()) {
    graph = load_multigraph(o.graph);
  } else {
    auto rng = make_rng(derive_seed(root, "gen-random"));
    graph = erdos_renyi(o.n, o.p, rng);
  }
  auto rng = make_rng(derive_seed(root, "gen-stream"));
  EdgeStream s = stream_with_churn(graph, o.churn, rng);
  auto f = open_out(o.out);
  write_stream(f, s);
  std::cout << "n=" << s.n << "\nupdates=" << s.updates.size() << "\nlive_edges=" << graph.num_edges() << "\n";
  return kExitOk;
}

int run_gen_hard(const Globals& g, const GenOpts& o) {
  HardParams p;
  p.n = o.n;
  p.m = o.m;
  p.d = o.d;
  p.psi_target = o.psi_target;
  p.seed = parse_seed(g.seed);
  HardInstance inst = gen_hard(p);
  {
    auto f = open_out(o.out);
    write_multigraph(f, inst.graph);
  }
  {
    auto f = open_out(o.out + ".meta");
    write_hard_meta(f, inst);
  }
  std::cout << "n=" << p.n << "\nedges=" << inst.graph.num_edges() << "\nK=" << inst.K
            << "\npsi_t=" << fmt_real(inst.psi_t) << "\nimportant_edges=" << inst.important_edges.size() << "\n";
  for (const auto& w : inst.warnings) std::cout << "warning=" << w << "\n";
  return kExitOk;
}

// ------------------------------------------------------------------ sketch

struct SketchOpts {
  std::string stream;
  std::string mode = "agm";
  double sketch_C = 1.0;
  std::string out;
  ParamFlags params;
};

int run_sketch(const Globals& g, const SketchOpts& o) {
  EdgeStream s = load_stream(o.stream);
  auto bsca = make_bsca(o.params.bsca);
  // Provisioning only needs the slot ranges and error schedule, which exist
  // even when the closed-form phi underflows.
  BldParams p = o.params.build(s.n, *bsca);
  ProviderConfig cfg;
  cfg.mode = parse_mode(o.mode);
  cfg.seed = derive_seed(parse_seed(g.seed), "sparsifier");
  cfg.C = o.sketch_C;
  SparsifierProvider prov(s.n, cfg);
  provision_slots(prov, p);
  for (const auto& u : s.updates) prov.update(u);
  Blob bundle = prov.serialize();
  if (!o.out.empty()) {
    auto f = open_out(o.out, true);
    f.write(reinterpret_cast<const char*>(bundle.data()), static_cast<std::streamsize>(bundle.size()));
  }
  std::cout << "n=" << s.n << "\nupdates=" << s.updates.size() << "\nmode=" << o.mode << "\n";
  print_params(std::cout, p);
  std::cout << "slots_provisioned=" << prov.slots_provisioned() << "\n";
  std::cout << "analytic_words=" << fmt_real(prov.analytic_words()) << "\n";
  std::cout << "bundle_bytes=" << bundle.size() << "\n";
  print_notes(std::cout, p);
  return kExitOk;
}

// ------------------------------------------------------------------ decompose

struct DecomposeOpts {
  std::string stream;
  std::string mode = "exact";
  double sketch_C = 1.0;
  std::string partition_out;
  std::string trace_out;
  ParamFlags params;
};

int run_decompose(const Globals& g, const DecomposeOpts& o) {
  EdgeStream s = load_stream(o.stream);
  auto bsca = make_bsca(o.params.bsca);
  BldParams p = o.params.build(s.n, *bsca);
  if (!p.phi_representable)
    throw ParameterError("closed-form phi underflows (log phi = " + fmt_real(p.log_phi) + "); pass --phi");
  ProviderConfig cfg;
  cfg.mode = parse_mode(o.mode);
  cfg.seed = derive_seed(parse_seed(g.seed), "sparsifier");
  cfg.C = o.sketch_C;
  StreamDecomposeResult r = decompose_stream(s, p, cfg, *bsca);
  const Partition& part = r.result.partition;
  if (!o.partition_out.empty()) {
    auto f = open_out(o.partition_out);
    write_partition(f, part);
  }
  if (!o.trace_out.empty()) write_text_file(o.trace_out, r.result.trace.to_text());
  const MultiGraph live = replay(s);
  const int64_t crossing = crossing_edges(live, part);
  const DecomposeTrace& t = r.result.trace;
  std::cout << "n=" << s.n << "\nupdates=" << s.updates.size() << "\nlive_edges=" << live.num_edges()
            << "\nmode=" << o.mode << "\nbsca=" << bsca->name() << "\n";
  print_params(std::cout, p);
  std::cout << "clusters=" << part.clusters.size() << "\ncrossing=" << crossing << "\n";
  std::cout << "crossing_fraction="
            << fmt_real(live.num_edges() ? static_cast<double>(crossing) / live.num_edges() : 0.0) << "\n";
  std::cout << "log_crossing_bound=" << fmt_real(p.log_crossing_bound(2.0 * live.num_edges())) << "\n";
  std::cout << "max_depth=" << t.max_depth << "\nmax_inner=" << t.max_inner << "\nmax_break_j=" << t.max_break_j
            << "\nbsca_calls=" << t.bsca_calls << "\n";
  std::cout << "slots_provisioned=" << r.slots_provisioned << "\nslots_consumed=" << r.slots_consumed
            << "\nsketch_words=" << fmt_real(r.sketch_words) << "\n";
  print_notes(std::cout, p);
  return kExitOk;
}

// ------------------------------------------------------------------ red

struct RedOpts {
  std::string graph;
  int levels = 2;
  double eps = 0.5;
  double phi = 0.05;
  double tau = 1.25;
  std::string out;
};

int run_red(const Globals& g, const RedOpts& o) {
  MultiGraph graph = load_multigraph(o.graph);
  RedOptions opt;
  opt.levels = o.levels;
  opt.phi = o.phi;
  opt.tau = o.tau;
  std::vector<RedLevel> lv = red_offline(graph, opt);
  std::vector<Partition> parts;
  for (size_t i = 0; i < lv.size(); ++i) {
    parts.push_back(lv[i].partition);
    if (!o.out.empty()) {
      auto f = open_out(o.out + ".level" + std::to_string(i + 1));
      write_partition(f, lv[i].partition);
    }
  }
  RedReport rep = verify_red(graph, parts, o.eps, o.phi, kBruteForceCap, g.threads);
  std::cout << "n=" << graph.n() << "\nedges=" << graph.num_edges() << "\nlevels=" << lv.size() << "\n";
  for (size_t i = 0; i < lv.size(); ++i)
    std::cout << "level" << i + 1 << ".clusters=" << lv[i].partition.clusters.size() << "\nlevel" << i + 1
              << ".residual_edges=" << lv[i].residual.num_edges() << "\nlevel" << i + 1
              << ".phi_dec=" << fmt_real(lv[i].phi_dec) << "\n";
  std::cout << rep.to_text();
  return rep.pass() ? kExitOk : kExitCheckFailed;
}

// ------------------------------------------------------------------ verify

struct VerifyOpts {
  std::string graph;
  std::vector<std::string> partitions;
  double eps = 0.1;
  double phi = 0.1;
  double b = 0.125;
  double gamma = 0;
  double alpha = 1;
  int k = 1;
  int cap = kBruteForceCap;
};

const Partition& single_partition(const std::vector<Partition>& ps) {
  if (ps.size() != 1) throw ParameterError("this check takes exactly one --partition");
  return ps.front();
}

int run_verify(const Globals& g, const std::string& kind, const VerifyOpts& o) {
  MultiGraph graph = load_multigraph(o.graph);
  std::vector<Partition> ps;
  for (const auto& path : o.partitions) ps.push_back(load_partition(path));
  bool pass = false;
  if (kind == "ed") {
    VerifyReport r = verify_ed(graph, single_partition(ps), o.eps, o.phi, o.cap, g.threads);
    std::cout << r.to_text();
    pass = r.pass();
  } else if (kind == "bld") {
    double gamma = o.gamma > 0 ? o.gamma : 6 * std::pow(o.alpha, o.k + 1);
    VerifyReport r = verify_bld(graph, single_partition(ps), o.b, o.eps, o.phi, gamma, o.cap, g.threads);
    std::cout << r.to_text();
    pass = r.pass();
  } else {
    if (ps.empty()) throw ParameterError("verify red needs at least one --partition");
    RedReport r = verify_red(graph, ps, o.eps, o.phi, o.cap, g.threads);
    std::cout << r.to_text();
    pass = r.pass();
  }
  std::cout << "pass=" << (pass ? "true" : "false") << "\n";
  return pass ? kExitOk : kExitCheckFailed;
}

// ------------------------------------------------------------------ recover-sim

struct RecoverOpts {
  int n = 96;
  int m = 16;
  int d = 3;
  double eps = 0.1;
  double phi = 0.005;
  std::string algorithm = "offline";
};

int run_recover(const Globals& g, const RecoverOpts& o) {
  HardParams p;
  p.n = o.n;
  p.m = o.m;
  p.d = o.d;
  p.seed = parse_seed(g.seed);
  HardInstance inst = gen_hard(p);
  RedFactory alg;
  if (o.algorithm == "offline") {
    RedOptions opt;
    opt.phi = o.phi;
    alg = offline_exact_red(opt);
  } else if (o.algorithm == "singletons") {
    alg = all_singleton_red();
  } else {
    throw ParameterError("unknown algorithm '" + o.algorithm + "' (expected offline or singletons)");
  }
  RecoverOutcome out = recover_sim(alg, inst, o.eps, g.threads);
  std::cout << out.to_text();
  return kExitOk;
}

// ------------------------------------------------------------------ check-spars

struct SparsOpts {
  std::string graph;
  double delta = 0.25;
  int clusters = 30;
  int max_size = 12;
  double churn = 0.3;
  double sketch_C = 1.0;
  int64_t samples_per_n2 = 10;
  double min_pass = 0.95;
};

int run_check_spars(const Globals& g, const SparsOpts& o) {
  MultiGraph graph = load_multigraph(o.graph);
  SparsTrialOptions opt;
  opt.delta = o.delta;
  opt.C = o.sketch_C;
  opt.clusters = o.clusters;
  opt.max_size = o.max_size;
  opt.churn = o.churn;
  opt.samples_per_n2 = o.samples_per_n2;
  opt.threads = g.threads;
  SparsTrialReport rep = spars_trial(graph, parse_seed(g.seed), opt);
  std::cout << rep.to_text();
  const bool ok = rep.pass_rate() >= o.min_pass;
  std::cout << "pass=" << (ok ? "true" : "false") << "\n";
  return ok ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"edstream: streaming expander decompositions and their checks"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  Globals globals;
  app.add_option("--seed", globals.seed, "root seed (decimal or 32 hex digits)")->capture_default_str();
  app.add_option("--threads", globals.threads, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();

  std::function<int()> action;

  // gen
  auto* gen = app.add_subcommand("gen", "generate graphs, streams and hard instances");
  gen->require_subcommand(1);
  GenOpts go;
  auto* gen_random = gen->add_subcommand("random", "Erdos-Renyi graph file");
  gen_random->add_option("--n", go.n)->capture_default_str();
  gen_random->add_option("--p", go.p)->capture_default_str();
  gen_random->add_option("--out", go.out)->required();
  gen_random->callback([&] { action = [&] { return run_gen_random(globals, go); }; });
  auto* gen_stream = gen->add_subcommand("stream", "dynamic stream with churn (from --graph or a fresh ER graph)");
  gen_stream->add_option("--graph", go.graph);
  gen_stream->add_option("--n", go.n)->capture_default_str();
  gen_stream->add_option("--p", go.p)->capture_default_str();
  gen_stream->add_option("--churn", go.churn)->capture_default_str();
  gen_stream->add_option("--out", go.out)->required();
  gen_stream->callback([&] { action = [&] { return run_gen_stream(globals, go); }; });
  auto* gen_hard_cmd = gen->add_subcommand("hard", "hard instance graph plus <out>.meta");
  gen_hard_cmd->add_option("--n", go.n)->required();
  gen_hard_cmd->add_option("--m", go.m)->required();
  gen_hard_cmd->add_option("--d", go.d)->required();
  gen_hard_cmd->add_option("--psi-target", go.psi_target)->capture_default_str();
  gen_hard_cmd->add_option("--out", go.out)->required();
  gen_hard_cmd->callback([&] { action = [&] { return run_gen_hard(globals, go); }; });

  // sketch
  SketchOpts so;
  auto* sketch = app.add_subcommand("sketch", "stream into a provisioned sparsifier bundle");
  sketch->add_option("--stream", so.stream)->required();
  sketch->add_option("--mode", so.mode, "exact or agm")->capture_default_str();
  sketch->add_option("--sketch-C", so.sketch_C, "AGM sampling constant")->capture_default_str();
  sketch->add_option("--out", so.out, "bundle file");
  so.params.add(sketch);
  sketch->callback([&] { action = [&] { return run_sketch(globals, so); }; });

  // decompose
  DecomposeOpts dopt;
  dopt.params.phi = 0.1;
  auto* dec = app.add_subcommand("decompose", "one-pass boundary-linked expander decomposition of a stream");
  dec->add_option("--stream", dopt.stream)->required();
  dec->add_option("--mode", dopt.mode, "exact or agm")->capture_default_str();
  dec->add_option("--sketch-C", dopt.sketch_C, "AGM sampling constant")->capture_default_str();
  dec->add_option("--partition", dopt.partition_out, "partition output file");
  dec->add_option("--trace", dopt.trace_out, "trace output file");
  dopt.params.add(dec);
  dec->callback([&] { action = [&] { return run_decompose(globals, dopt); }; });

  // red
  RedOpts ro;
  auto* red = app.add_subcommand("red", "offline removal-based decomposition sequence");
  red->add_option("--graph", ro.graph)->required();
  red->add_option("--levels", ro.levels)->capture_default_str();
  red->add_option("--eps", ro.eps)->capture_default_str();
  red->add_option("--phi", ro.phi)->capture_default_str();
  red->add_option("--tau", ro.tau, "b / phi of the inner decompositions")->capture_default_str();
  red->add_option("--out", ro.out, "partition file prefix (<out>.level<i>)");
  red->callback([&] { action = [&] { return run_red(globals, ro); }; });

  // verify
  VerifyOpts vo;
  std::string verify_kind;
  auto* verify = app.add_subcommand("verify", "check a partition (or sequence) against its guarantees");
  verify->require_subcommand(1);
  for (const char* kind : {"ed", "bld", "red"}) {
    auto* sub = verify->add_subcommand(kind, std::string("check a ") + kind + " output");
    sub->add_option("--graph", vo.graph)->required();
    sub->add_option("--partition", vo.partitions, "partition file (repeat for red levels)")->required();
    sub->add_option("--eps", vo.eps)->capture_default_str();
    sub->add_option("--phi", vo.phi)->capture_default_str();
    sub->add_option("--cap", vo.cap, "largest cluster checked exhaustively")->capture_default_str();
    if (std::string(kind) == "bld") {
      sub->add_option("--b", vo.b)->capture_default_str();
      sub->add_option("--gamma", vo.gamma, "expansion loss (default 6 alpha^(k+1))");
      sub->add_option("--alpha", vo.alpha)->capture_default_str();
      sub->add_option("--k", vo.k)->capture_default_str();
    }
    std::string k = kind;
    sub->callback([&, k] { action = [&, k] { return run_verify(globals, k, vo); }; });
  }

  // recover-sim
  RecoverOpts rc;
  auto* rec = app.add_subcommand("recover-sim", "play the recovery game on a hard instance");
  rec->add_option("--n", rc.n)->capture_default_str();
  rec->add_option("--m", rc.m)->capture_default_str();
  rec->add_option("--d", rc.d)->capture_default_str();
  rec->add_option("--eps", rc.eps)->capture_default_str();
  rec->add_option("--phi", rc.phi, "phi of the offline oracle")->capture_default_str();
  rec->add_option("--algorithm", rc.algorithm, "offline or singletons")->capture_default_str();
  rec->callback([&] { action = [&] { return run_recover(globals, rc); }; });

  // check-spars
  SparsOpts sp;
  auto* spars = app.add_subcommand("check-spars", "cluster-sparsifier pass rate of AGM slots");
  spars->add_option("--graph", sp.graph)->required();
  spars->add_option("--delta", sp.delta)->capture_default_str();
  spars->add_option("--clusters", sp.clusters)->capture_default_str();
  spars->add_option("--max-size", sp.max_size)->capture_default_str();
  spars->add_option("--churn", sp.churn)->capture_default_str();
  spars->add_option("--sketch-C", sp.sketch_C)->capture_default_str();
  spars->add_option("--samples-per-n2", sp.samples_per_n2, "sampled global cuts per n^2")->capture_default_str();
  spars->add_option("--min-pass", sp.min_pass, "required pass rate")->capture_default_str();
  spars->callback([&] { action = [&] { return run_check_spars(globals, sp); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    return action();
  } catch (const TheoryViolation& e) {
    std::cerr << "TheoryViolation: " << e.what() << "\n";
    return kExitInternal;
  } catch (const ProvisioningError& e) {
    std::cerr << "ProvisioningError: " << e.what() << "\n";
    return kExitInternal;
  } catch (const ParameterError& e) {
    std::cerr << "ParameterError: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "DomainError: " << e.what() << "\n";
    return kExitUsage;
  } catch (const FormatError& e) {
    std::cerr << "FormatError: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SizeError& e) {
    std::cerr << "SizeError: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DecodeError& e) {
    std::cerr << "DecodeError: " << e.what() << "\n";
    return kExitCheckFailed;
  } catch (const Error& e) {
    std::cerr << "Error: " << e.what() << "\n";
    return kExitUsage;
  }
}
