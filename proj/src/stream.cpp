#include "edstream/stream.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace eds {

namespace {

int parse_vertex(const std::string& s, int lineno) {
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || v < 0)
    throw FormatError("stream line " + std::to_string(lineno) + ": bad vertex '" + s + "'");
  return v;
}

}  // namespace

EdgeStream read_stream(std::istream& in) {
  EdgeStream s;
  int declared = -1, max_id = -1, lineno = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ss(line);
    std::string op, a, b, extra;
    if (!(ss >> op)) continue;
    if (op == "n") {
      if (!(ss >> a) || (ss >> extra)) throw FormatError("stream line " + std::to_string(lineno) + ": 'n <count>' expected");
      declared = parse_vertex(a, lineno);
      continue;
    }
    if ((op != "+" && op != "-") || !(ss >> a >> b) || (ss >> extra))
      throw FormatError("stream line " + std::to_string(lineno) + ": '+ u v' or '- u v' expected");
    StreamUpdate upd{op == "+", parse_vertex(a, lineno), parse_vertex(b, lineno)};
    if (upd.u == upd.v) throw FormatError("stream line " + std::to_string(lineno) + ": self-loop update");
    max_id = std::max({max_id, upd.u, upd.v});
    s.updates.push_back(upd);
  }
  if (declared >= 0) {
    if (max_id >= declared) throw FormatError("stream vertex id exceeds declared n");
    s.n = declared;
  } else {
    s.n = max_id + 1;
  }
  return s;
}

EdgeStream load_stream(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open stream file '" + path + "'");
  return read_stream(in);
}

void write_stream(std::ostream& out, const EdgeStream& s) {
  out << "n " << s.n << '\n';
  for (const auto& u : s.updates) out << (u.insert ? '+' : '-') << ' ' << u.u << ' ' << u.v << '\n';
}

void LiveGraph::apply(int u, int v, int64_t delta) {
  if (u < 0 || v < 0 || u >= n_ || v >= n_ || u == v) throw StreamError("invalid stream update endpoints");
  auto key = sorted_pair(u, v);
  int64_t now = live_[key] + delta;
  if (now < 0) throw StreamError("deletion of absent edge " + std::to_string(u) + "-" + std::to_string(v));
  if (now == 0)
    live_.erase(key);
  else
    live_[key] = now;
}

void LiveGraph::apply(const StreamUpdate& upd) { apply(upd.u, upd.v, upd.insert ? 1 : -1); }

MultiGraph LiveGraph::to_multigraph() const {
  MultiGraph g(n_);
  for (const auto& [e, m] : live_) g.add_edge(e.first, e.second, m);
  return g;
}

MultiGraph replay(const EdgeStream& s) {
  LiveGraph live(s.n);
  for (const auto& u : s.updates) live.apply(u);
  return live.to_multigraph();
}

EdgeStream stream_with_churn(const MultiGraph& g, double churn, std::mt19937_64& rng) {
  EdgeStream s;
  s.n = g.n();
  // Each transient pair gets two slots; order within a pair is fixed afterwards.
  struct Tok {
    StreamUpdate upd;
    int pair_id;
  };
  std::vector<Tok> toks;
  for (const auto& [e, m] : g.edges())
    for (int64_t c = 0; c < m; ++c) toks.push_back({{true, e.first, e.second}, -1});
  int transient = static_cast<int>(std::llround(churn * static_cast<double>(g.num_edges())));
  if (g.n() >= 2) {
    std::uniform_int_distribution<int> pick(0, g.n() - 1);
    for (int t = 0; t < transient; ++t) {
      int u = pick(rng), v = pick(rng);
      while (v == u) v = pick(rng);
      toks.push_back({{true, u, v}, t});
      toks.push_back({{false, u, v}, t});
    }
  }
  std::shuffle(toks.begin(), toks.end(), rng);
  std::vector<int> first_pos(transient, -1);
  for (int i = 0; i < static_cast<int>(toks.size()); ++i) {
    int id = toks[i].pair_id;
    if (id < 0) continue;
    if (first_pos[id] < 0) {
      first_pos[id] = i;
      toks[i].upd.insert = true;
    } else {
      toks[i].upd.insert = false;
    }
  }
  for (const auto& t : toks) s.updates.push_back(t.upd);
  return s;
}

EdgeStream full_churn_stream(const MultiGraph& g, std::mt19937_64& rng) {
  EdgeStream s;
  s.n = g.n();
  std::vector<StreamUpdate> ins;
  for (const auto& [e, m] : g.edges())
    for (int64_t c = 0; c < m; ++c) ins.push_back({true, e.first, e.second});
  std::shuffle(ins.begin(), ins.end(), rng);
  s.updates = ins;
  std::shuffle(ins.begin(), ins.end(), rng);
  for (auto u : ins) {
    u.insert = false;
    s.updates.push_back(u);
  }
  return s;
}

}  // namespace eds
