#include "edstream/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace eds {

namespace {

struct GraphLine {
  std::string tag;
  std::vector<std::string> args;
};

bool next_line(std::istream& in, GraphLine& out, int& lineno) {
  std::string line;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ss(line);
    std::string tag;
    if (!(ss >> tag)) continue;
    out.tag = tag;
    out.args.clear();
    std::string a;
    while (ss >> a) out.args.push_back(a);
    return true;
  }
  return false;
}

int64_t parse_int(const std::string& s, int lineno) {
  int64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw FormatError("line " + std::to_string(lineno) + ": expected integer, got '" + s + "'");
  return v;
}

double parse_real(const std::string& s, int lineno) {
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v))
    throw FormatError("line " + std::to_string(lineno) + ": expected real, got '" + s + "'");
  return v;
}

template <class G, class Amount, class Parse>
G read_graph(std::istream& in, Parse parse_amount) {
  GraphLine gl;
  int lineno = 0;
  if (!next_line(in, gl, lineno) || gl.tag != "n" || gl.args.size() != 1)
    throw FormatError("graph text must start with 'n <count>'");
  int64_t n = parse_int(gl.args[0], lineno);
  if (n < 0 || n > (1 << 24)) throw FormatError("vertex count out of range");
  G g(static_cast<int>(n));
  auto vertex = [&](const std::string& s) {
    int64_t v = parse_int(s, lineno);
    if (v < 0 || v >= n)
      throw FormatError("line " + std::to_string(lineno) + ": vertex " + s + " out of range");
    return static_cast<int>(v);
  };
  while (next_line(in, gl, lineno)) {
    if (gl.tag == "e") {
      if (gl.args.size() < 2 || gl.args.size() > 3)
        throw FormatError("line " + std::to_string(lineno) + ": 'e u v [amount]' expected");
      int u = vertex(gl.args[0]), v = vertex(gl.args[1]);
      Amount a = gl.args.size() == 3 ? parse_amount(gl.args[2], lineno) : Amount(1);
      if (u == v) throw FormatError("line " + std::to_string(lineno) + ": use 'loop' for self-loops");
      g.add_edge(u, v, a);
    } else if (gl.tag == "loop") {
      if (gl.args.empty() || gl.args.size() > 2)
        throw FormatError("line " + std::to_string(lineno) + ": 'loop v [amount]' expected");
      int v = vertex(gl.args[0]);
      Amount a = gl.args.size() == 2 ? parse_amount(gl.args[1], lineno) : Amount(1);
      g.add_loop(v, a);
    } else {
      throw FormatError("line " + std::to_string(lineno) + ": unknown record '" + gl.tag + "'");
    }
  }
  return g;
}

}  // namespace

std::string fmt_real(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, p);
}

MultiGraph read_multigraph(std::istream& in) {
  return read_graph<MultiGraph, int64_t>(in, [](const std::string& s, int ln) {
    int64_t m = parse_int(s, ln);
    if (m < 0) throw FormatError("line " + std::to_string(ln) + ": negative multiplicity");
    return m;
  });
}

WeightedGraph read_weighted(std::istream& in) {
  return read_graph<WeightedGraph, double>(in, [](const std::string& s, int ln) {
    double w = parse_real(s, ln);
    if (w < 0) throw FormatError("line " + std::to_string(ln) + ": negative weight");
    return w;
  });
}

void write_multigraph(std::ostream& out, const MultiGraph& g) {
  out << "n " << g.n() << '\n';
  for (const auto& [e, m] : g.edges()) {
    out << "e " << e.first << ' ' << e.second;
    if (m != 1) out << ' ' << m;
    out << '\n';
  }
  for (int v = 0; v < g.n(); ++v)
    if (g.loops(v) > 0) out << "loop " << v << ' ' << g.loops(v) << '\n';
}

void write_weighted(std::ostream& out, const WeightedGraph& g) {
  out << "n " << g.n() << '\n';
  for (const auto& [e, w] : g.edges()) out << "e " << e.first << ' ' << e.second << ' ' << fmt_real(w) << '\n';
  for (int v = 0; v < g.n(); ++v)
    if (g.loop(v) > 0) out << "loop " << v << ' ' << fmt_real(g.loop(v)) << '\n';
}

Partition read_partition(std::istream& in) {
  Partition p;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.rfind("cluster ", 0) != 0) continue;
    auto colon = line.find(':');
    if (colon == std::string::npos) throw FormatError("line " + std::to_string(lineno) + ": missing ':'");
    std::istringstream ss(line.substr(colon + 1));
    Cluster c;
    std::string tok;
    while (ss >> tok) {
      int64_t v = parse_int(tok, lineno);
      if (v < 0 || v > (1 << 24)) throw FormatError("line " + std::to_string(lineno) + ": bad vertex");
      c.push_back(static_cast<int>(v));
    }
    p.clusters.push_back(std::move(c));
  }
  for (auto& c : p.clusters) normalize_cluster(c);
  return p;
}

void write_partition(std::ostream& out, const Partition& p) {
  for (size_t i = 0; i < p.clusters.size(); ++i) {
    out << "cluster " << i << ':';
    for (int v : p.clusters[i]) out << ' ' << v;
    out << '\n';
  }
}

MultiGraph load_multigraph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open graph file '" + path + "'");
  return read_multigraph(in);
}

Partition load_partition(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open partition file '" + path + "'");
  return read_partition(in);
}

}  // namespace eds
