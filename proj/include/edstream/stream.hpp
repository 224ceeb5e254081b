#pragma once

#include <iosfwd>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "edstream/graph.hpp"

namespace eds {

struct StreamUpdate {
  bool insert = true;
  int u = 0;
  int v = 0;
  bool operator==(const StreamUpdate&) const = default;
};

struct EdgeStream {
  int n = 0;
  std::vector<StreamUpdate> updates;
};

// Stream file: optional `n <count>` header, then `+ u v` / `- u v` lines;
// '#' starts a comment. Without a header n is 1 + the largest id seen.
EdgeStream read_stream(std::istream& in);
EdgeStream load_stream(const std::string& path);
void write_stream(std::ostream& out, const EdgeStream& s);

// The running multiset of live edges; the ground truth a stream describes.
class LiveGraph {
 public:
  explicit LiveGraph(int n = 0) : n_(n) {}
  // Throws StreamError if a deletion would make a multiplicity negative.
  void apply(const StreamUpdate& upd);
  void apply(int u, int v, int64_t delta);
  int n() const { return n_; }
  const std::map<VertexPair, int64_t>& edges() const { return live_; }
  MultiGraph to_multigraph() const;

 private:
  int n_;
  std::map<VertexPair, int64_t> live_;
};

MultiGraph replay(const EdgeStream& s);

// Inserts every edge of g in random order, interleaved with round(churn*|E|)
// transient insert/delete pairs on random vertex pairs. The final live graph
// equals g.
EdgeStream stream_with_churn(const MultiGraph& g, double churn, std::mt19937_64& rng);

// Inserts every edge of g and then deletes every edge again.
EdgeStream full_churn_stream(const MultiGraph& g, std::mt19937_64& rng);

}  // namespace eds
