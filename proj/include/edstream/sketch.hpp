#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "edstream/blob.hpp"
#include "edstream/graph.hpp"
#include "edstream/prf.hpp"

namespace eds {

// ---------------------------------------------------------------- L0Sampler

// One 1-sparse recovery cell.
struct L0Cell {
  int64_t count = 0;  // sum of values
  int64_t isum = 0;   // sum of value * (index + 1)
  uint64_t fp = 0;    // sum of value * f(index) mod 2^61 - 1
  bool zero() const { return count == 0 && isum == 0 && fp == 0; }
  bool operator==(const L0Cell&) const = default;
};

struct L0Result {
  enum Status { kEmpty, kFound, kFail } status = kEmpty;
  uint64_t index = 0;
  int64_t value = 0;
};

// Linear l0-sampler over the index universe [0, universe). Each of `reps`
// repetitions assigns an index to levels 0..depth where depth is the number
// of trailing zero bits of a keyed hash, so level l holds about a 2^-l
// fraction of the support. Decoding looks at the deepest non-zero level of
// each repetition and accepts it when it passes the 1-sparse test.
class L0Sampler {
 public:
  static constexpr int kDefaultReps = 6;

  // Where an index lands in each repetition; shared by all samplers with the
  // same seed so a caller can hash once and update many samplers.
  struct Location {
    std::vector<uint8_t> depth;
    std::vector<uint64_t> fingerprint;
  };

  L0Sampler(const Seed128& seed, uint64_t universe, int reps = kDefaultReps);

  static int levels_for(uint64_t universe);
  Location locate(uint64_t index) const;
  void apply(const Location& loc, uint64_t index, int64_t delta);
  void update(uint64_t index, int64_t delta) { apply(locate(index), index, delta); }
  L0Result decode() const;

  // Cell-wise sum/difference; both samplers must share seed and shape.
  void add(const L0Sampler& o, int sign = 1);
  bool is_zero() const;
  bool operator==(const L0Sampler& o) const { return key_ == o.key_ && cells_ == o.cells_; }

  uint64_t universe() const { return universe_; }
  int reps() const { return reps_; }
  int levels() const { return levels_; }
  size_t words() const { return cells_.size() * 3; }
  const Seed128& seed() const { return key_; }

  void write(BlobWriter& w) const;
  void read_cells(BlobReader& r);

 private:
  bool one_sparse(int rep, int level, L0Result& out) const;
  Seed128 key_;
  Prf prf_;
  uint64_t universe_;
  int reps_;
  int levels_;
  std::vector<L0Cell> cells_;  // reps x levels
};

// --------------------------------------------------------------- ForestSketch

// Outcome of a spanning-forest decode. On failure `edges` is cleared: a
// failed decode never hands out a partial or wrong forest.
struct ForestResult {
  bool ok = false;
  std::vector<VertexPair> edges;
  int rounds_used = 0;
  std::string failure;
};

// A spanning-forest bank: for every Boruvka round, one l0-sampler per vertex
// over the signed incidence vector of that vertex (+1 on pairs where it is
// the smaller endpoint, -1 where it is the larger). Summing the samplers of a
// component cancels internal edges and leaves exactly its outgoing edges.
class ForestSketch {
 public:
  static constexpr int kRetryRounds = 3;

  ForestSketch(int n, const Seed128& seed);
  static int rounds_for(int n);

  void update(int u, int v, int64_t delta);
  ForestResult decode() const;

  int n() const { return n_; }
  int rounds() const { return rounds_; }
  size_t words() const;
  const Seed128& seed() const { return seed_; }
  bool operator==(const ForestSketch& o) const { return seed_ == o.seed_ && samplers_ == o.samplers_; }
  void add(const ForestSketch& o, int sign = 1);

  void write(BlobWriter& w) const;
  static ForestSketch read(BlobReader& r);

 private:
  uint64_t pair_index(int u, int v) const { return static_cast<uint64_t>(u) * n_ + v; }
  int n_;
  int rounds_;
  Seed128 seed_;
  std::vector<L0Sampler> samplers_;  // rounds x n
};

// --------------------------------------------------------------- ConnWitSketch

struct ConnWitResult {
  MultiGraph witness;                          // union of the recovered forests
  std::vector<std::vector<VertexPair>> forests;
  int banks_decoded = 0;
};

// Decodes banks 0..k-1 in order, subtracting every forest recovered so far
// from the next bank before decoding it. Stops early once a bank yields an
// empty forest: the residual graph is then empty and so are all later banks.
// Throws DecodeError when a bank fails.
ConnWitResult connwit_decode_banks(int n, int64_t k, const std::function<ForestSketch(int64_t)>& bank);

// k independent spanning-forest banks fed the same stream.
class ConnWitSketch {
 public:
  ConnWitSketch(int n, int64_t k, const Seed128& seed);

  static Seed128 bank_seed(const Seed128& seed, int64_t bank);

  void update(int u, int v, int64_t delta);
  ConnWitResult decode() const;

  int n() const { return n_; }
  int64_t k() const { return static_cast<int64_t>(banks_.size()); }
  const ForestSketch& bank(int64_t i) const { return banks_.at(i); }
  size_t words() const;
  bool operator==(const ConnWitSketch& o) const { return seed_ == o.seed_ && banks_ == o.banks_; }

  Blob serialize() const;
  static ConnWitSketch deserialize(const Blob& b);

 private:
  ConnWitSketch() = default;
  int n_ = 0;
  Seed128 seed_;
  std::vector<ForestSketch> banks_;
};

}  // namespace eds
