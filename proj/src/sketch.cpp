#include "edstream/sketch.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace eds {

namespace {

constexpr uint64_t kPrime = (uint64_t{1} << 61) - 1;

uint64_t mod_p(uint64_t x) {
  x = (x & kPrime) + (x >> 61);
  return x >= kPrime ? x - kPrime : x;
}

uint64_t signed_mod_p(int64_t v) {
  if (v >= 0) return mod_p(static_cast<uint64_t>(v));
  uint64_t m = mod_p(static_cast<uint64_t>(-(v + 1)) + 1);
  return m == 0 ? 0 : kPrime - m;
}

uint64_t add_p(uint64_t a, uint64_t b) {
  uint64_t s = a + b;
  return s >= kPrime ? s - kPrime : s;
}

uint64_t mul_p(uint64_t a, uint64_t b) {
  unsigned __int128 prod = static_cast<unsigned __int128>(a) * b;
  uint64_t lo = static_cast<uint64_t>(prod & kPrime);
  uint64_t hi = static_cast<uint64_t>(prod >> 61);
  return mod_p(lo + hi);
}

struct Dsu {
  std::vector<int> parent;
  explicit Dsu(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (a > b) std::swap(a, b);
    parent[b] = a;  // smaller id stays root: keeps decode order deterministic
    return true;
  }
};

}  // namespace

// ---------------------------------------------------------------- L0Sampler

int L0Sampler::levels_for(uint64_t universe) {
  int bits = 1;
  while (bits < 62 && (uint64_t{1} << bits) < universe) ++bits;
  return bits + 2;
}

L0Sampler::L0Sampler(const Seed128& seed, uint64_t universe, int reps)
    : key_(seed), prf_(seed), universe_(universe), reps_(reps), levels_(levels_for(universe)) {
  if (universe == 0) throw DomainError("l0-sampler universe must be non-empty");
  if (reps < 1) throw DomainError("l0-sampler needs at least one repetition");
  cells_.assign(static_cast<size_t>(reps_) * levels_, L0Cell{});
}

L0Sampler::Location L0Sampler::locate(uint64_t index) const {
  if (index >= universe_) throw DomainError("l0-sampler index out of range");
  Location loc;
  loc.depth.resize(reps_);
  loc.fingerprint.resize(reps_);
  for (int r = 0; r < reps_; ++r) {
    auto h = prf_.hash(index, static_cast<uint64_t>(r));
    int d = h.a == 0 ? 63 : __builtin_ctzll(h.a);
    loc.depth[r] = static_cast<uint8_t>(std::min(d, levels_ - 1));
    loc.fingerprint[r] = mod_p(h.b);
  }
  return loc;
}

void L0Sampler::apply(const Location& loc, uint64_t index, int64_t delta) {
  if (delta == 0) return;
  const int64_t weighted = delta * static_cast<int64_t>(index + 1);
  const uint64_t dm = signed_mod_p(delta);
  for (int r = 0; r < reps_; ++r) {
    const uint64_t fterm = mul_p(dm, loc.fingerprint[r]);
    L0Cell* row = &cells_[static_cast<size_t>(r) * levels_];
    for (int l = 0; l <= loc.depth[r]; ++l) {
      row[l].count += delta;
      row[l].isum += weighted;
      row[l].fp = add_p(row[l].fp, fterm);
    }
  }
}

bool L0Sampler::one_sparse(int rep, int level, L0Result& out) const {
  const L0Cell& c = cells_[static_cast<size_t>(rep) * levels_ + level];
  if (c.count == 0 || c.isum % c.count != 0) return false;
  int64_t idx1 = c.isum / c.count;
  if (idx1 < 1 || static_cast<uint64_t>(idx1) > universe_) return false;
  uint64_t idx = static_cast<uint64_t>(idx1 - 1);
  auto h = prf_.hash(idx, static_cast<uint64_t>(rep));
  int d = h.a == 0 ? 63 : __builtin_ctzll(h.a);
  if (std::min(d, levels_ - 1) < level) return false;
  if (mul_p(signed_mod_p(c.count), mod_p(h.b)) != c.fp) return false;
  out.status = L0Result::kFound;
  out.index = idx;
  out.value = c.count;
  return true;
}

L0Result L0Sampler::decode() const {
  L0Result res;
  if (cells_[0].zero()) {
    // Level 0 of a repetition holds the whole vector.
    res.status = L0Result::kEmpty;
    return res;
  }
  for (int r = 0; r < reps_; ++r) {
    int deepest = -1;
    for (int l = levels_ - 1; l >= 0; --l)
      if (!cells_[static_cast<size_t>(r) * levels_ + l].zero()) {
        deepest = l;
        break;
      }
    if (deepest >= 0 && one_sparse(r, deepest, res)) return res;
  }
  res.status = L0Result::kFail;
  return res;
}

void L0Sampler::add(const L0Sampler& o, int sign) {
  if (!(o.key_ == key_) || o.cells_.size() != cells_.size())
    throw DomainError("adding l0-samplers with different seeds or shapes");
  for (size_t i = 0; i < cells_.size(); ++i) {
    const L0Cell& b = o.cells_[i];
    L0Cell& a = cells_[i];
    if (sign > 0) {
      a.count += b.count;
      a.isum += b.isum;
      a.fp = add_p(a.fp, b.fp);
    } else {
      a.count -= b.count;
      a.isum -= b.isum;
      a.fp = add_p(a.fp, b.fp == 0 ? 0 : kPrime - b.fp);
    }
  }
}

bool L0Sampler::is_zero() const {
  return std::all_of(cells_.begin(), cells_.end(), [](const L0Cell& c) { return c.zero(); });
}

void L0Sampler::write(BlobWriter& w) const {
  for (const auto& c : cells_) {
    w.i64(c.count);
    w.i64(c.isum);
    w.u64(c.fp);
  }
}

void L0Sampler::read_cells(BlobReader& r) {
  for (auto& c : cells_) {
    c.count = r.i64();
    c.isum = r.i64();
    c.fp = r.u64();
    if (c.fp >= kPrime) throw FormatError("l0 fingerprint out of range");
  }
}

// --------------------------------------------------------------- ForestSketch

int ForestSketch::rounds_for(int n) {
  int lg = 0;
  while ((1 << lg) < std::max(n, 2)) ++lg;
  return lg + 1 + kRetryRounds;
}

ForestSketch::ForestSketch(int n, const Seed128& seed) : n_(n), rounds_(rounds_for(n)), seed_(seed) {
  if (n < 1) throw DomainError("forest sketch needs at least one vertex");
  const uint64_t universe = static_cast<uint64_t>(n) * n;
  samplers_.reserve(static_cast<size_t>(rounds_) * n);
  for (int r = 0; r < rounds_; ++r) {
    Seed128 rs = derive_seed(seed, "round", static_cast<uint64_t>(r));
    for (int v = 0; v < n; ++v) samplers_.emplace_back(rs, universe);
  }
}

size_t ForestSketch::words() const { return samplers_.size() * samplers_.front().words(); }

void ForestSketch::update(int u, int v, int64_t delta) {
  if (u < 0 || v < 0 || u >= n_ || v >= n_ || u == v) throw DomainError("forest sketch update endpoints invalid");
  if (u > v) std::swap(u, v);
  const uint64_t idx = pair_index(u, v);
  for (int r = 0; r < rounds_; ++r) {
    L0Sampler& su = samplers_[static_cast<size_t>(r) * n_ + u];
    auto loc = su.locate(idx);
    su.apply(loc, idx, delta);
    samplers_[static_cast<size_t>(r) * n_ + v].apply(loc, idx, -delta);
  }
}

void ForestSketch::add(const ForestSketch& o, int sign) {
  if (!(o.seed_ == seed_) || o.n_ != n_) throw DomainError("adding forest sketches with different seeds");
  for (size_t i = 0; i < samplers_.size(); ++i) samplers_[i].add(o.samplers_[i], sign);
}

ForestResult ForestSketch::decode() const {
  ForestResult res;
  Dsu dsu(n_);
  std::vector<char> finished(n_, 0);
  for (int r = 0; r < rounds_; ++r) {
    std::vector<std::vector<int>> members(n_);
    for (int v = 0; v < n_; ++v) members[dsu.find(v)].push_back(v);
    std::vector<int> active;
    for (int v = 0; v < n_; ++v)
      if (dsu.find(v) == v && !finished[v]) active.push_back(v);
    if (active.empty()) {
      res.ok = true;
      res.rounds_used = r;
      return res;
    }
    std::vector<VertexPair> found;
    for (int c : active) {
      L0Sampler sum = samplers_[static_cast<size_t>(r) * n_ + members[c][0]];
      for (size_t i = 1; i < members[c].size(); ++i)
        sum.add(samplers_[static_cast<size_t>(r) * n_ + members[c][i]]);
      L0Result out = sum.decode();
      if (out.status == L0Result::kEmpty) {
        finished[c] = 1;
        continue;
      }
      if (out.status != L0Result::kFound) continue;
      int a = static_cast<int>(out.index / n_), b = static_cast<int>(out.index % n_);
      if (a >= b) continue;
      bool a_in = dsu.find(a) == c, b_in = dsu.find(b) == c;
      // Exactly one endpoint inside, with the sign its incidence vector implies.
      if (a_in == b_in || (a_in && out.value <= 0) || (b_in && out.value >= 0)) continue;
      found.push_back({a, b});
    }
    for (const auto& e : found) {
      if (dsu.unite(e.first, e.second)) {
        res.edges.push_back(e);
        finished[dsu.find(e.first)] = 0;
      }
    }
  }
  for (int v = 0; v < n_; ++v)
    if (dsu.find(v) == v && !finished[v]) {
      res.ok = false;
      res.edges.clear();
      res.rounds_used = rounds_;
      res.failure = "Boruvka rounds exhausted with unfinished components";
      return res;
    }
  res.ok = true;
  res.rounds_used = rounds_;
  return res;
}

void ForestSketch::write(BlobWriter& w) const {
  w.u32(static_cast<uint32_t>(n_));
  w.u64(seed_.hi);
  w.u64(seed_.lo);
  for (const auto& s : samplers_) s.write(w);
}

ForestSketch ForestSketch::read(BlobReader& r) {
  int n = static_cast<int>(r.u32());
  Seed128 s;
  s.hi = r.u64();
  s.lo = r.u64();
  if (n < 1 || n > (1 << 20)) throw FormatError("forest sketch vertex count out of range");
  ForestSketch f(n, s);
  for (auto& smp : f.samplers_) smp.read_cells(r);
  return f;
}

// --------------------------------------------------------------- ConnWitSketch

ConnWitResult connwit_decode_banks(int n, int64_t k, const std::function<ForestSketch(int64_t)>& bank) {
  ConnWitResult res;
  res.witness = MultiGraph(n);
  for (int64_t i = 0; i < k; ++i) {
    ForestSketch b = bank(i);
    for (const auto& f : res.forests)
      for (const auto& e : f) b.update(e.first, e.second, -1);
    ForestResult fr = b.decode();
    res.banks_decoded = static_cast<int>(i + 1);
    if (!fr.ok) throw DecodeError("connectivity witness bank " + std::to_string(i) + ": " + fr.failure);
    if (fr.edges.empty()) break;
    for (const auto& e : fr.edges) res.witness.add_edge(e.first, e.second);
    res.forests.push_back(std::move(fr.edges));
  }
  return res;
}

Seed128 ConnWitSketch::bank_seed(const Seed128& seed, int64_t bank) {
  return derive_seed(seed, "bank", static_cast<uint64_t>(bank));
}

ConnWitSketch::ConnWitSketch(int n, int64_t k, const Seed128& seed) : n_(n), seed_(seed) {
  if (k < 1) throw DomainError("connectivity witness needs k >= 1");
  banks_.reserve(static_cast<size_t>(k));
  for (int64_t i = 0; i < k; ++i) banks_.emplace_back(n, bank_seed(seed, i));
}

void ConnWitSketch::update(int u, int v, int64_t delta) {
  for (auto& b : banks_) b.update(u, v, delta);
}

ConnWitResult ConnWitSketch::decode() const {
  return connwit_decode_banks(n_, k(), [this](int64_t i) { return banks_[static_cast<size_t>(i)]; });
}

size_t ConnWitSketch::words() const { return banks_.empty() ? 0 : banks_.size() * banks_.front().words(); }

Blob ConnWitSketch::serialize() const {
  BlobWriter w;
  w.magic("ECW1", 1);
  w.u32(static_cast<uint32_t>(n_));
  w.u64(static_cast<uint64_t>(banks_.size()));
  w.u64(seed_.hi);
  w.u64(seed_.lo);
  for (const auto& b : banks_) b.write(w);
  return w.take();
}

ConnWitSketch ConnWitSketch::deserialize(const Blob& blob) {
  BlobReader r(blob);
  if (r.magic("ECW1") != 1) throw FormatError("unsupported connectivity witness blob version");
  ConnWitSketch cw;
  cw.n_ = static_cast<int>(r.u32());
  uint64_t k = r.u64();
  cw.seed_.hi = r.u64();
  cw.seed_.lo = r.u64();
  if (k > (1u << 20)) throw FormatError("connectivity witness bank count out of range");
  for (uint64_t i = 0; i < k; ++i) {
    cw.banks_.push_back(ForestSketch::read(r));
    if (!(cw.banks_.back().seed() == bank_seed(cw.seed_, static_cast<int64_t>(i))) || cw.banks_.back().n() != cw.n_)
      throw FormatError("connectivity witness bank seed mismatch");
  }
  r.expect_done();
  return cw;
}

}  // namespace eds
