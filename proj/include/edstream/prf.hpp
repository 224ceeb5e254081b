#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace eds {

// 128-bit key for the keyed pseudorandom function. Every random choice in the
// library is a deterministic function of one root Seed128 and a chain of
// labels, so any component can be replayed in isolation.
struct Seed128 {
  uint64_t hi = 0;
  uint64_t lo = 0;
  bool operator==(const Seed128&) const = default;
};

Seed128 seed_from_u64(uint64_t s);

// Labeled sub-seed: a pure function of (parent, label, index).
Seed128 derive_seed(const Seed128& parent, std::string_view label, uint64_t index = 0);

std::string seed_to_string(const Seed128& s);
// Inverse of seed_to_string (32 hex digits); throws FormatError otherwise.
Seed128 seed_from_string(std::string_view hex);

// SipHash-2-4 keyed by a Seed128 (libsodium's 128-bit-output variant).
class Prf {
 public:
  explicit Prf(const Seed128& key);
  struct Out {
    uint64_t a;
    uint64_t b;
  };
  Out hash(uint64_t x, uint64_t tweak = 0) const;
  uint64_t hash64(uint64_t x, uint64_t tweak = 0) const { return hash(x, tweak).a; }
  const Seed128& key() const { return key_; }

 private:
  Seed128 key_;
  unsigned char raw_[16];
};

// Generator for non-sketch randomness (graph generation, churn, sampling).
std::mt19937_64 make_rng(const Seed128& s);

}  // namespace eds
