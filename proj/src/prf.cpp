#include "edstream/prf.hpp"

#include <sodium.h>

#include <cstdio>
#include <cstring>
#include <stdexcept>
#include <vector>

#include "edstream/common.hpp"

namespace eds {

namespace {

void store_le(unsigned char* dst, uint64_t v) {
  for (int i = 0; i < 8; ++i) dst[i] = static_cast<unsigned char>(v >> (8 * i));
}

uint64_t load_le(const unsigned char* src) {
  uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | src[i];
  return v;
}

void key_bytes(const Seed128& s, unsigned char out[16]) {
  store_le(out, s.lo);
  store_le(out + 8, s.hi);
}

struct SodiumInit {
  SodiumInit() {
    if (sodium_init() < 0) throw std::runtime_error("libsodium initialisation failed");
  }
};

void ensure_sodium() { static SodiumInit once; }

}  // namespace

Seed128 seed_from_u64(uint64_t s) {
  return derive_seed(Seed128{0x6564737472656d31ULL, 0x726f6f742d736565ULL}, "root", s);
}

Seed128 derive_seed(const Seed128& parent, std::string_view label, uint64_t index) {
  ensure_sodium();
  unsigned char key[16];
  key_bytes(parent, key);
  std::vector<unsigned char> msg(label.size() + 9);
  std::memcpy(msg.data(), label.data(), label.size());
  msg[label.size()] = 0;  // separator so ("ab",x) and ("a",...) never collide
  store_le(msg.data() + label.size() + 1, index);
  unsigned char out[16];
  crypto_shorthash_siphashx24(out, msg.data(), msg.size(), key);
  return Seed128{load_le(out + 8), load_le(out)};
}

std::string seed_to_string(const Seed128& s) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(s.hi),
                static_cast<unsigned long long>(s.lo));
  return buf;
}

Seed128 seed_from_string(std::string_view hex) {
  if (hex.size() != 32) throw FormatError("seed must be 32 hex digits");
  auto part = [&](std::string_view h) {
    uint64_t x = 0;
    for (char c : h) {
      int v;
      if (c >= '0' && c <= '9') v = c - '0';
      else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
      else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
      else throw FormatError("seed contains a non-hex digit");
      x = (x << 4) | static_cast<uint64_t>(v);
    }
    return x;
  };
  return Seed128{part(hex.substr(0, 16)), part(hex.substr(16))};
}

Prf::Prf(const Seed128& key) : key_(key) {
  ensure_sodium();
  key_bytes(key, raw_);
}

Prf::Out Prf::hash(uint64_t x, uint64_t tweak) const {
  unsigned char msg[16];
  store_le(msg, x);
  store_le(msg + 8, tweak);
  unsigned char out[16];
  crypto_shorthash_siphashx24(out, msg, sizeof msg, raw_);
  return Out{load_le(out), load_le(out + 8)};
}

std::mt19937_64 make_rng(const Seed128& s) {
  std::seed_seq seq{static_cast<uint32_t>(s.lo), static_cast<uint32_t>(s.lo >> 32),
                    static_cast<uint32_t>(s.hi), static_cast<uint32_t>(s.hi >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace eds
