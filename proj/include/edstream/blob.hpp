#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "edstream/common.hpp"

namespace eds {

using Blob = std::vector<uint8_t>;

// Little-endian binary writer for versioned sketch blobs.
class BlobWriter {
 public:
  void u8(uint8_t v) { out_.push_back(v); }
  void u32(uint32_t v);
  void u64(uint64_t v);
  void i64(int64_t v) { u64(static_cast<uint64_t>(v)); }
  void f64(double v);
  void str(const std::string& s);
  void magic(const char tag[4], uint32_t version);
  Blob take() { return std::move(out_); }
  size_t size() const { return out_.size(); }

 private:
  Blob out_;
};

class BlobReader {
 public:
  explicit BlobReader(const Blob& b) : data_(b) {}
  uint8_t u8();
  uint32_t u32();
  uint64_t u64();
  int64_t i64() { return static_cast<int64_t>(u64()); }
  double f64();
  std::string str();
  // Checks the 4-byte tag and returns the version.
  uint32_t magic(const char tag[4]);
  bool done() const { return pos_ == data_.size(); }
  void expect_done() const;

 private:
  void need(size_t k) const;
  const Blob& data_;
  size_t pos_ = 0;
};

}  // namespace eds
