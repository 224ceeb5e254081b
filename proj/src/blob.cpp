#include "edstream/blob.hpp"

#include <cstring>

namespace eds {

void BlobWriter::u32(uint32_t v) {
  for (int i = 0; i < 4; ++i) out_.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

void BlobWriter::u64(uint64_t v) {
  for (int i = 0; i < 8; ++i) out_.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

void BlobWriter::f64(double v) {
  uint64_t bits;
  std::memcpy(&bits, &v, sizeof bits);
  u64(bits);
}

void BlobWriter::str(const std::string& s) {
  u32(static_cast<uint32_t>(s.size()));
  out_.insert(out_.end(), s.begin(), s.end());
}

void BlobWriter::magic(const char tag[4], uint32_t version) {
  for (int i = 0; i < 4; ++i) out_.push_back(static_cast<uint8_t>(tag[i]));
  u32(version);
}

void BlobReader::need(size_t k) const {
  if (data_.size() - pos_ < k) throw FormatError("blob truncated");
}

uint8_t BlobReader::u8() {
  need(1);
  return data_[pos_++];
}

uint32_t BlobReader::u32() {
  need(4);
  uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | data_[pos_ + i];
  pos_ += 4;
  return v;
}

uint64_t BlobReader::u64() {
  need(8);
  uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | data_[pos_ + i];
  pos_ += 8;
  return v;
}

double BlobReader::f64() {
  uint64_t bits = u64();
  double v;
  std::memcpy(&v, &bits, sizeof v);
  return v;
}

std::string BlobReader::str() {
  uint32_t len = u32();
  need(len);
  std::string s(data_.begin() + pos_, data_.begin() + pos_ + len);
  pos_ += len;
  return s;
}

uint32_t BlobReader::magic(const char tag[4]) {
  need(4);
  for (int i = 0; i < 4; ++i)
    if (data_[pos_ + i] != static_cast<uint8_t>(tag[i]))
      throw FormatError(std::string("blob tag mismatch, expected ") + std::string(tag, 4));
  pos_ += 4;
  return u32();
}

void BlobReader::expect_done() const {
  if (!done()) throw FormatError("trailing bytes in blob");
}

}  // namespace eds
