#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace eds {

// Error taxonomy. Everything derives from Error so callers can catch broadly;
// TheoryViolation is reserved for "this should be impossible" conditions and
// maps to CLI exit code 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class DomainError : public Error {
 public:
  using Error::Error;
};
class SizeError : public Error {
 public:
  using Error::Error;
};
class ParameterError : public Error {
 public:
  using Error::Error;
};
class FormatError : public Error {
 public:
  using Error::Error;
};
class StreamError : public Error {
 public:
  using Error::Error;
};
class DecodeError : public Error {
 public:
  using Error::Error;
};
class ProvisioningError : public Error {
 public:
  using Error::Error;
};
class TheoryViolation : public Error {
 public:
  using Error::Error;
};

// Relative tolerance for all floating-point equality and threshold tests.
constexpr double kRelTol = 1e-9;

// Default vertex cap for exhaustive cut enumeration.
constexpr int kBruteForceCap = 20;

inline bool approx_equal(double a, double b, double tol = kRelTol) {
  if (a == b) return true;
  double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
  return std::fabs(a - b) <= tol * scale;
}

// True iff cut / min_vol < psi, with values within the tolerance band of the
// threshold counted as not sparse. A zero min-side volume is never sparse
// (its sparsity is taken to be +infinity).
inline bool is_sparse(double cut, double min_vol, double psi) {
  if (!(min_vol > 0)) return false;
  return cut < psi * min_vol * (1.0 - kRelTol);
}

inline double log2n(double n) { return std::log2(n); }

// A cluster is a sorted, duplicate-free list of vertex ids.
using Cluster = std::vector<int>;

void normalize_cluster(Cluster& c);
bool is_normalized(const Cluster& c);
Cluster complement_in(const Cluster& parent, const Cluster& subset);
Cluster range_cluster(int n);

struct Partition {
  std::vector<Cluster> clusters;

  // Canonical order: clusters sorted by their smallest vertex.
  void canonicalize();
  // Throws DomainError unless the clusters are disjoint and cover exactly [0, n).
  void validate(int n) const;
  // cluster id per vertex (-1 for uncovered vertices).
  std::vector<int> owner(int n) const;
  static Partition singletons(int n);
  static Partition whole(int n);
  bool operator==(const Partition& o) const = default;
};

// Runs fn(i) for i in [0, count) on up to `threads` worker threads. Results
// must be written to per-index slots by fn so that output order never depends
// on scheduling.
void parallel_for(size_t count, int threads, const std::function<void(size_t)>& fn);

}  // namespace eds
