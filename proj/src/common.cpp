#include "edstream/common.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace eds {

void normalize_cluster(Cluster& c) {
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
}

bool is_normalized(const Cluster& c) {
  for (size_t i = 1; i < c.size(); ++i)
    if (c[i - 1] >= c[i]) return false;
  return true;
}

Cluster complement_in(const Cluster& parent, const Cluster& subset) {
  Cluster out;
  std::set_difference(parent.begin(), parent.end(), subset.begin(), subset.end(),
                      std::back_inserter(out));
  return out;
}

Cluster range_cluster(int n) {
  Cluster c(n);
  for (int i = 0; i < n; ++i) c[i] = i;
  return c;
}

void Partition::canonicalize() {
  for (auto& c : clusters) normalize_cluster(c);
  clusters.erase(std::remove_if(clusters.begin(), clusters.end(),
                                [](const Cluster& c) { return c.empty(); }),
                 clusters.end());
  std::sort(clusters.begin(), clusters.end(),
            [](const Cluster& a, const Cluster& b) { return a.front() < b.front(); });
}

void Partition::validate(int n) const {
  std::vector<char> seen(n, 0);
  for (const auto& c : clusters) {
    if (c.empty()) throw DomainError("partition contains an empty cluster");
    for (int v : c) {
      if (v < 0 || v >= n) throw DomainError("partition vertex out of range: " + std::to_string(v));
      if (seen[v]) throw DomainError("partition clusters overlap at vertex " + std::to_string(v));
      seen[v] = 1;
    }
  }
  for (int v = 0; v < n; ++v)
    if (!seen[v]) throw DomainError("partition does not cover vertex " + std::to_string(v));
}

std::vector<int> Partition::owner(int n) const {
  std::vector<int> own(n, -1);
  for (size_t i = 0; i < clusters.size(); ++i)
    for (int v : clusters[i])
      if (v >= 0 && v < n) own[v] = static_cast<int>(i);
  return own;
}

Partition Partition::singletons(int n) {
  Partition p;
  for (int v = 0; v < n; ++v) p.clusters.push_back({v});
  return p;
}

Partition Partition::whole(int n) {
  Partition p;
  if (n > 0) p.clusters.push_back(range_cluster(n));
  return p;
}

void parallel_for(size_t count, int threads, const std::function<void(size_t)>& fn) {
  if (threads <= 1 || count <= 1) {
    for (size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::exception_ptr first_error;
  std::mutex err_mu;
  auto worker = [&] {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lk(err_mu);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  int t = static_cast<int>(std::min<size_t>(count, static_cast<size_t>(threads)));
  for (int i = 0; i < t; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace eds
