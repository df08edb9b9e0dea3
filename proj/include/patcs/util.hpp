#pragma once

#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace patcs {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct GridMismatchError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct PartitionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Vec3 = std::array<double, 3>;

inline double dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline Vec3 sub(const Vec3& a, const Vec3& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}
inline Vec3 add(const Vec3& a, const Vec3& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}
inline Vec3 scale(const Vec3& a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }

/// Axis-aligned box. Closed on both sides.
struct Box3 {
  Vec3 lo{0, 0, 0};
  Vec3 hi{0, 0, 0};

  double diameter() const { return norm(sub(hi, lo)); }

  /// Squared distance from a point to the box (0 if inside).
  double dist2(const Vec3& p) const {
    double d2 = 0;
    for (int i = 0; i < 3; ++i) {
      double d = 0;
      if (p[i] < lo[i]) d = lo[i] - p[i];
      else if (p[i] > hi[i]) d = p[i] - hi[i];
      d2 += d * d;
    }
    return d2;
  }
  /// Largest distance from a point to any point of the box.
  double max_dist(const Vec3& p) const {
    double d2 = 0;
    for (int i = 0; i < 3; ++i) {
      double d = std::max(std::abs(p[i] - lo[i]), std::abs(p[i] - hi[i]));
      d2 += d * d;
    }
    return std::sqrt(d2);
  }
  bool intersects_ball(const Vec3& c, double r) const { return dist2(c) <= r * r; }
  /// Largest Euclidean norm over the box.
  double max_norm() const { return max_dist({0, 0, 0}); }
};

/// FNV-1a, used for config hashes and seed substream derivation.
inline std::uint64_t fnv1a(const void* data, std::size_t n,
                           std::uint64_t h = 0xcbf29ce484222325ull) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}
inline std::uint64_t fnv1a(const std::string& s,
                           std::uint64_t h = 0xcbf29ce484222325ull) {
  return fnv1a(s.data(), s.size(), h);
}

/// Static-chunked parallel loop. Each index is processed exactly once and
/// writes only to its own outputs, so results do not depend on the thread
/// count. `nthreads <= 1` runs inline.
inline void parallel_for(std::size_t n, int nthreads,
                         const std::function<void(std::size_t)>& body) {
  if (n == 0) return;
  if (nthreads <= 1 || n == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      body(i);
    }
  };
  std::vector<std::thread> pool;
  int k = std::min<std::size_t>(nthreads, n);
  pool.reserve(k);
  for (int t = 0; t < k; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

inline int default_threads() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

/// Trapezoid weight for sample i of n+1 uniformly spaced samples.
inline double trapezoid_weight(std::size_t i, std::size_t n_samples, double dt) {
  return (i == 0 || i + 1 == n_samples) ? 0.5 * dt : dt;
}

}  // namespace patcs
