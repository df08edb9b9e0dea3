#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "patcs/util.hpp"

namespace patcs {

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}
}  // namespace detail

/// Counter-based generator: draw i of stream (seed, label) is a pure function
/// of (seed, label, i). Streams never share state, so parallel consumers and
/// reruns see identical sequences.
class RngStream {
 public:
  RngStream() = default;
  RngStream(std::uint64_t root_seed, const std::string& label)
      : key_(fnv1a(label, detail::splitmix64(root_seed))) {}

  std::uint64_t next_u64() { return detail::splitmix64(key_ ^ (0x9e3779b97f4a7c15ull * ++ctr_)); }

  /// Uniform in [0, 1).
  double uniform() { return (next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n) {
    // modulo bias is < 2^-40 for the n used here (n <= 2^24)
    return next_u64() % n;
  }

  /// Standard normal via Box-Muller.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 0x1.0p-60) u1 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  /// In-place Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = uniform_index(i);
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::uint64_t key_ = 0x853c49e6748fea9bull;
  std::uint64_t ctr_ = 0;
  double spare_ = 0;
  bool have_spare_ = false;
};

}  // namespace patcs
