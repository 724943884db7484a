#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace anchoreval {

// All randomness in the toolkit flows through this generator so that runs are
// reproducible bit-for-bit across platforms. std::mt19937 plus the standard
// distributions would tie output bytes to the standard library version, so
// the generator and the distributions are spelled out here.

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Counter-derived child seeds: derive_seed(master, {a, b}) is stable and
// collision-resistant enough for experiment fan-out (per instruction, per
// trial, per repeat). Parallel workers seeded this way produce the same
// stream regardless of scheduling.
inline uint64_t derive_seed(uint64_t master, std::initializer_list<uint64_t> path) {
  uint64_t s = splitmix64(master ^ 0x8f462907de7f1c3dull);
  for (uint64_t p : path) s = splitmix64(s ^ splitmix64(p + 0x2545f4914f6cdd1dull));
  return s;
}

class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    uint64_t x = state_;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  }

  // [0, 1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double normal(double mean = 0.0, double sd = 1.0) {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    double u2 = uniform();
    double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
    return mean + sd * z;
  }

  // Uniform integer in [0, n); rejection sampling keeps it exactly uniform.
  uint64_t below(uint64_t n) {
    if (n <= 1) return 0;
    uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t x = next_u64();
    while (x >= limit) x = next_u64();
    return x % n;
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  // k distinct indices sampled from [0, n), in random order.
  std::vector<int> sample_indices(int n, int k) {
    std::vector<int> idx(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) idx[static_cast<size_t>(i)] = i;
    for (int i = 0; i < k; ++i) {
      int j = i + static_cast<int>(below(static_cast<uint64_t>(n - i)));
      std::swap(idx[static_cast<size_t>(i)], idx[static_cast<size_t>(j)]);
    }
    idx.resize(static_cast<size_t>(k));
    return idx;
  }

 private:
  uint64_t state_;
};

}  // namespace anchoreval
