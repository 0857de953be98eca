#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace mmsb {

// Seeded RNG wrapper. All distributions are derived from raw 64-bit draws
// so results do not depend on the standard library's distribution
// implementations; a given (seed, call sequence) reproduces bit-identically.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  // Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n), n > 0.
  int uniform_int(int n) {
    return static_cast<int>(gen_() % static_cast<uint64_t>(n));
  }

  // Standard normal via Box-Muller.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  double uniform_range(double lo, double hi) {
    return lo + (hi - lo) * uniform();
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (int i = static_cast<int>(v.size()) - 1; i > 0; --i) {
      std::swap(v[static_cast<size_t>(i)],
                v[static_cast<size_t>(uniform_int(i + 1))]);
    }
  }

  // Independent stream for a sub-task, decorrelated from this one.
  Rng fork(uint64_t salt) {
    return Rng(gen_() ^ (salt * 0x9e3779b97f4a7c15ULL));
  }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace mmsb
