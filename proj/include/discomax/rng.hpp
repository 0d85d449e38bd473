#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace discomax {

// Deterministic random source. mt19937_64 pins the bit stream; the derived
// doubles avoid std::*_distribution so values do not depend on the standard
// library implementation.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * kPi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  /// Uniform integer in [0, bound); bound must be nonzero.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (0ull - bound) % bound;
    std::uint64_t x = gen_();
    while (x < threshold) x = gen_();
    return x % bound;
  }

  /// Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

private:
  static constexpr double kPi = 3.14159265358979323846;
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace discomax
