#ifndef GGLOPT_CORE_RNG_HPP_
#define GGLOPT_CORE_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <random>

namespace gglopt {

// Seedable generator built on std::mt19937_64, whose output stream is fixed by
// the standard. Uniform and normal draws are derived from the raw 64-bit
// stream with explicit formulas instead of std::*_distribution, whose
// algorithms vary between standard library implementations.
class Rng {
 public:
  static constexpr const char* kAlgorithm = "mt19937_64";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller; consumes two uniforms per pair of draws.
  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    cached_ = r * std::sin(a);
    have_cached_ = true;
    return r * std::cos(a);
  }

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace gglopt

#endif  // GGLOPT_CORE_RNG_HPP_
