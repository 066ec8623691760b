#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

#include "parsim/special.hpp"

namespace parsim {

// 64-bit FNV-1a; used to derive per-check RNG streams and input digests.
inline std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t state = 0xcbf29ce484222325ull) {
  for (const char c : bytes) {
    state ^= static_cast<unsigned char>(c);
    state *= 0x100000001b3ull;
  }
  return state;
}

// Deterministic stream of uniforms and Gaussians. The Gaussians come from a
// Box-Muller pair over the raw 53-bit uniforms, so a given (seed, name) pair
// reproduces the same draws on every run.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : engine_(seed) {}

  // Derives an independent stream per named consumer from one base seed.
  NormalStream(std::uint64_t seed, std::string_view name) : engine_(seed ^ fnv1a64(name)) {}

  // Uniform on (0, 1].
  double uniform_pos() {
    return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
  }

  // Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double radius = std::sqrt(-2.0 * std::log(uniform_pos()));
    const double angle = 2.0 * pi_v<double> * uniform();
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace parsim
