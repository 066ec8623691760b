#pragma once

#include <cmath>
#include <numbers>

namespace parsim {

// Thread-safe log-gamma. std::lgamma writes the global signgam on glibc,
// which is a data race when models are scored concurrently.
inline double log_gamma(double x) {
#ifdef __GLIBC__
  int sign = 0;
  return ::lgamma_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}

inline long double log_gamma(long double x) {
#ifdef __GLIBC__
  int sign = 0;
  return ::lgammal_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}

inline float log_gamma(float x) { return static_cast<float>(log_gamma(static_cast<double>(x))); }

template <typename Scalar>
inline constexpr Scalar ln_2 = std::numbers::ln2_v<Scalar>;

template <typename Scalar>
inline const Scalar ln_pi = std::log(std::numbers::pi_v<Scalar>);

template <typename Scalar>
inline constexpr Scalar pi_v = std::numbers::pi_v<Scalar>;

}  // namespace parsim
