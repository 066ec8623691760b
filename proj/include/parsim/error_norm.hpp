#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "parsim/errors.hpp"
#include "parsim/special.hpp"
#include "parsim/types.hpp"

namespace parsim {

// Gaussian noise with known standard deviation acting on n observations.
template <typename Scalar>
struct NoiseModel {
  Scalar sigma;
  Index n;

  NoiseModel(Scalar sigma_in, Index n_in) : sigma(sigma_in), n(n_in) {
    if (!(sigma > Scalar(0)) || !std::isfinite(static_cast<double>(sigma))) {
      throw NonPositiveSigmaError("noise sigma must be positive and finite");
    }
    if (n < 1) {
      throw DimensionMismatchError("noise model needs n >= 1 observations");
    }
  }
};

// Exact uses the chi-distribution moments of ||e||; Approximate uses the
// large-n surrogates mean = sqrt(n-1) sigma, variance = sigma^2.
enum class BoundMode { Exact, Approximate };

inline const char* to_string(BoundMode mode) {
  return mode == BoundMode::Exact ? "exact" : "approximate";
}

template <typename Scalar>
struct MeanVariance {
  Scalar mean;
  Scalar variance;
};

template <typename Scalar>
struct ErrorBound {
  Scalar value;  // the k-sigma ceiling on ||e||
  Scalar k;
  BoundMode mode;
};

// log density of the error norm r = ||e|| for n iid N(0, sigma^2) errors:
// a chi distribution with n degrees of freedom scaled by sigma.
template <typename Scalar>
Scalar error_norm_log_pdf(Scalar r, const NoiseModel<Scalar>& noise) {
  if (r < Scalar(0)) {
    throw NegativeRadiusError("error norm must be nonnegative");
  }
  const Scalar n = static_cast<Scalar>(noise.n);
  const Scalar two_sigma_sq = Scalar(2) * noise.sigma * noise.sigma;
  if (r == Scalar(0)) {
    // r^(n-1) in the density: finite only for n = 1, zero for n > 1.
    if (noise.n > 1) return -std::numeric_limits<Scalar>::infinity();
    return ln_2<Scalar> - (n / Scalar(2)) * std::log(two_sigma_sq) -
           Scalar(log_gamma(n / Scalar(2)));
  }
  return ln_2<Scalar> + (n - Scalar(1)) * std::log(r) - r * r / two_sigma_sq -
         (n / Scalar(2)) * std::log(two_sigma_sq) - Scalar(log_gamma(n / Scalar(2)));
}

template <typename Scalar>
Scalar error_norm_pdf(Scalar r, const NoiseModel<Scalar>& noise) {
  return std::exp(error_norm_log_pdf(r, noise));
}

namespace detail {

// E ||e||^order for sigma = 1: 2^(order/2) Gamma((n+order)/2) / Gamma(n/2).
// Even orders telescope to the exact product n (n+2) ... (n+order-2), which
// keeps the second moment identically n instead of a log-gamma round trip.
template <typename Scalar>
Scalar scaled_error_norm_moment(int order, Index n) {
  if (order < 1) {
    throw DimensionMismatchError("moment order must be >= 1");
  }
  const Scalar half_n = static_cast<Scalar>(n) / Scalar(2);
  if (order % 2 == 0) {
    Scalar product = Scalar(1);
    for (int j = 0; j < order / 2; ++j) {
      product *= static_cast<Scalar>(n + 2 * j);
    }
    return product;
  }
  return std::exp(static_cast<Scalar>(order) / Scalar(2) * ln_2<Scalar> +
                  Scalar(log_gamma(half_n + static_cast<Scalar>(order) / Scalar(2))) -
                  Scalar(log_gamma(half_n)));
}

template <typename Scalar>
MeanVariance<Scalar> scaled_error_norm_mean_var(Index n, BoundMode mode) {
  if (mode == BoundMode::Approximate) {
    if (n < 2) {
      throw ApproximationInvalidError(
          "approximate error-norm moments need n >= 2, got n = " + std::to_string(n));
    }
    return {std::sqrt(static_cast<Scalar>(n - 1)), Scalar(1)};
  }
  const Scalar mean = scaled_error_norm_moment<Scalar>(1, n);
  return {mean, scaled_error_norm_moment<Scalar>(2, n) - mean * mean};
}

// (mean + k std) / sigma. Kept sigma-free so bounds scale exactly in sigma.
template <typename Scalar>
Scalar scaled_max_error_norm(Index n, Scalar k, BoundMode mode) {
  if (!(k >= Scalar(0))) {
    throw NonPositiveBoundError("bound multiplier k must be nonnegative");
  }
  const MeanVariance<Scalar> mv = scaled_error_norm_mean_var<Scalar>(n, mode);
  return mv.mean + k * std::sqrt(mv.variance);
}

}  // namespace detail

template <typename Scalar>
Scalar error_norm_moment(int order, const NoiseModel<Scalar>& noise) {
  return detail::scaled_error_norm_moment<Scalar>(order, noise.n) *
         std::pow(noise.sigma, static_cast<Scalar>(order));
}

template <typename Scalar>
MeanVariance<Scalar> error_norm_mean_var(const NoiseModel<Scalar>& noise, BoundMode mode) {
  const MeanVariance<Scalar> scaled = detail::scaled_error_norm_mean_var<Scalar>(noise.n, mode);
  return {scaled.mean * noise.sigma, scaled.variance * noise.sigma * noise.sigma};
}

// k-standard-deviation ceiling on the error norm: mean + k std of ||e||.
template <typename Scalar>
ErrorBound<Scalar> max_error_norm(const NoiseModel<Scalar>& noise, Scalar k, BoundMode mode) {
  return {detail::scaled_max_error_norm<Scalar>(noise.n, k, mode) * noise.sigma, k, mode};
}

}  // namespace parsim
