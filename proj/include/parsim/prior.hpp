#pragma once

#include <cmath>
#include <string>
#include <utility>

#include "parsim/design.hpp"
#include "parsim/error_norm.hpp"
#include "parsim/errors.hpp"
#include "parsim/fit.hpp"
#include "parsim/special.hpp"
#include "parsim/types.hpp"

namespace parsim {

// Whether sigma is given (conditional analysis) or marginalized out under
// the scale-invariant prior A / sigma.
enum class SigmaMode { Known, Jeffreys };

inline const char* to_string(SigmaMode mode) {
  return mode == SigmaMode::Known ? "known" : "jeffreys";
}

template <typename Scalar>
struct PriorSpec {
  Scalar k = Scalar(6);                        // bound multiplier: max ||e|| = mean + k std
  BoundMode bound_mode = BoundMode::Exact;
  SigmaMode sigma_mode = SigmaMode::Known;
  Scalar jeffreys_a = Scalar(1);               // constant in the sigma prior A / sigma

  static PriorSpec known(Scalar k = Scalar(6), BoundMode mode = BoundMode::Exact) {
    return {k, mode, SigmaMode::Known, Scalar(1)};
  }

  static PriorSpec jeffreys(Scalar a = Scalar(1), Scalar k = Scalar(6)) {
    return {k, BoundMode::Approximate, SigmaMode::Jeffreys, a};
  }

  void validate() const {
    if (!(k >= Scalar(0)) || !std::isfinite(static_cast<double>(k))) {
      throw NonPositiveBoundError("prior bound multiplier k must be nonnegative");
    }
    if (!(jeffreys_a > Scalar(0)) || !std::isfinite(static_cast<double>(jeffreys_a))) {
      throw ValidationError("jeffreys prior constant A must be positive");
    }
    if (sigma_mode == SigmaMode::Jeffreys && bound_mode == BoundMode::Exact) {
      // With sigma marginalized out, the exact chi moments have no single
      // sigma to attach to; only the sigma-free sqrt(n-1) + k factor works.
      throw ValidationError("the exact bound mode requires a known sigma");
    }
  }
};

// The uniform coefficient prior: constant height on the ellipsoid
// {beta : (beta - center)' X'X (beta - center) <= max_error_norm^2}.
template <typename Scalar>
struct PriorDensity {
  Index m = 0;
  Scalar max_error_norm = 0;  // radius of the support in the X'X metric
  Scalar log_volume = 0;
  Scalar log_height = 0;      // == -log_volume
  Vector<Scalar> center;
};

// log volume of {beta : beta' X'X beta <= max_e^2}: the unit-ball volume
// pi^(m/2) / Gamma(m/2 + 1) stretched by max_e^m / det(X'X)^(1/2).
template <typename Scalar>
Scalar ellipsoid_log_volume(Index m, Scalar max_e, Scalar gram_logdet) {
  if (m < 1) {
    throw DimensionMismatchError("ellipsoid dimension must be >= 1");
  }
  if (!(max_e > Scalar(0))) {
    throw NonPositiveBoundError("ellipsoid radius must be positive");
  }
  const Scalar half_m = static_cast<Scalar>(m) / Scalar(2);
  return half_m * ln_pi<Scalar> - Scalar(log_gamma(half_m + Scalar(1))) +
         static_cast<Scalar>(m) * std::log(max_e) - gram_logdet / Scalar(2);
}

template <typename Scalar>
Scalar prior_log_height(Index m, Scalar max_e, Scalar gram_logdet) {
  return -ellipsoid_log_volume(m, max_e, gram_logdet);
}

// Builds the parsimonious uniform prior for a design under known noise.
// The center (the least-squares point in the intended use) does not affect
// the height or volume; callers that know it may pass it, otherwise the
// density is recorded as centered at the origin.
template <typename Scalar>
PriorDensity<Scalar> parsimonious_prior(const DesignMatrix<Scalar>& design,
                                        const NoiseModel<Scalar>& noise,
                                        const PriorSpec<Scalar>& spec,
                                        Vector<Scalar> center = Vector<Scalar>()) {
  spec.validate();
  if (spec.sigma_mode != SigmaMode::Known) {
    throw ValidationError("parsimonious_prior needs a known sigma; "
                          "the jeffreys mode folds the prior into the evidence");
  }
  if (noise.n != design.rows()) {
    throw DimensionMismatchError("noise model covers " + std::to_string(noise.n) +
                                 " observations but the design has " +
                                 std::to_string(design.rows()) + " rows");
  }
  if (center.size() == 0) {
    center = Vector<Scalar>::Zero(design.cols());
  } else if (center.size() != design.cols()) {
    throw DimensionMismatchError("prior center has " + std::to_string(center.size()) +
                                 " entries, expected " + std::to_string(design.cols()));
  }

  const ErrorBound<Scalar> bound = max_error_norm(noise, spec.k, spec.bound_mode);
  PriorDensity<Scalar> density;
  density.m = design.cols();
  density.max_error_norm = bound.value;
  density.log_volume = ellipsoid_log_volume(density.m, bound.value, design.gram_logdet());
  density.log_height = -density.log_volume;
  density.center = std::move(center);
  return density;
}

template <typename Scalar>
struct Interval {
  Scalar lo;
  Scalar hi;
};

// For a single-coefficient model the prior support is the interval
// beta_hat +/- max_e / ||x||.
template <typename Scalar>
Interval<Scalar> scalar_beta_bounds(const FitResult<Scalar>& fit_result, Scalar column_norm,
                                    Scalar max_e) {
  if (fit_result.m != 1) {
    throw NotUnivariateError("scalar_beta_bounds applies to single-coefficient models, got m = " +
                             std::to_string(fit_result.m));
  }
  if (!(column_norm > Scalar(0))) {
    throw NonPositiveBoundError("column norm must be positive");
  }
  if (!(max_e > Scalar(0))) {
    throw NonPositiveBoundError("error-norm bound must be positive");
  }
  const Scalar half_width = max_e / column_norm;
  return {fit_result.beta_hat(0) - half_width, fit_result.beta_hat(0) + half_width};
}

}  // namespace parsim
