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

namespace detail {

template <typename Scalar>
Scalar quadratic_level(const Matrix<Scalar>& gram, const Vector<Scalar>& center,
                       const Vector<Scalar>& beta) {
  if (beta.size() != center.size()) {
    throw DimensionMismatchError("posterior point has " + std::to_string(beta.size()) +
                                 " coordinates, expected " + std::to_string(center.size()));
  }
  const Vector<Scalar> delta = beta - center;
  return delta.dot(gram * delta);
}

}  // namespace detail

// Gaussian posterior of the coefficients for known sigma: mean beta_hat,
// precision X'X / sigma^2. The prior height cancels out of this density,
// so it carries no reference to the bound multiplier k.
template <typename Scalar>
struct NormalPosterior {
  Vector<Scalar> mean;
  Matrix<Scalar> gram;          // X'X
  Scalar precision_logdet = 0;  // ln|X'X / sigma^2|
  Scalar sigma = 1;

  Index m() const { return mean.size(); }

  Scalar log_density(const Vector<Scalar>& beta) const {
    const Scalar q = detail::quadratic_level(gram, mean, beta);
    const Scalar sigma_sq = sigma * sigma;
    return precision_logdet / Scalar(2) -
           static_cast<Scalar>(m()) / Scalar(2) * std::log(Scalar(2) * pi_v<Scalar>) -
           q / (Scalar(2) * sigma_sq);
  }

  Scalar density(const Vector<Scalar>& beta) const { return std::exp(log_density(beta)); }
};

template <typename Scalar>
NormalPosterior<Scalar> posterior_known_sigma(const FitResult<Scalar>& fit_result,
                                              const DesignMatrix<Scalar>& design,
                                              const NoiseModel<Scalar>& noise) {
  if (fit_result.m != design.cols() || fit_result.n != design.rows()) {
    throw DimensionMismatchError("fit result does not match the design matrix shape");
  }
  if (noise.n != design.rows()) {
    throw DimensionMismatchError("noise model covers " + std::to_string(noise.n) +
                                 " observations but the design has " +
                                 std::to_string(design.rows()) + " rows");
  }
  NormalPosterior<Scalar> posterior;
  posterior.mean = fit_result.beta_hat;
  posterior.gram = design.gram();
  posterior.precision_logdet =
      design.gram_logdet() -
      Scalar(2) * static_cast<Scalar>(design.cols()) * std::log(noise.sigma);
  posterior.sigma = noise.sigma;
  return posterior;
}

// Coefficient posterior with sigma marginalized out under A / sigma: a
// multivariate Student-t centered at beta_hat whose density depends on beta
// only through (beta - beta_hat)' X'X (beta - beta_hat) / res^2.
template <typename Scalar>
struct StudentTPosterior {
  Vector<Scalar> center;
  Matrix<Scalar> scale_gram;  // X'X
  Scalar scale_gram_logdet = 0;
  Scalar residual_norm = 0;
  Index n = 0;
  Index m = 0;
};

template <typename Scalar>
StudentTPosterior<Scalar> student_t_posterior(const FitResult<Scalar>& fit_result,
                                              const DesignMatrix<Scalar>& design) {
  if (fit_result.m != design.cols() || fit_result.n != design.rows()) {
    throw DimensionMismatchError("fit result does not match the design matrix shape");
  }
  if (!(fit_result.residual_norm > Scalar(0))) {
    throw PerfectFitError("model fits the data exactly; "
                          "the sigma-marginalized posterior diverges");
  }
  if (fit_result.n < 2) {
    throw ApproximationInvalidError("sigma-marginalized posterior needs n >= 2");
  }
  StudentTPosterior<Scalar> posterior;
  posterior.center = fit_result.beta_hat;
  posterior.scale_gram = design.gram();
  posterior.scale_gram_logdet = design.gram_logdet();
  posterior.residual_norm = fit_result.residual_norm;
  posterior.n = fit_result.n;
  posterior.m = fit_result.m;
  return posterior;
}

template <typename Scalar>
Scalar marginal_posterior_log_density(const Vector<Scalar>& beta,
                                      const StudentTPosterior<Scalar>& posterior) {
  if (!(posterior.residual_norm > Scalar(0))) {
    throw PerfectFitError("sigma-marginalized posterior needs a nonzero residual");
  }
  const Scalar q = detail::quadratic_level(posterior.scale_gram, posterior.center, beta);
  const Scalar n = static_cast<Scalar>(posterior.n);
  const Scalar m = static_cast<Scalar>(posterior.m);
  const Scalar res = posterior.residual_norm;
  return Scalar(log_gamma((n + m) / Scalar(2))) - Scalar(log_gamma(n / Scalar(2))) +
         posterior.scale_gram_logdet / Scalar(2) - m / Scalar(2) * ln_pi<Scalar> +
         n * std::log(res) - (n + m) / Scalar(2) * std::log(res * res + q);
}

template <typename Scalar>
Scalar marginal_posterior_density(const Vector<Scalar>& beta,
                                  const StudentTPosterior<Scalar>& posterior) {
  return std::exp(marginal_posterior_log_density(beta, posterior));
}

// Log density of the joint posterior p(beta, sigma | data) under the
// sigma prior A / sigma; the constant A cancels against the evidence.
template <typename Scalar>
Scalar log_joint_posterior_unknown_sigma(const Vector<Scalar>& beta, Scalar sigma,
                                         const StudentTPosterior<Scalar>& posterior) {
  if (!(sigma > Scalar(0))) {
    throw NonPositiveSigmaError("joint posterior needs sigma > 0");
  }
  if (!(posterior.residual_norm > Scalar(0))) {
    throw PerfectFitError("joint posterior needs a nonzero residual");
  }
  const Scalar q = detail::quadratic_level(posterior.scale_gram, posterior.center, beta);
  const Scalar n = static_cast<Scalar>(posterior.n);
  const Scalar m = static_cast<Scalar>(posterior.m);
  const Scalar res = posterior.residual_norm;
  return ln_2<Scalar> - Scalar(log_gamma(n / Scalar(2))) + n * std::log(res) +
         posterior.scale_gram_logdet / Scalar(2) - (n + m) / Scalar(2) * ln_2<Scalar> -
         m / Scalar(2) * ln_pi<Scalar> - (n + m + Scalar(1)) * std::log(sigma) -
         (res * res + q) / (Scalar(2) * sigma * sigma);
}

template <typename Scalar>
Scalar log_joint_posterior_unknown_sigma(const Vector<Scalar>& beta, Scalar sigma,
                                         const FitResult<Scalar>& fit_result,
                                         const DesignMatrix<Scalar>& design) {
  return log_joint_posterior_unknown_sigma(beta, sigma, student_t_posterior(fit_result, design));
}

// The unitless credibility coordinate
// (beta - beta_hat)' X'X (beta - beta_hat) / res^2 that indexes the
// posterior's elliptical contours; 0 at the center, 1 on the level set
// whose offset x satisfies x' X'X x = res^2.
template <typename Scalar>
Scalar credible_quadratic_level(const StudentTPosterior<Scalar>& posterior,
                                const Vector<Scalar>& beta) {
  if (!(posterior.residual_norm > Scalar(0))) {
    throw PerfectFitError("credibility coordinate needs a nonzero residual");
  }
  return detail::quadratic_level(posterior.scale_gram, posterior.center, beta) /
         (posterior.residual_norm * posterior.residual_norm);
}

}  // namespace parsim
