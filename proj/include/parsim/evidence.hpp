#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "parsim/design.hpp"
#include "parsim/error_norm.hpp"
#include "parsim/errors.hpp"
#include "parsim/fit.hpp"
#include "parsim/prior.hpp"
#include "parsim/special.hpp"
#include "parsim/types.hpp"

namespace parsim {

// Log evidence of one model, split into the factors that drive selection.
// log_evidence is always computed as (log_occam + log_gof) + log_common so
// the additive identity holds exactly and model-independent terms cancel
// bitwise when models over the same data are compared.
//
// Known sigma: log_gof is the Gaussian likelihood factor
//   -(n/2) ln(2 pi sigma^2) - res^2 / (2 sigma^2) and log_common is 0.
// Jeffreys (sigma marginalized under A / sigma): log_gof is -n ln res and
//   log_common = ln A + ln Gamma(n/2) - ln 2 - (n/2) ln pi.
template <typename Scalar>
struct EvidenceReport {
  SigmaMode sigma_mode = SigmaMode::Known;
  Index n = 0;
  Index m = 0;
  Scalar k = 0;
  BoundMode bound_mode = BoundMode::Exact;
  Scalar residual_norm = 0;
  Scalar log_occam = 0;
  Scalar log_gof = 0;
  Scalar log_common = 0;
  Scalar log_evidence = 0;
};

namespace detail {

// Occam factor of an m-coefficient model whose prior ellipsoid radius is
// scaled_bound * sigma: the ratio of the posterior to the prior volume,
// 2^(m/2) Gamma(m/2 + 1) / scaled_bound^m in logs. m = 0 gives 0.
template <typename Scalar>
Scalar log_occam_factor_scaled(Index m, Scalar scaled_bound) {
  if (m == 0) return Scalar(0);
  const Scalar half_m = static_cast<Scalar>(m) / Scalar(2);
  return half_m * ln_2<Scalar> + Scalar(log_gamma(half_m + Scalar(1))) -
         static_cast<Scalar>(m) * std::log(scaled_bound);
}

}  // namespace detail

// Occam factor under the approximate bound max ||e|| = (sqrt(n-1) + k) sigma.
template <typename Scalar>
Scalar log_occam_factor(Index n, Index m, Scalar k) {
  if (m < 0) {
    throw DimensionMismatchError("model dimension must be >= 0");
  }
  if (m == 0) return Scalar(0);
  return detail::log_occam_factor_scaled(
      m, detail::scaled_max_error_norm<Scalar>(n, k, BoundMode::Approximate));
}

// Goodness-of-fit factor of the sigma-marginalized evidence: res^(-n) in log.
template <typename Scalar>
Scalar log_goodness_of_fit(Scalar residual_norm, Index n) {
  if (n < 1) {
    throw DimensionMismatchError("goodness of fit needs n >= 1");
  }
  if (!(residual_norm > Scalar(0))) {
    throw PerfectFitError("model fits the data exactly; "
                          "the sigma-marginalized evidence diverges");
  }
  return -static_cast<Scalar>(n) * std::log(residual_norm);
}

// Evidence of an m-coefficient linear model under known noise sigma:
// the likelihood at the fit times the Occam factor of the prior ellipsoid.
template <typename Scalar>
EvidenceReport<Scalar> log_evidence_known_sigma(Index n, Index m, Scalar residual_norm,
                                                const NoiseModel<Scalar>& noise,
                                                const PriorSpec<Scalar>& spec) {
  spec.validate();
  if (spec.sigma_mode != SigmaMode::Known) {
    throw ValidationError("log_evidence_known_sigma called with a jeffreys prior spec");
  }
  if (n < 1 || n != noise.n) {
    throw DimensionMismatchError("evidence: n must match the noise model and be >= 1");
  }
  if (m < 0 || m > n) {
    throw DimensionMismatchError("evidence needs 0 <= m <= n, got m = " + std::to_string(m) +
                                 ", n = " + std::to_string(n));
  }
  if (!(residual_norm >= Scalar(0))) {
    throw NegativeRadiusError("residual norm must be nonnegative");
  }

  EvidenceReport<Scalar> report;
  report.sigma_mode = SigmaMode::Known;
  report.n = n;
  report.m = m;
  report.k = spec.k;
  report.bound_mode = spec.bound_mode;
  report.residual_norm = residual_norm;
  report.log_occam =
      m == 0 ? Scalar(0)
             : detail::log_occam_factor_scaled(
                   m, detail::scaled_max_error_norm<Scalar>(n, spec.k, spec.bound_mode));
  const Scalar sigma_sq = noise.sigma * noise.sigma;
  report.log_gof = -static_cast<Scalar>(n) / Scalar(2) *
                       std::log(Scalar(2) * pi_v<Scalar> * sigma_sq) -
                   residual_norm * residual_norm / (Scalar(2) * sigma_sq);
  report.log_common = Scalar(0);
  report.log_evidence = (report.log_occam + report.log_gof) + report.log_common;
  return report;
}

// Evidence with sigma marginalized under the prior A / sigma. The bound on
// ||e|| must be the approximate one: it is the only form whose sigma
// dependence cancels out of the marginalization.
template <typename Scalar>
EvidenceReport<Scalar> log_evidence_unknown_sigma(Index n, Index m, Scalar residual_norm,
                                                  const PriorSpec<Scalar>& spec) {
  spec.validate();
  if (spec.sigma_mode != SigmaMode::Jeffreys) {
    throw ValidationError("log_evidence_unknown_sigma called with a known-sigma prior spec");
  }
  if (n < 2) {
    throw ApproximationInvalidError("sigma-marginalized evidence needs n >= 2, got n = " +
                                    std::to_string(n));
  }
  if (m < 0 || m > n) {
    throw DimensionMismatchError("evidence needs 0 <= m <= n, got m = " + std::to_string(m) +
                                 ", n = " + std::to_string(n));
  }

  EvidenceReport<Scalar> report;
  report.sigma_mode = SigmaMode::Jeffreys;
  report.n = n;
  report.m = m;
  report.k = spec.k;
  report.bound_mode = BoundMode::Approximate;
  report.residual_norm = residual_norm;
  report.log_occam = log_occam_factor<Scalar>(n, m, spec.k);
  report.log_gof = log_goodness_of_fit(residual_norm, n);
  report.log_common = std::log(spec.jeffreys_a) + Scalar(log_gamma(static_cast<Scalar>(n) / 2)) -
                      ln_2<Scalar> - static_cast<Scalar>(n) / Scalar(2) * ln_pi<Scalar>;
  report.log_evidence = (report.log_occam + report.log_gof) + report.log_common;
  return report;
}

// Convenience overloads taking a completed fit against its design.
template <typename Scalar>
EvidenceReport<Scalar> log_evidence_known_sigma(const FitResult<Scalar>& fit_result,
                                                const DesignMatrix<Scalar>& design,
                                                const NoiseModel<Scalar>& noise,
                                                const PriorSpec<Scalar>& spec) {
  if (fit_result.n != design.rows() || fit_result.m != design.cols()) {
    throw DimensionMismatchError("fit result does not match the design matrix shape");
  }
  return log_evidence_known_sigma(fit_result.n, fit_result.m, fit_result.residual_norm, noise,
                                  spec);
}

template <typename Scalar>
EvidenceReport<Scalar> log_evidence_unknown_sigma(const FitResult<Scalar>& fit_result,
                                                  const DesignMatrix<Scalar>& design,
                                                  const PriorSpec<Scalar>& spec) {
  if (fit_result.n != design.rows() || fit_result.m != design.cols()) {
    throw DimensionMismatchError("fit result does not match the design matrix shape");
  }
  return log_evidence_unknown_sigma(fit_result.n, fit_result.m, fit_result.residual_norm, spec);
}

template <typename Scalar>
struct RankedModel {
  std::string label;
  Scalar log_evidence = 0;
  Scalar posterior_prob = 0;
};

// Models sorted by posterior probability (descending, ties by label);
// prior_probs, when present, is aligned with the sorted entries.
template <typename Scalar>
struct ModelRanking {
  std::vector<RankedModel<Scalar>> entries;
  std::optional<std::vector<Scalar>> prior_probs;
};

// Normalizes posterior model probabilities from log evidences via a
// max-shifted log-sum-exp. Priors default to uniform; explicit priors must
// be nonnegative and sum to 1 within 1e-9.
template <typename Scalar>
ModelRanking<Scalar> model_posterior_probs(
    const std::vector<std::pair<std::string, Scalar>>& evidences,
    const std::optional<std::vector<Scalar>>& priors = std::nullopt) {
  const std::size_t count = evidences.size();
  if (count == 0) {
    throw EmptyModelSetError("model ranking needs at least one model");
  }
  if (priors && priors->size() != count) {
    throw InvalidPriorsError("got " + std::to_string(priors->size()) +
                             " prior probabilities for " + std::to_string(count) + " models");
  }

  {
    std::vector<std::string> labels;
    labels.reserve(count);
    for (const auto& [label, log_ev] : evidences) labels.push_back(label);
    std::sort(labels.begin(), labels.end());
    const auto dup = std::adjacent_find(labels.begin(), labels.end());
    if (dup != labels.end()) {
      throw ValidationError("duplicate model label '" + *dup + "'");
    }
  }

  constexpr Scalar neg_inf = -std::numeric_limits<Scalar>::infinity();
  std::vector<Scalar> weights(count);
  Scalar prior_sum = 0;
  for (std::size_t i = 0; i < count; ++i) {
    if (!std::isfinite(static_cast<double>(evidences[i].second))) {
      throw NonFiniteError("log evidence of model '" + evidences[i].first + "' is not finite");
    }
    if (!priors) {
      weights[i] = evidences[i].second;
      continue;
    }
    const Scalar p = (*priors)[i];
    if (!(p >= Scalar(0)) || !std::isfinite(static_cast<double>(p))) {
      throw InvalidPriorsError("prior probability of model '" + evidences[i].first +
                               "' must be finite and nonnegative");
    }
    prior_sum += p;
    weights[i] = p == Scalar(0) ? neg_inf : std::log(p) + evidences[i].second;
  }
  if (priors && std::abs(prior_sum - Scalar(1)) > Scalar(1e-9)) {
    throw InvalidPriorsError("model prior probabilities must sum to 1");
  }

  const Scalar peak = *std::max_element(weights.begin(), weights.end());
  if (peak == neg_inf) {
    throw InvalidPriorsError("every model has zero prior probability");
  }
  std::vector<Scalar> unnormalized(count);
  Scalar total = 0;
  for (std::size_t i = 0; i < count; ++i) {
    unnormalized[i] = weights[i] == neg_inf ? Scalar(0) : std::exp(weights[i] - peak);
    total += unnormalized[i];
  }

  std::vector<std::size_t> order(count);
  for (std::size_t i = 0; i < count; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (unnormalized[a] != unnormalized[b]) return unnormalized[a] > unnormalized[b];
    return evidences[a].first < evidences[b].first;
  });

  ModelRanking<Scalar> ranking;
  ranking.entries.resize(count);
  if (priors) ranking.prior_probs.emplace(count);
  for (std::size_t rank = 0; rank < count; ++rank) {
    const std::size_t i = order[rank];
    ranking.entries[rank].label = evidences[i].first;
    ranking.entries[rank].log_evidence = evidences[i].second;
    ranking.entries[rank].posterior_prob = unnormalized[i] / total;
    if (priors) (*ranking.prior_probs)[rank] = (*priors)[i];
  }
  return ranking;
}

// Ranks evidence reports over a common dataset. The model-independent
// log_common factor is excluded from the probability weights, so rescaling
// the Jeffreys constant A cannot perturb the probabilities even at the
// bit level; the reported log_evidence still includes it.
template <typename Scalar>
ModelRanking<Scalar> rank_from_reports(
    const std::vector<std::string>& labels, const std::vector<EvidenceReport<Scalar>>& reports,
    const std::optional<std::vector<Scalar>>& priors = std::nullopt) {
  if (reports.empty()) {
    throw EmptyModelSetError("model ranking needs at least one model");
  }
  if (labels.size() != reports.size()) {
    throw DimensionMismatchError("got " + std::to_string(reports.size()) + " reports for " +
                                 std::to_string(labels.size()) + " labels");
  }
  std::vector<std::pair<std::string, Scalar>> keyed(reports.size());
  for (std::size_t i = 0; i < reports.size(); ++i) {
    if (reports[i].n != reports.front().n || reports[i].sigma_mode != reports.front().sigma_mode) {
      throw ValidationError("ranked models must share the dataset and sigma mode");
    }
    keyed[i] = {labels[i], reports[i].log_occam + reports[i].log_gof};
  }
  ModelRanking<Scalar> ranking = model_posterior_probs(keyed, priors);
  for (auto& entry : ranking.entries) {
    const auto it = std::find(labels.begin(), labels.end(), entry.label);
    entry.log_evidence = reports[static_cast<std::size_t>(it - labels.begin())].log_evidence;
  }
  return ranking;
}

}  // namespace parsim
