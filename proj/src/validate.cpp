#include "parsim/validate.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "parsim/evidence.hpp"
#include "parsim/quadrature.hpp"
#include "parsim/rng.hpp"
#include "parsim/special.hpp"

namespace parsim {

namespace {

constexpr double kPi = pi_v<double>;

// ---- oracle-side primitives -------------------------------------------
// Everything below re-derives the quantities it needs from scratch (plain
// arithmetic, log-gamma, cofactor linear algebra) so that a bug in the
// closed-form evaluators cannot cancel out of these checks.

double oracle_chi_moment(Index n, int order) {
  return std::exp(0.5 * order * ln_2<double> +
                  log_gamma(0.5 * static_cast<double>(n + order)) -
                  log_gamma(0.5 * static_cast<double>(n)));
}

double oracle_bound_factor(Index n, double k, BoundMode mode) {
  if (mode == BoundMode::Approximate) {
    return std::sqrt(static_cast<double>(n - 1)) + k;
  }
  const double mean = oracle_chi_moment(n, 1);
  return mean + k * std::sqrt(static_cast<double>(n) - mean * mean);
}

// Determinant by cofactors; the oracles only face m <= 2.
double oracle_det(const Matrix<double>& g) {
  if (g.rows() == 1) return g(0, 0);
  return g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0);
}

// Lower-triangular Cholesky factor, written out for m <= 2.
Matrix<double> oracle_chol(const Matrix<double>& g) {
  Matrix<double> l = Matrix<double>::Zero(g.rows(), g.cols());
  l(0, 0) = std::sqrt(g(0, 0));
  if (g.rows() == 2) {
    l(1, 0) = g(1, 0) / l(0, 0);
    l(1, 1) = std::sqrt(g(1, 1) - l(1, 0) * l(1, 0));
  }
  return l;
}

ValidationOutcome make_outcome(std::string name, double analytic, double numeric,
                               double tolerance) {
  ValidationOutcome outcome;
  outcome.check_name = std::move(name);
  outcome.analytic = analytic;
  outcome.numeric = numeric;
  outcome.tolerance = tolerance;
  outcome.pass = std::isfinite(numeric) && std::abs(analytic - numeric) <= tolerance;
  return outcome;
}

}  // namespace

void OracleConfig::validate() const {
  if (mc_samples < 1000) {
    throw ValidationError("oracle config needs mc_samples >= 1000");
  }
  if (!(quad_rel_tol > 0) || quad_rel_tol > 1e-2) {
    throw ValidationError("oracle config needs quad_rel_tol in (0, 1e-2]");
  }
  if (!(se_multiplier > 0) || !(quad_pass_tol > 0) || !(mass_pass_tol > 0) ||
      !(box_halfwidth_sds > 0)) {
    throw ValidationError("oracle config tolerances must be positive");
  }
  if (mc_tolerance_override && !(*mc_tolerance_override >= 0)) {
    throw ValidationError("mc_tolerance_override must be nonnegative");
  }
}

bool all_passed(const std::vector<ValidationOutcome>& outcomes) {
  return std::all_of(outcomes.begin(), outcomes.end(),
                     [](const ValidationOutcome& o) { return o.pass; });
}

std::vector<ValidationOutcome> mc_error_norm_moments(const NoiseModel<double>& noise,
                                                     const OracleConfig& config) {
  config.validate();
  const std::string prefix = "error_norm/mc_moments/n=" + std::to_string(noise.n);
  NormalStream stream(config.rng_seed, prefix);

  const double samples = static_cast<double>(config.mc_samples);
  double sum1 = 0, sum2 = 0, sum3 = 0, sum4 = 0;
  for (std::size_t i = 0; i < config.mc_samples; ++i) {
    double sq = 0;
    for (Index j = 0; j < noise.n; ++j) {
      const double e = noise.sigma * stream.normal();
      sq += e * e;
    }
    const double r = std::sqrt(sq);
    sum1 += r;
    sum2 += sq;
    sum3 += sq * r;
    sum4 += sq * sq;
  }
  const double hat[5] = {1.0, sum1 / samples, sum2 / samples, sum3 / samples, sum4 / samples};
  const double var_hat = (sum2 - samples * hat[1] * hat[1]) / (samples - 1.0);

  // The oracle's own chi moments, used for targets of comparison windows.
  double om[9];
  om[0] = 1.0;
  for (int j = 1; j <= 8; ++j) {
    om[j] = oracle_chi_moment(noise.n, j) * std::pow(noise.sigma, j);
  }

  const auto window = [&](double se) {
    return config.mc_tolerance_override.value_or(config.se_multiplier * se);
  };

  std::vector<ValidationOutcome> outcomes;
  const MeanVariance<double> exact = error_norm_mean_var(noise, BoundMode::Exact);

  const double se_mean = std::sqrt((om[2] - om[1] * om[1]) / samples);
  outcomes.push_back(make_outcome(prefix + "/mean", exact.mean, hat[1], window(se_mean)));
  outcomes.back().standard_error = se_mean;

  const double central4 =
      om[4] - 4.0 * om[3] * om[1] + 6.0 * om[2] * om[1] * om[1] - 3.0 * std::pow(om[1], 4);
  const double true_var = om[2] - om[1] * om[1];
  const double se_var = std::sqrt(std::max(central4 - true_var * true_var, 0.0) / samples);
  outcomes.push_back(make_outcome(prefix + "/variance", exact.variance, var_hat, window(se_var)));
  outcomes.back().standard_error = se_var;

  for (int j = 1; j <= 4; ++j) {
    const double se = std::sqrt(std::max(om[2 * j] - om[j] * om[j], 0.0) / samples);
    outcomes.push_back(make_outcome(prefix + "/moment_" + std::to_string(j),
                                    error_norm_moment(j, noise), hat[j], window(se)));
    outcomes.back().standard_error = se;
  }
  return outcomes;
}

ValidationOutcome quad_error_norm_normalization(const NoiseModel<double>& noise,
                                                const OracleConfig& config) {
  config.validate();
  const double hi = noise.sigma * (std::sqrt(static_cast<double>(noise.n)) + 40.0);
  const double mass = adaptive_simpson([&](double r) { return error_norm_pdf(r, noise); }, 0.0,
                                       hi, 1e-10, 10);
  return make_outcome("error_norm/pdf_mass/n=" + std::to_string(noise.n), 1.0, mass,
                      config.mass_pass_tol);
}

ValidationOutcome quad_evidence_known_sigma(const FitResult<double>& fit_result,
                                            const DesignMatrix<double>& design,
                                            const NoiseModel<double>& noise,
                                            const PriorSpec<double>& spec,
                                            const OracleConfig& config) {
  config.validate();
  spec.validate();
  if (spec.sigma_mode != SigmaMode::Known) {
    throw ValidationError("the known-sigma quadrature oracle needs a known-sigma prior spec");
  }
  const Index n = design.rows();
  const Index m = design.cols();
  if (m > 2) {
    throw DimensionTooLargeError("the known-sigma quadrature oracle handles m <= 2, got m = " +
                                 std::to_string(m));
  }
  if (fit_result.n != n || fit_result.m != m || noise.n != n) {
    throw DimensionMismatchError("oracle: fit and noise model must match the design shape");
  }

  const Matrix<double>& x = design.entries();
  const double sigma = noise.sigma;
  const Matrix<double> g = x.transpose() * x;
  const double det = oracle_det(g);
  if (!(det > 0)) {
    throw RankDeficientError("oracle: X'X is not positive definite");
  }
  const Vector<double>& beta_hat = fit_result.beta_hat;
  const double res = fit_result.residual_norm;
  const Matrix<double> l = oracle_chol(g);

  const double bound = sigma * oracle_bound_factor(n, spec.k, spec.bound_mode);
  const double log_height = log_gamma(0.5 * static_cast<double>(m) + 1.0) -
                            0.5 * static_cast<double>(m) * std::log(kPi) + 0.5 * std::log(det) -
                            static_cast<double>(m) * std::log(bound);
  const double log_norm = -0.5 * static_cast<double>(n) * std::log(2.0 * kPi * sigma * sigma);
  // Likelihood at beta through the exact least-squares split of ||y - X b||^2
  // into the residual and the coefficient offset measured by X'X.
  const auto log_integrand = [&](const Vector<double>& beta) {
    const Vector<double> delta = beta - beta_hat;
    return log_height + log_norm -
           (res * res + delta.dot(g * delta)) / (2.0 * sigma * sigma);
  };
  // beta = beta_hat + sigma L^{-T} z maps the box to posterior sd units.
  const auto beta_at = [&](double z1, double z2) {
    Vector<double> w(m);
    if (m == 1) {
      w(0) = z1 / l(0, 0);
    } else {
      w(1) = z2 / l(1, 1);
      w(0) = (z1 - l(1, 0) * w(1)) / l(0, 0);
    }
    return Vector<double>(beta_hat + sigma * w);
  };

  const double shift = log_integrand(beta_hat);
  const double half = config.box_halfwidth_sds;
  double integral = 0;
  if (m == 1) {
    integral = adaptive_simpson(
        [&](double z) { return std::exp(log_integrand(beta_at(z, 0.0)) - shift); }, -half, half,
        config.quad_rel_tol);
  } else {
    const auto inner = [&](double z1) {
      return adaptive_simpson(
          [&](double z2) { return std::exp(log_integrand(beta_at(z1, z2)) - shift); }, -half,
          half, 0.25 * config.quad_rel_tol);
    };
    integral = adaptive_simpson(inner, -half, half, config.quad_rel_tol);
  }
  const double numeric = shift + std::log(integral) +
                         static_cast<double>(m) * std::log(sigma) - 0.5 * std::log(det);

  const double analytic = log_evidence_known_sigma(fit_result, design, noise, spec).log_evidence;
  return make_outcome("evidence/known_sigma/quad/n=" + std::to_string(n) +
                          "/m=" + std::to_string(m),
                      analytic, numeric, config.quad_pass_tol);
}

ValidationOutcome quad_evidence_unknown_sigma(const FitResult<double>& fit_result,
                                              const DesignMatrix<double>& design,
                                              const PriorSpec<double>& spec,
                                              const OracleConfig& config) {
  config.validate();
  spec.validate();
  if (spec.sigma_mode != SigmaMode::Jeffreys) {
    throw ValidationError("the sigma-marginalization oracle needs a jeffreys prior spec");
  }
  const Index n = fit_result.n;
  const Index m = fit_result.m;
  if (design.rows() != n || design.cols() != m) {
    throw DimensionMismatchError("oracle: fit result does not match the design matrix shape");
  }
  if (n < 2) {
    throw ApproximationInvalidError("the sigma-marginalization oracle needs n >= 2");
  }
  const double res = fit_result.residual_norm;
  if (!(res > 0)) {
    throw PerfectFitError("the sigma-marginalization oracle needs a positive residual norm");
  }

  // Integrand: (A / sigma) x Occam factor x likelihood at the fit, i.e. the
  // sigma-conditional evidence, log-substituted with u = ln sigma.
  const double occam = 0.5 * static_cast<double>(m) * ln_2<double> +
                       log_gamma(0.5 * static_cast<double>(m) + 1.0) -
                       static_cast<double>(m) *
                           std::log(std::sqrt(static_cast<double>(n - 1)) + spec.k);
  const double constant =
      std::log(spec.jeffreys_a) + occam - 0.5 * static_cast<double>(n) * std::log(2.0 * kPi);
  const auto log_g = [&](double u) {
    return constant - static_cast<double>(n) * u - 0.5 * res * res * std::exp(-2.0 * u);
  };
  const double u_star = std::log(res / std::sqrt(static_cast<double>(n)));
  const double numeric = log_integrate_exp(log_g, u_star - 30.0, u_star + 30.0,
                                           config.quad_rel_tol);

  const double analytic = log_evidence_unknown_sigma(fit_result, design, spec).log_evidence;
  return make_outcome("evidence/unknown_sigma/quad/n=" + std::to_string(n) +
                          "/m=" + std::to_string(m),
                      analytic, numeric, config.quad_pass_tol);
}

ValidationOutcome quad_student_t_normalization(const StudentTPosterior<double>& posterior,
                                               const OracleConfig& config) {
  config.validate();
  if (posterior.m != 1) {
    throw DimensionTooLargeError("the Student-t normalization oracle handles m = 1, got m = " +
                                 std::to_string(posterior.m));
  }
  // beta = center + scale tan(u) folds the whole line into (-pi/2, pi/2);
  // the integrand vanishes at the ends like cos(u)^(n-1).
  const double scale = posterior.residual_norm / std::sqrt(posterior.scale_gram(0, 0));
  const auto f = [&](double u) {
    const double c = std::cos(u);
    if (std::abs(c) < 1e-12) return 0.0;
    Vector<double> beta(1);
    beta(0) = posterior.center(0) + scale * std::tan(u);
    return marginal_posterior_density(beta, posterior) * scale / (c * c);
  };
  const double mass = adaptive_simpson(f, -0.5 * kPi, 0.5 * kPi, 1e-10, 10);
  return make_outcome("posterior/student_t_mass/n=" + std::to_string(posterior.n), 1.0, mass,
                      config.quad_pass_tol);
}

ValidationOutcome quad_sigma_marginalization(const StudentTPosterior<double>& posterior,
                                             const Vector<double>& beta,
                                             const OracleConfig& config) {
  config.validate();
  if (beta.size() != posterior.m) {
    throw DimensionMismatchError("oracle: beta has " + std::to_string(beta.size()) +
                                 " coordinates, expected " + std::to_string(posterior.m));
  }
  const Vector<double> delta = beta - posterior.center;
  const double q = delta.dot(posterior.scale_gram * delta);
  const double scale_sq = posterior.residual_norm * posterior.residual_norm + q;
  const double u_star =
      0.5 * std::log(scale_sq / static_cast<double>(posterior.n + posterior.m));
  const auto log_g = [&](double u) {
    return log_joint_posterior_unknown_sigma(beta, std::exp(u), posterior) + u;
  };
  const double numeric =
      log_integrate_exp(log_g, u_star - 30.0, u_star + 30.0, config.quad_rel_tol);
  const double analytic = marginal_posterior_log_density(beta, posterior);
  return make_outcome("posterior/sigma_marginalization/q=" + std::to_string(q), analytic,
                      numeric, config.quad_pass_tol);
}

namespace {

struct Instance {
  DesignMatrix<double> design;
  Vector<double> y;
};

Instance make_instance(std::uint64_t seed, const std::string& name, Index n, Index m,
                       double sigma_true) {
  NormalStream stream(seed, name);
  Matrix<double> x(n, m);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < m; ++j) {
      x(i, j) = stream.normal();
    }
  }
  Vector<double> beta(m);
  for (Index j = 0; j < m; ++j) {
    beta(j) = stream.normal();
  }
  Vector<double> y = x * beta;
  for (Index i = 0; i < n; ++i) {
    y(i) += sigma_true * stream.normal();
  }
  return {DesignMatrix<double>(std::move(x)), std::move(y)};
}

}  // namespace

std::vector<ValidationOutcome> run_default_validation(const OracleConfig& config) {
  config.validate();
  std::vector<ValidationOutcome> outcomes;

  const std::pair<Index, double> moment_cases[] = {{1, 1.0}, {3, 0.5}, {10, 2.0}, {100, 1.0}};
  for (const auto& [n, sigma] : moment_cases) {
    const auto batch = mc_error_norm_moments(NoiseModel<double>(sigma, n), config);
    outcomes.insert(outcomes.end(), batch.begin(), batch.end());
  }

  const std::pair<Index, double> mass_cases[] = {
      {1, 1.0}, {2, 1.5}, {3, 0.5}, {10, 2.0}, {50, 1.0}};
  for (const auto& [n, sigma] : mass_cases) {
    outcomes.push_back(quad_error_norm_normalization(NoiseModel<double>(sigma, n), config));
  }

  struct KnownCase {
    const char* tag;
    Index n;
    Index m;
    double sigma;
    double k;
    BoundMode mode;
  };
  const KnownCase known_cases[] = {
      {"m1_exact", 6, 1, 0.8, 3.0, BoundMode::Exact},
      {"m1_approx", 5, 1, 1.2, 6.0, BoundMode::Approximate},
      {"m2_exact", 8, 2, 1.0, 6.0, BoundMode::Exact},
      {"m2_approx", 7, 2, 0.5, 4.0, BoundMode::Approximate},
  };
  for (const auto& c : known_cases) {
    const std::string name = std::string("evidence/known_sigma/quad/") + c.tag;
    const Instance inst = make_instance(config.rng_seed, name, c.n, c.m, c.sigma);
    const NoiseModel<double> noise(c.sigma, c.n);
    ValidationOutcome outcome = quad_evidence_known_sigma(
        fit(inst.design, inst.y), inst.design, noise, PriorSpec<double>::known(c.k, c.mode),
        config);
    outcome.check_name = name;
    outcomes.push_back(std::move(outcome));
  }

  {
    // Smallest marginalizable problem: two points, one coefficient,
    // arranged so the residual norm is 1.
    Matrix<double> x(2, 1);
    x << 1.0, 1.0;
    Vector<double> y(2);
    const double root_half = std::sqrt(0.5);
    y << 2.0 + root_half, 2.0 - root_half;
    const DesignMatrix<double> design(std::move(x));
    ValidationOutcome outcome = quad_evidence_unknown_sigma(
        fit(design, y), design, PriorSpec<double>::jeffreys(1.0, 1.0), config);
    outcome.check_name = "evidence/unknown_sigma/quad/minimal_n2";
    outcomes.push_back(std::move(outcome));
  }
  struct JeffreysCase {
    const char* tag;
    Index n;
    Index m;
    double k;
    double a;
  };
  const JeffreysCase jeffreys_cases[] = {
      {"line_n12", 12, 2, 6.0, 1.0},
      {"poly_n20", 20, 3, 6.0, 2.5},
  };
  for (const auto& c : jeffreys_cases) {
    const std::string name = std::string("evidence/unknown_sigma/quad/") + c.tag;
    const Instance inst = make_instance(config.rng_seed, name, c.n, c.m, 1.0);
    ValidationOutcome outcome = quad_evidence_unknown_sigma(
        fit(inst.design, inst.y), inst.design, PriorSpec<double>::jeffreys(c.a, c.k), config);
    outcome.check_name = name;
    outcomes.push_back(std::move(outcome));
  }

  for (const Index n : {Index(2), Index(5), Index(50)}) {
    const std::string name = "posterior/student_t_mass/n=" + std::to_string(n);
    const Instance inst = make_instance(config.rng_seed, name, n, 1, 1.0);
    const FitResult<double> fit_result = fit(inst.design, inst.y);
    outcomes.push_back(
        quad_student_t_normalization(student_t_posterior(fit_result, inst.design), config));
  }

  {
    const std::string base = "posterior/sigma_marginalization";
    const Instance inst = make_instance(config.rng_seed, base, 8, 2, 1.0);
    const FitResult<double> fit_result = fit(inst.design, inst.y);
    const StudentTPosterior<double> posterior = student_t_posterior(fit_result, inst.design);
    Vector<double> offset(2);
    offset << 0.7, -0.4;
    const std::pair<const char*, Vector<double>> points[] = {
        {"/at_center", fit_result.beta_hat},
        {"/off_center", Vector<double>(fit_result.beta_hat + offset)},
    };
    for (const auto& [tag, beta] : points) {
      ValidationOutcome outcome = quad_sigma_marginalization(posterior, beta, config);
      outcome.check_name = base + tag;
      outcomes.push_back(std::move(outcome));
    }
  }

  std::sort(outcomes.begin(), outcomes.end(),
            [](const ValidationOutcome& a, const ValidationOutcome& b) {
              return a.check_name < b.check_name;
            });
  return outcomes;
}

}  // namespace parsim
