#include <cmath>
#include <cstring>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "doctest.h"
#include "parsim/evidence.hpp"
#include "parsim/rng.hpp"
#include "test_support.hpp"

using namespace parsim;

// Frozen from a 30-digit term-by-term evaluation of the closed forms.
namespace {
constexpr double kEvidenceUnknownMinimal = -2.3052328943245634;  // n=2, m=1, k=1, A=1, res=1
constexpr double kEvidenceKnownMinimal = -2.8052328943245634;    // same instance, sigma = 1
constexpr double kOccamN101M1 = -2.5467973695950538;             // ln(sqrt(pi/2)/16)
}  // namespace

TEST_CASE("known-sigma evidence of the empty model is the pure likelihood") {
  const NoiseModel<double> noise(1.5, 4);
  const auto spec = PriorSpec<double>::known(6.0, BoundMode::Exact);
  const double y_norm = 2.5;

  const auto report = log_evidence_known_sigma<double>(4, 0, y_norm, noise, spec);
  const double expected =
      -2.0 * std::log(2.0 * pi_v<double> * 1.5 * 1.5) - y_norm * y_norm / (2.0 * 1.5 * 1.5);
  CHECK(report.log_evidence == doctest::Approx(expected).epsilon(1e-14));
  CHECK(report.log_occam == 0.0);
  CHECK(report.log_common == 0.0);
  CHECK(report.sigma_mode == SigmaMode::Known);
}

TEST_CASE("known-sigma evidence matches the frozen minimal instance") {
  const NoiseModel<double> noise(1.0, 2);
  const auto spec = PriorSpec<double>::known(1.0, BoundMode::Approximate);
  const auto report = log_evidence_known_sigma<double>(2, 1, 1.0, noise, spec);
  CHECK(report.log_evidence == doctest::Approx(kEvidenceKnownMinimal).epsilon(1e-13));

  // Occam part: (1/2)ln2 + ln Gamma(3/2) - ln(sqrt(1) + 1).
  const double occam = 0.5 * ln_2<double> + log_gamma(1.5) - ln_2<double>;
  CHECK(report.log_occam == doctest::Approx(occam).epsilon(1e-14));
  // Gaussian factor: -(2/2) ln(2 pi) - 1/2.
  CHECK(report.log_gof == doctest::Approx(-std::log(2.0 * pi_v<double>) - 0.5).epsilon(1e-14));
}

TEST_CASE("known-sigma evidence is finite at zero residual and decreasing in it") {
  const NoiseModel<double> noise(1.0, 5);
  const auto spec = PriorSpec<double>::known(6.0, BoundMode::Exact);

  const auto perfect = log_evidence_known_sigma<double>(5, 2, 0.0, noise, spec);
  CHECK(std::isfinite(perfect.log_evidence));

  const auto one = log_evidence_known_sigma<double>(5, 2, 1.0, noise, spec);
  const auto two = log_evidence_known_sigma<double>(5, 2, 2.0, noise, spec);
  CHECK(perfect.log_evidence > one.log_evidence);
  CHECK(one.log_evidence > two.log_evidence);

  CHECK_THROWS_AS(log_evidence_known_sigma<double>(5, 2, -1.0, noise, spec), NegativeRadiusError);
  CHECK_THROWS_AS(log_evidence_known_sigma<double>(5, 6, 1.0, noise, spec),
                  DimensionMismatchError);
  CHECK_THROWS_AS(log_evidence_known_sigma<double>(5, 2, 1.0, noise, PriorSpec<double>::jeffreys()),
                  ValidationError);
  // The approximate bound needs n >= 2 to be defined.
  CHECK_THROWS_AS(log_evidence_known_sigma<double>(1, 1, 1.0, NoiseModel<double>(1.0, 1),
                                                   PriorSpec<double>::known(
                                                       6.0, BoundMode::Approximate)),
                  ApproximationInvalidError);
}

TEST_CASE("sigma-marginalized evidence matches the frozen minimal instance") {
  const auto spec = PriorSpec<double>::jeffreys(1.0, 1.0);
  const auto report = log_evidence_unknown_sigma<double>(2, 1, 1.0, spec);

  CHECK(report.log_evidence == doctest::Approx(kEvidenceUnknownMinimal).epsilon(1e-13));
  CHECK(report.log_occam ==
        doctest::Approx(0.5 * ln_2<double> + log_gamma(1.5) - ln_2<double>).epsilon(1e-14));
  CHECK(report.log_gof == 0.0);  // unit residual
  CHECK(report.log_common ==
        doctest::Approx(log_gamma(1.0) - ln_2<double> - ln_pi<double>).epsilon(1e-14));
  CHECK(report.sigma_mode == SigmaMode::Jeffreys);
  CHECK(report.bound_mode == BoundMode::Approximate);
}

TEST_CASE("sigma-marginalized evidence error paths") {
  const auto spec = PriorSpec<double>::jeffreys();
  CHECK_THROWS_AS(log_evidence_unknown_sigma<double>(5, 2, 0.0, spec), PerfectFitError);
  CHECK_THROWS_AS(log_evidence_unknown_sigma<double>(1, 1, 1.0, spec), ApproximationInvalidError);
  CHECK_THROWS_AS(log_evidence_unknown_sigma<double>(5, 6, 1.0, spec), DimensionMismatchError);
  CHECK_THROWS_AS(
      log_evidence_unknown_sigma<double>(5, 2, 1.0, PriorSpec<double>::known(6.0)),
      ValidationError);
}

TEST_CASE("evidence factorizes additively in both modes") {
  NormalStream stream(42, "evidence_factorization");
  for (int trial = 0; trial < 1000; ++trial) {
    const Index n = 2 + static_cast<Index>(stream.uniform() * 199.0);
    const Index m = static_cast<Index>(stream.uniform() * static_cast<double>(n + 1));
    const double res = 0.05 + 4.0 * stream.uniform();
    const double k = 8.0 * stream.uniform();
    const double a = 0.25 + 2.0 * stream.uniform();

    const auto jeffreys =
        log_evidence_unknown_sigma<double>(n, m, res, PriorSpec<double>::jeffreys(a, k));
    CHECK(jeffreys.log_evidence ==
          (jeffreys.log_occam + jeffreys.log_gof) + jeffreys.log_common);

    const NoiseModel<double> noise(0.5 + stream.uniform(), n);
    const auto known = log_evidence_known_sigma<double>(
        n, m, res, noise, PriorSpec<double>::known(k, BoundMode::Exact));
    CHECK(known.log_evidence == (known.log_occam + known.log_gof) + known.log_common);
  }
}

TEST_CASE("log_occam_factor penalizes dimension") {
  CHECK(log_occam_factor<double>(50, 0, 6.0) == 0.0);
  CHECK(log_occam_factor<double>(101, 1, 6.0) == doctest::Approx(kOccamN101M1).epsilon(1e-13));

  // Strictly decreasing in m for fixed n and k.
  for (const Index n : {101, 200}) {
    double previous = log_occam_factor<double>(n, 0, 6.0);
    for (Index m = 1; m <= 200; ++m) {
      const double current = log_occam_factor<double>(n, m, 6.0);
      CHECK(current < previous);
      previous = current;
    }
  }
}

TEST_CASE("log_goodness_of_fit rewards small residuals") {
  CHECK(log_goodness_of_fit<double>(1.0, 7) == 0.0);
  CHECK(log_goodness_of_fit<double>(std::exp(1.0), 10) == doctest::Approx(-10.0).epsilon(1e-14));

  const double base = log_goodness_of_fit<double>(0.8, 12);
  const double halved = log_goodness_of_fit<double>(0.4, 12);
  CHECK(halved - base == doctest::Approx(12.0 * ln_2<double>).epsilon(1e-13));

  CHECK_THROWS_AS(log_goodness_of_fit<double>(0.0, 7), PerfectFitError);
}

TEST_CASE("model_posterior_probs normalizes evidences") {
  const std::vector<std::pair<std::string, double>> evidences = {{"a", std::log(2.0)},
                                                                 {"b", 0.0}};
  const auto ranking = model_posterior_probs(evidences);
  REQUIRE(ranking.entries.size() == 2);
  CHECK(ranking.entries[0].label == "a");
  CHECK(ranking.entries[0].posterior_prob == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(ranking.entries[1].posterior_prob == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(!ranking.prior_probs.has_value());

  const auto single = model_posterior_probs<double>({{"only", -123.0}});
  CHECK(single.entries[0].posterior_prob == 1.0);
}

TEST_CASE("model_posterior_probs is shift invariant and sums to one") {
  NormalStream stream(42, "probs_shift");
  std::vector<std::pair<std::string, double>> evidences;
  for (int i = 0; i < 7; ++i) {
    evidences.emplace_back("model_" + std::to_string(i), 5.0 * stream.normal());
  }
  auto shifted = evidences;
  for (auto& [label, value] : shifted) value += 1000.0;

  const auto base = model_posterior_probs(evidences);
  const auto moved = model_posterior_probs(shifted);
  double total = 0.0;
  for (std::size_t i = 0; i < base.entries.size(); ++i) {
    CHECK(base.entries[i].label == moved.entries[i].label);
    CHECK(std::abs(base.entries[i].posterior_prob - moved.entries[i].posterior_prob) <= 1e-12);
    CHECK(base.entries[i].posterior_prob >= 0.0);
    CHECK(base.entries[i].posterior_prob <= 1.0);
    if (i > 0) CHECK(base.entries[i].posterior_prob <= base.entries[i - 1].posterior_prob);
    total += base.entries[i].posterior_prob;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("model_posterior_probs ties break by label") {
  const auto ranking =
      model_posterior_probs<double>({{"zebra", 1.0}, {"apple", 1.0}, {"mango", 1.0}});
  CHECK(ranking.entries[0].label == "apple");
  CHECK(ranking.entries[1].label == "mango");
  CHECK(ranking.entries[2].label == "zebra");
}

TEST_CASE("model_posterior_probs validates input") {
  CHECK_THROWS_AS(model_posterior_probs<double>({}), EmptyModelSetError);
  CHECK_THROWS_AS(model_posterior_probs<double>({{"a", 0.0}, {"a", 1.0}}), ValidationError);
  const double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(model_posterior_probs<double>({{"a", inf}}), NonFiniteError);

  const std::vector<std::pair<std::string, double>> two = {{"a", 0.0}, {"b", 0.0}};
  CHECK_THROWS_AS(model_posterior_probs<double>(two, std::vector<double>{1.0}), InvalidPriorsError);
  CHECK_THROWS_AS(model_posterior_probs<double>(two, std::vector<double>{0.7, 0.7}), InvalidPriorsError);
  CHECK_THROWS_AS(model_posterior_probs<double>(two, std::vector<double>{-0.2, 1.2}), InvalidPriorsError);
  CHECK_THROWS_AS(model_posterior_probs<double>(two, std::vector<double>{0.0, 0.0}), InvalidPriorsError);
}

TEST_CASE("explicit model priors reweight the ranking") {
  const std::vector<std::pair<std::string, double>> evidences = {{"a", 0.0}, {"b", 0.0}};
  const auto ranking = model_posterior_probs<double>(evidences, std::vector<double>{0.25, 0.75});
  CHECK(ranking.entries[0].label == "b");
  CHECK(ranking.entries[0].posterior_prob == doctest::Approx(0.75).epsilon(1e-14));
  REQUIRE(ranking.prior_probs.has_value());
  CHECK((*ranking.prior_probs)[0] == 0.75);  // aligned with the sorted entries
  CHECK((*ranking.prior_probs)[1] == 0.25);

  // A zero prior removes a model from the posterior without erroring.
  const auto zeroed = model_posterior_probs<double>(evidences, std::vector<double>{0.0, 1.0});
  CHECK(zeroed.entries[0].label == "b");
  CHECK(zeroed.entries[0].posterior_prob == 1.0);
  CHECK(zeroed.entries[1].posterior_prob == 0.0);
}

TEST_CASE("rescaling the jeffreys constant shifts evidence but not probabilities") {
  NormalStream stream(42, "a_invariance");
  std::vector<std::string> labels;
  std::vector<EvidenceReport<double>> base;
  std::vector<EvidenceReport<double>> scaled;
  for (int i = 0; i < 5; ++i) {
    const Index m = 1 + i;
    const double res = 0.3 + stream.uniform();
    labels.push_back("m" + std::to_string(m));
    base.push_back(
        log_evidence_unknown_sigma<double>(40, m, res, PriorSpec<double>::jeffreys(1.0, 6.0)));
    scaled.push_back(
        log_evidence_unknown_sigma<double>(40, m, res, PriorSpec<double>::jeffreys(1e6, 6.0)));
  }

  for (std::size_t i = 0; i < base.size(); ++i) {
    CHECK(scaled[i].log_evidence - base[i].log_evidence ==
          doctest::Approx(std::log(1e6)).epsilon(1e-12));
  }

  const auto rank_base = rank_from_reports(labels, base);
  const auto rank_scaled = rank_from_reports(labels, scaled);
  for (std::size_t i = 0; i < rank_base.entries.size(); ++i) {
    CHECK(rank_base.entries[i].label == rank_scaled.entries[i].label);
    const double p0 = rank_base.entries[i].posterior_prob;
    const double p1 = rank_scaled.entries[i].posterior_prob;
    CHECK(std::memcmp(&p0, &p1, sizeof(double)) == 0);
  }
}

TEST_CASE("rank_from_reports keeps the full evidence but keys on the shared-data split") {
  const auto spec = PriorSpec<double>::jeffreys(2.0, 6.0);
  const std::vector<std::string> labels = {"big", "small"};
  const std::vector<EvidenceReport<double>> reports = {
      log_evidence_unknown_sigma<double>(30, 4, 1.1, spec),
      log_evidence_unknown_sigma<double>(30, 1, 1.3, spec)};

  const auto ranking = rank_from_reports(labels, reports);
  REQUIRE(ranking.entries.size() == 2);
  for (const auto& entry : ranking.entries) {
    const auto& source = entry.label == "big" ? reports[0] : reports[1];
    CHECK(entry.log_evidence == source.log_evidence);
  }

  const std::vector<EvidenceReport<double>> mixed_n = {
      log_evidence_unknown_sigma<double>(30, 4, 1.1, spec),
      log_evidence_unknown_sigma<double>(31, 1, 1.3, spec)};
  CHECK_THROWS_AS(rank_from_reports(labels, mixed_n), ValidationError);

  const std::vector<EvidenceReport<double>> mixed_mode = {
      log_evidence_unknown_sigma<double>(30, 4, 1.1, spec),
      log_evidence_known_sigma<double>(30, 1, 1.3, NoiseModel<double>(1.0, 30),
                                       PriorSpec<double>::known(6.0))};
  CHECK_THROWS_AS(rank_from_reports(labels, mixed_mode), ValidationError);
}

TEST_CASE("adding a pure-noise column trades goodness of fit against the occam factor") {
  NormalStream stream(42, "nested_sanity");
  for (int trial = 0; trial < 10; ++trial) {
    auto inst = test_support::random_instance(stream, 30, 3, 1.0);
    Matrix<double> wider(30, 4);
    wider.leftCols(3) = inst.x;
    for (Index i = 0; i < 30; ++i) wider(i, 3) = stream.normal();

    const auto spec = PriorSpec<double>::jeffreys(1.0, 6.0);
    const auto narrow_fit = fit(DesignMatrix<double>(inst.x), inst.y);
    const auto wide_fit = fit(DesignMatrix<double>(wider), inst.y);
    const auto narrow =
        log_evidence_unknown_sigma<double>(30, 3, narrow_fit.residual_norm, spec);
    const auto wide = log_evidence_unknown_sigma<double>(30, 4, wide_fit.residual_norm, spec);

    CHECK(wide.log_occam < narrow.log_occam);
    CHECK(wide.log_gof >= narrow.log_gof);  // the residual cannot grow
  }
}
