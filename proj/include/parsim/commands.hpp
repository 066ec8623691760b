#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "parsim/report.hpp"

namespace parsim {

// Everything a subcommand needs, assembled by the CLI layer. The bound
// mode defaults per sigma mode: exact when sigma is known, approximate
// (the only valid choice) when sigma is marginalized out.
struct RunConfig {
  std::string input_path;
  std::string models_path;
  double k = 6;
  std::optional<double> sigma;
  std::optional<BoundMode> bound_mode;
  double jeffreys_a = 1;
  std::string output;  // empty means stdout
  ReportFormat format = ReportFormat::Json;
  std::uint64_t seed = 42;
  std::size_t mc_samples = 1'000'000;
  std::optional<double> mc_tolerance;  // near-zero forces MC check failures

  PriorSpec<double> prior_spec() const;
  void validate() const;
};

// Fits one model and renders the estimate as JSON. When the models file
// defines several models, model_label selects one; empty picks the sole
// model and rejects ambiguity.
std::string cmd_fit(const RunConfig& config, const std::string& model_label = "");

// Evaluates every model in the spec file against the shared response and
// ranks them by posterior probability.
RankReport cmd_rank(const RunConfig& config);
std::string render_rank_report(const RankReport& report, ReportFormat format);

// Evaluates the coefficient posterior of one model at the points listed in
// beta_points_path (CSV, one m-column row per point): the known-sigma
// normal density when sigma is set, the sigma-marginalized density
// otherwise.
std::string cmd_posterior(const RunConfig& config, const std::string& model_label,
                          const std::string& beta_points_path);

// Runs the oracle suite; returns the outcome JSON and whether every check
// passed.
std::pair<std::string, bool> cmd_validate(const RunConfig& config);

// Writes a rendered payload to config.output, or stdout when empty.
void write_output(const RunConfig& config, const std::string& payload);

}  // namespace parsim
