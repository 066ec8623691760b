#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "parsim/commands.hpp"
#include "parsim/errors.hpp"

namespace {

// The common prior/output knobs shared by the data-driven subcommands.
void add_run_flags(CLI::App* cmd, parsim::RunConfig& config) {
  cmd->add_option("--input", config.input_path, "CSV dataset (header row required)")
      ->required();
  cmd->add_option("--models", config.models_path, "model specification file")->required();
  cmd->add_option("--k", config.k, "error-norm bound multiplier (>= 0)")
      ->capture_default_str();
  cmd->add_option_function<double>(
      "--sigma", [&config](double value) { config.sigma = value; },
      "known noise spread; omit to marginalize sigma out");
  cmd->add_option_function<std::string>(
         "--bound-mode",
         [&config](const std::string& value) {
           config.bound_mode = value == "exact" ? parsim::BoundMode::Exact
                                                : parsim::BoundMode::Approximate;
         },
         "error-norm bound flavor (default: exact when sigma is known, "
         "approximate otherwise)")
      ->check(CLI::IsMember({"exact", "approximate"}));
  cmd->add_option("--jeffreys-a", config.jeffreys_a,
                  "constant A of the sigma prior A / sigma")
      ->capture_default_str();
  cmd->add_option_function<std::string>(
         "--format",
         [&config](const std::string& value) {
           config.format = parsim::parse_report_format(value);
         },
         "report format")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--output", config.output, "output path (default: stdout)");
}

void add_seed_flag(CLI::App* cmd, parsim::RunConfig& config) {
  cmd->add_option("--seed", config.seed, "oracle RNG seed")
      ->envname("PARSIM_SEED")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  parsim::RunConfig config;
  std::string model_label;
  std::string points_path;

  CLI::App app{"Bayesian model selection for linear regression under a "
               "parsimonious uniform coefficient prior"};
  app.set_version_flag("--version", parsim::kToolVersion);
  app.require_subcommand(1);

  CLI::App* fit_cmd = app.add_subcommand("fit", "least-squares fit of one model");
  add_run_flags(fit_cmd, config);
  fit_cmd->add_option("--model", model_label,
                      "model label (needed when the file lists several)");

  CLI::App* rank_cmd =
      app.add_subcommand("rank", "rank every model by posterior probability");
  add_run_flags(rank_cmd, config);

  CLI::App* posterior_cmd = app.add_subcommand(
      "posterior", "evaluate the coefficient posterior at given points");
  add_run_flags(posterior_cmd, config);
  posterior_cmd->add_option("--model", model_label, "model label")->required();
  posterior_cmd->add_option("--points", points_path, "CSV of coefficient points")->required();

  CLI::App* validate_cmd =
      app.add_subcommand("validate", "run the numerical oracle suite");
  add_seed_flag(validate_cmd, config);
  validate_cmd->add_option("--mc-samples", config.mc_samples, "Monte Carlo sample count")
      ->capture_default_str();
  validate_cmd->add_option_function<double>(
      "--mc-tolerance",
      [&config](double value) { config.mc_tolerance = value; },
      "absolute tolerance replacing the standard-error window on MC checks");
  validate_cmd->add_option("--output", config.output, "output path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(fit_cmd)) {
      parsim::write_output(config, parsim::cmd_fit(config, model_label));
    } else if (app.got_subcommand(rank_cmd)) {
      parsim::write_output(config,
                           parsim::render_rank_report(parsim::cmd_rank(config), config.format));
    } else if (app.got_subcommand(posterior_cmd)) {
      parsim::write_output(config, parsim::cmd_posterior(config, model_label, points_path));
    } else if (app.got_subcommand(validate_cmd)) {
      const auto [payload, passed] = parsim::cmd_validate(config);
      parsim::write_output(config, payload);
      if (!passed) {
        std::cerr << "error: one or more validation checks failed\n";
        return 1;
      }
    }
  } catch (const parsim::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const parsim::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
