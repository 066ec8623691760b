#include "parsim/commands.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <iostream>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "parsim/csv.hpp"
#include "parsim/design.hpp"
#include "parsim/errors.hpp"
#include "parsim/evidence.hpp"
#include "parsim/fit.hpp"
#include "parsim/model_file.hpp"
#include "parsim/posterior.hpp"

namespace parsim {

namespace {

struct LoadedInputs {
  Dataset<double> data;
  std::vector<ModelSpec<double>> models;
  std::string digest;
};

LoadedInputs load_inputs(const RunConfig& config) {
  const std::string input_bytes = read_file_bytes(config.input_path);
  const std::string models_bytes = read_file_bytes(config.models_path);
  return {parse_dataset_csv(input_bytes, config.input_path),
          parse_model_file(models_bytes, config.models_path),
          input_digest_hex(input_bytes, models_bytes)};
}

const ModelSpec<double>& select_model(const std::vector<ModelSpec<double>>& models,
                                      const std::string& label, const char* what) {
  if (label.empty()) {
    if (models.size() == 1) {
      return models.front();
    }
    throw ValidationError(std::string(what) + " needs --model to pick one of the " +
                          std::to_string(models.size()) + " models in the file");
  }
  for (const auto& model : models) {
    if (model.label == label) {
      return model;
    }
  }
  throw ValidationError("no model labeled '" + label + "' in the models file");
}

// Attributes rank problems to the model whose expansion caused them.
DesignMatrix<double> build_design(const Dataset<double>& data, const ModelSpec<double>& model) {
  try {
    return build_design_matrix(data, model);
  } catch (const RankDeficientError& e) {
    throw RankDeficientError("model '" + model.label + "': " + e.what());
  }
}

}  // namespace

PriorSpec<double> RunConfig::prior_spec() const {
  if (sigma) {
    return PriorSpec<double>::known(k, bound_mode.value_or(BoundMode::Exact));
  }
  PriorSpec<double> spec = PriorSpec<double>::jeffreys(jeffreys_a, k);
  if (bound_mode) {
    spec.bound_mode = *bound_mode;  // validate() rejects exact without a known sigma
  }
  return spec;
}

void RunConfig::validate() const {
  if (!std::isfinite(k) || !(k >= 0)) {
    throw ValidationError("k must be a finite value >= 0");
  }
  if (sigma && (!std::isfinite(*sigma) || !(*sigma > 0))) {
    throw ValidationError("sigma must be a finite value > 0");
  }
  if (!std::isfinite(jeffreys_a) || !(jeffreys_a > 0)) {
    throw ValidationError("the sigma-prior constant A must be a finite value > 0");
  }
  prior_spec().validate();
}

std::string cmd_fit(const RunConfig& config, const std::string& model_label) {
  config.validate();
  const LoadedInputs loaded = load_inputs(config);
  const ModelSpec<double>& model = select_model(loaded.models, model_label, "fit");
  const Vector<double>& y = loaded.data.column(model.response);
  const DesignMatrix<double> design = build_design(loaded.data, model);
  const FitResult<double> fit_result = fit(design, y);

  nlohmann::json doc;
  doc["label"] = model.label;
  doc["response"] = model.response;
  doc["n"] = fit_result.n;
  doc["m"] = fit_result.m;
  doc["residual_norm"] = fit_result.residual_norm;
  doc["coefficients"] = nlohmann::json::array();
  for (Index j = 0; j < fit_result.m; ++j) {
    doc["coefficients"].push_back({
        {"column", design.column_labels()[static_cast<std::size_t>(j)]},
        {"estimate", fit_result.beta_hat(j)},
    });
  }
  return doc.dump(2) + "\n";
}

RankReport cmd_rank(const RunConfig& config) {
  config.validate();
  const LoadedInputs loaded = load_inputs(config);
  const std::vector<ModelSpec<double>>& models = loaded.models;
  for (const auto& model : models) {
    if (model.response != models.front().response) {
      throw ValidationError("models must share one response column; got '" +
                            models.front().response + "' and '" + model.response + "'");
    }
  }
  const Vector<double>& y = loaded.data.column(models.front().response);
  const PriorSpec<double> prior = config.prior_spec();

  // Candidates are independent, so they run on a worker pool; everything
  // order-dependent (error choice, ranking, assembly) happens afterwards
  // on the stored per-index results.
  std::vector<EvidenceReport<double>> reports(models.size());
  std::vector<std::exception_ptr> failures(models.size());
  std::atomic<std::size_t> cursor{0};
  const auto worker = [&]() {
    while (true) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= models.size()) {
        return;
      }
      try {
        const DesignMatrix<double> design = build_design(loaded.data, models[i]);
        const FitResult<double> fit_result = fit(design, y);
        if (config.sigma) {
          reports[i] = log_evidence_known_sigma(
              fit_result, design, NoiseModel<double>(*config.sigma, fit_result.n), prior);
        } else {
          reports[i] = log_evidence_unknown_sigma(fit_result, design, prior);
        }
      } catch (const PerfectFitError&) {
        failures[i] = std::make_exception_ptr(
            PerfectFitError("model '" + models[i].label +
                            "' fits the data exactly; its evidence diverges"));
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  const std::size_t worker_count =
      std::min<std::size_t>(models.size(),
                            std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  pool.reserve(worker_count);
  for (std::size_t w = 0; w < worker_count; ++w) {
    pool.emplace_back(worker);
  }
  for (auto& thread : pool) {
    thread.join();
  }
  for (const auto& failure : failures) {
    if (failure) {
      std::rethrow_exception(failure);
    }
  }

  std::vector<std::string> labels;
  labels.reserve(models.size());
  for (const auto& model : models) {
    labels.push_back(model.label);
  }
  const ModelRanking<double> ranking = rank_from_reports(labels, reports);

  RankReport report;
  report.k = config.k;
  report.sigma_mode = prior.sigma_mode;
  report.jeffreys_a = config.jeffreys_a;
  report.input_digest = loaded.digest;
  for (const auto& entry : ranking.entries) {
    std::size_t i = 0;
    while (labels[i] != entry.label) {
      ++i;
    }
    report.records.push_back({entry.label, reports[i].n, reports[i].m,
                              reports[i].residual_norm, reports[i].log_occam,
                              reports[i].log_gof, entry.log_evidence, entry.posterior_prob});
  }
  return report;
}

std::string render_rank_report(const RankReport& report, ReportFormat format) {
  return format == ReportFormat::Json ? rank_report_to_json(report)
                                      : rank_report_to_csv(report);
}

std::string cmd_posterior(const RunConfig& config, const std::string& model_label,
                          const std::string& beta_points_path) {
  config.validate();
  const LoadedInputs loaded = load_inputs(config);
  const ModelSpec<double>& model =
      select_model(loaded.models, model_label, "posterior evaluation");
  const Vector<double>& y = loaded.data.column(model.response);
  const DesignMatrix<double> design = build_design(loaded.data, model);
  const FitResult<double> fit_result = fit(design, y);
  const Matrix<double> points = read_points_csv(beta_points_path, design.cols());

  std::vector<double> log_densities(static_cast<std::size_t>(points.rows()));
  if (config.sigma) {
    const NormalPosterior<double> posterior =
        posterior_known_sigma(fit_result, design, NoiseModel<double>(*config.sigma, fit_result.n));
    for (Index r = 0; r < points.rows(); ++r) {
      log_densities[static_cast<std::size_t>(r)] =
          posterior.log_density(points.row(r).transpose());
    }
  } else {
    const StudentTPosterior<double> posterior = student_t_posterior(fit_result, design);
    for (Index r = 0; r < points.rows(); ++r) {
      log_densities[static_cast<std::size_t>(r)] =
          marginal_posterior_log_density<double>(points.row(r).transpose(), posterior);
    }
  }

  if (config.format == ReportFormat::Csv) {
    std::string out;
    for (const auto& label : design.column_labels()) {
      out += csv_escape(label) + ",";
    }
    out += "log_density,density\n";
    for (Index r = 0; r < points.rows(); ++r) {
      for (Index j = 0; j < points.cols(); ++j) {
        out += format_number(points(r, j)) + ",";
      }
      const double log_density = log_densities[static_cast<std::size_t>(r)];
      out += format_number(log_density) + "," + format_number(std::exp(log_density)) + "\n";
    }
    return out;
  }

  nlohmann::json doc;
  doc["label"] = model.label;
  doc["sigma_mode"] = to_string(config.sigma ? SigmaMode::Known : SigmaMode::Jeffreys);
  doc["columns"] = design.column_labels();
  doc["points"] = nlohmann::json::array();
  for (Index r = 0; r < points.rows(); ++r) {
    const double log_density = log_densities[static_cast<std::size_t>(r)];
    nlohmann::json entry;
    entry["beta"] = nlohmann::json::array();
    for (Index j = 0; j < points.cols(); ++j) {
      entry["beta"].push_back(points(r, j));
    }
    entry["log_density"] = log_density;
    entry["density"] = std::exp(log_density);
    doc["points"].push_back(std::move(entry));
  }
  return doc.dump(2) + "\n";
}

std::pair<std::string, bool> cmd_validate(const RunConfig& config) {
  OracleConfig oracle;
  oracle.rng_seed = config.seed;
  oracle.mc_samples = config.mc_samples;
  oracle.mc_tolerance_override = config.mc_tolerance;
  const std::vector<ValidationOutcome> outcomes = run_default_validation(oracle);
  return {outcomes_to_json(outcomes), all_passed(outcomes)};
}

void write_output(const RunConfig& config, const std::string& payload) {
  if (config.output.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream out(config.output, std::ios::binary);
  if (!out) {
    throw IoError("cannot open '" + config.output + "' for writing");
  }
  out << payload;
  if (!out) {
    throw IoError("failed while writing '" + config.output + "'");
  }
}

}  // namespace parsim
