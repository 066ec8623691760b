#include "parsim/report.hpp"

#include <cstdio>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "parsim/csv.hpp"
#include "parsim/errors.hpp"
#include "parsim/rng.hpp"

namespace parsim {

namespace {

SigmaMode sigma_mode_from_string(const std::string& name, const std::string& origin) {
  if (name == to_string(SigmaMode::Known)) return SigmaMode::Known;
  if (name == to_string(SigmaMode::Jeffreys)) return SigmaMode::Jeffreys;
  throw ParseError(origin + ": unknown sigma mode '" + name + "'");
}

}  // namespace

ReportFormat parse_report_format(const std::string& name) {
  if (name == "json") return ReportFormat::Json;
  if (name == "csv") return ReportFormat::Csv;
  throw ValidationError("unknown report format '" + name + "', expected json or csv");
}

std::string rank_report_to_json(const RankReport& report) {
  nlohmann::json doc;
  doc["metadata"] = {
      {"A", report.jeffreys_a},
      {"input_digest", report.input_digest},
      {"k", report.k},
      {"sigma_mode", to_string(report.sigma_mode)},
      {"tool_version", report.tool_version},
  };
  doc["models"] = nlohmann::json::array();
  for (const auto& record : report.records) {
    doc["models"].push_back({
        {"label", record.label},
        {"n", record.n},
        {"m", record.m},
        {"residual_norm", record.residual_norm},
        {"log_occam", record.log_occam},
        {"log_gof", record.log_gof},
        {"log_evidence", record.log_evidence},
        {"posterior_prob", record.posterior_prob},
    });
  }
  return doc.dump(2) + "\n";
}

std::string rank_report_to_csv(const RankReport& report) {
  std::string out;
  out += "# A=" + format_number(report.jeffreys_a) + "\n";
  out += "# input_digest=" + report.input_digest + "\n";
  out += "# k=" + format_number(report.k) + "\n";
  out += "# sigma_mode=" + std::string(to_string(report.sigma_mode)) + "\n";
  out += "# tool_version=" + report.tool_version + "\n";
  out += "label,n,m,residual_norm,log_occam,log_gof,log_evidence,posterior_prob\n";
  for (const auto& record : report.records) {
    out += csv_escape(record.label) + "," + std::to_string(record.n) + "," +
           std::to_string(record.m) + "," + format_number(record.residual_norm) + "," +
           format_number(record.log_occam) + "," + format_number(record.log_gof) + "," +
           format_number(record.log_evidence) + "," + format_number(record.posterior_prob) +
           "\n";
  }
  return out;
}

RankReport rank_report_from_csv(const std::string& text) {
  const std::string origin = "rank report";
  RankReport report;

  std::istringstream lines(text);
  std::string line;
  std::string table_text;
  bool in_table = false;
  while (std::getline(lines, line)) {
    if (!in_table && line.rfind("# ", 0) == 0) {
      const std::string entry = line.substr(2);
      const std::size_t eq = entry.find('=');
      if (eq == std::string::npos) {
        throw ParseError(origin + ": metadata line '" + line + "' is not 'key=value'");
      }
      const std::string key = entry.substr(0, eq);
      const std::string value = entry.substr(eq + 1);
      if (key == "A") {
        report.jeffreys_a = parse_number(value, origin + " metadata A");
      } else if (key == "k") {
        report.k = parse_number(value, origin + " metadata k");
      } else if (key == "sigma_mode") {
        report.sigma_mode = sigma_mode_from_string(value, origin);
      } else if (key == "tool_version") {
        report.tool_version = value;
      } else if (key == "input_digest") {
        report.input_digest = value;
      } else {
        throw ParseError(origin + ": unknown metadata key '" + key + "'");
      }
      continue;
    }
    in_table = true;
    table_text += line;
    table_text += '\n';
  }

  const CsvTable table = parse_csv_table(table_text, origin);
  const std::vector<std::string> expected = {
      "label",     "n",       "m",            "residual_norm",
      "log_occam", "log_gof", "log_evidence", "posterior_prob"};
  if (table.header != expected) {
    throw ParseError(origin + ": unexpected record header");
  }
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const auto cell = [&](std::size_t j) {
      return parse_number(row[j], origin + " row " + std::to_string(r + 1) + " column " +
                                      expected[j]);
    };
    RankRecord record;
    record.label = row[0];
    record.n = static_cast<Index>(cell(1));
    record.m = static_cast<Index>(cell(2));
    record.residual_norm = cell(3);
    record.log_occam = cell(4);
    record.log_gof = cell(5);
    record.log_evidence = cell(6);
    record.posterior_prob = cell(7);
    report.records.push_back(std::move(record));
  }
  return report;
}

std::string outcomes_to_json(const std::vector<ValidationOutcome>& outcomes) {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& outcome : outcomes) {
    nlohmann::json entry = {
        {"check_name", outcome.check_name},
        {"analytic", outcome.analytic},
        {"numeric", outcome.numeric},
        {"tolerance", outcome.tolerance},
        {"pass", outcome.pass},
    };
    if (outcome.standard_error) {
      entry["standard_error"] = *outcome.standard_error;
    } else {
      entry["standard_error"] = nullptr;
    }
    doc.push_back(std::move(entry));
  }
  return doc.dump(2) + "\n";
}

std::string input_digest_hex(const std::string& input_bytes, const std::string& models_bytes) {
  std::uint64_t state = fnv1a64(input_bytes);
  state = fnv1a64(std::string_view("\x1f", 1), state);
  state = fnv1a64(models_bytes, state);
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(state));
  return buffer;
}

}  // namespace parsim
