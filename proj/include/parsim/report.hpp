#pragma once

#include <string>
#include <vector>

#include "parsim/prior.hpp"
#include "parsim/types.hpp"
#include "parsim/validate.hpp"

namespace parsim {

inline constexpr const char* kToolVersion = "0.1.0";

enum class ReportFormat { Json, Csv };

ReportFormat parse_report_format(const std::string& name);

// One ranked model: the evidence split plus the normalized probability.
struct RankRecord {
  std::string label;
  Index n = 0;
  Index m = 0;
  double residual_norm = 0;
  double log_occam = 0;
  double log_gof = 0;
  double log_evidence = 0;
  double posterior_prob = 0;
};

// A full ranking run: records sorted by posterior_prob descending (ties by
// label), plus the run metadata needed to reproduce it.
struct RankReport {
  std::vector<RankRecord> records;
  double k = 6;
  SigmaMode sigma_mode = SigmaMode::Known;
  double jeffreys_a = 1;
  std::string tool_version = kToolVersion;
  std::string input_digest;
};

// Lossless serializations: JSON numbers keep their shortest round-trip
// form; CSV numbers carry 17 significant digits. The CSV layout is a
// comment block of metadata lines followed by an RFC-4180 record table.
std::string rank_report_to_json(const RankReport& report);
std::string rank_report_to_csv(const RankReport& report);
RankReport rank_report_from_csv(const std::string& text);

std::string outcomes_to_json(const std::vector<ValidationOutcome>& outcomes);

// 16-hex-digit FNV-1a over the dataset bytes and the model-spec bytes;
// reports sharing a digest were computed from identical inputs.
std::string input_digest_hex(const std::string& input_bytes, const std::string& models_bytes);

}  // namespace parsim
