#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "csiaug/harness.hpp"

namespace csiaug {

/// Accuracy as "mean±std" in percent with one decimal, e.g. "43.6±9.8".
std::string format_mean_std(double mean, double std);

/// Signed delta in percentage points: "↑ 6.1", "↓ 3.4", or "~0.0" when it
/// rounds to zero.
std::string format_delta(double delta_fraction);

/// Markdown table: one row per arm, per eval subset a "mean±std" column and
/// a delta column. The baseline row leaves its delta cells blank. Failed
/// runs are listed under the table.
std::string format_markdown(const RunSummary& summary);

/// CSV with one row per arm: arm, then <subset>_mean, <subset>_std,
/// <subset>_delta for each eval subset, as fractions in full precision.
std::string format_csv(const RunSummary& summary);

struct ReportRow {
  std::string arm;
  std::map<std::string, SubsetStats> stats;  // n is not stored in CSV
};

/// Parses format_csv output back.
std::vector<ReportRow> parse_report_csv(std::string_view csv);

}  // namespace csiaug
