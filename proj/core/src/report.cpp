#include "csiaug/report.hpp"

#include <cmath>
#include <sstream>

#include <fmt/format.h>

#include "csiaug/error.hpp"

namespace csiaug {
namespace {

std::string percent(double fraction) {
  auto s = fmt::format("{:.1f}", 100.0 * fraction);
  return s == "-0.0" ? "0.0" : s;
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (c == '"') {
      if (quoted && i + 1 < line.size() && line[i + 1] == '"') {
        cur.push_back('"');
        ++i;
      } else {
        quoted = !quoted;
      }
    } else if (c == ',' && !quoted) {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(std::move(cur));
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string format_mean_std(double mean, double std) { return percent(mean) + "±" + percent(std); }

std::string format_delta(double delta) {
  const auto magnitude = percent(std::fabs(delta));
  if (magnitude == "0.0") return "~0.0";
  return (delta > 0 ? "↑ " : "↓ ") + magnitude;
}

std::string format_markdown(const RunSummary& s) {
  std::string out = "| Augmentation |";
  std::string rule = "|---|";
  for (const auto& subset : s.eval_subsets) {
    out += fmt::format(" {}→{} | |", s.train_subset, subset);
    rule += "---|---|";
  }
  out += "\n" + rule + "\n";
  for (const auto& arm : s.arms) {
    out += fmt::format("| {} |", arm.name);
    const bool baseline = arm.name == kBaselineArm;
    for (const auto& subset : s.eval_subsets) {
      const auto it = arm.stats.find(subset);
      if (it == arm.stats.end() || it->second.n == 0) {
        out += " n/a | |";
        continue;
      }
      out += fmt::format(" {} | {} |", format_mean_std(it->second.mean, it->second.std),
                         baseline ? std::string() : format_delta(it->second.delta));
    }
    out += "\n";
  }
  if (s.failed_runs() > 0) {
    out += "\nFailed runs:\n";
    for (const auto& arm : s.arms) {
      for (const auto& r : arm.runs) {
        if (r.failed) out += fmt::format("- {} run {}: {}\n", arm.name, r.run_index, r.error);
      }
    }
  }
  return out;
}

std::string format_csv(const RunSummary& s) {
  std::string out = "arm";
  for (const auto& subset : s.eval_subsets) {
    out += fmt::format(",{0}_mean,{0}_std,{0}_delta", csv_field(subset));
  }
  out += "\n";
  for (const auto& arm : s.arms) {
    out += csv_field(arm.name);
    for (const auto& subset : s.eval_subsets) {
      const auto it = arm.stats.find(subset);
      const SubsetStats st = it == arm.stats.end() ? SubsetStats{} : it->second;
      out += fmt::format(",{:.17g},{:.17g},{:.17g}", st.mean, st.std, st.delta);
    }
    out += "\n";
  }
  return out;
}

std::vector<ReportRow> parse_report_csv(std::string_view csv) {
  std::istringstream in{std::string(csv)};
  std::string line;
  if (!std::getline(in, line)) fail(ErrorKind::format, "report CSV is empty");
  const auto header = split_csv_line(line);
  if (header.empty() || header[0] != "arm" || (header.size() - 1) % 3 != 0) {
    fail(ErrorKind::format, "report CSV header is malformed");
  }
  std::vector<std::string> subsets;
  for (std::size_t i = 1; i < header.size(); i += 3) {
    const auto& h = header[i];
    subsets.push_back(h.substr(0, h.size() - std::string_view("_mean").size()));
  }
  std::vector<ReportRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != header.size()) fail(ErrorKind::format, "report CSV row has the wrong field count");
    ReportRow row{f[0], {}};
    for (std::size_t s = 0; s < subsets.size(); ++s) {
      SubsetStats st;
      st.mean = std::stod(f[1 + 3 * s]);
      st.std = std::stod(f[2 + 3 * s]);
      st.delta = std::stod(f[3 + 3 * s]);
      row.stats[subsets[s]] = st;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace csiaug
