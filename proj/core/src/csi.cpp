#include "csiaug/csi.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "csiaug/error.hpp"

namespace csiaug {
namespace {

std::string_view trim_ws(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n')) s.remove_suffix(1);
  return s;
}

std::string_view strip_quotes(std::string_view s) {
  s = trim_ws(s);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = trim_ws(s.substr(1, s.size() - 2));
  return s;
}

template <typename Int>
Int parse_int(std::string_view text, std::string_view what, std::size_t line_no) {
  text = strip_quotes(text);
  Int value{};
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    fail(ErrorKind::parse, fmt::format("line {}: malformed {} field '{}'", line_no, what, text));
  }
  return value;
}

std::vector<std::int32_t> parse_iq_array(std::string_view text, std::size_t line_no) {
  text = strip_quotes(text);
  if (text.size() < 2 || text.front() != '[' || text.back() != ']') {
    fail(ErrorKind::structural, fmt::format("line {}: csi field is not a bracketed array", line_no));
  }
  text = text.substr(1, text.size() - 2);
  std::vector<std::int32_t> values;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (text[i] == ' ' || text[i] == ',' || text[i] == '\t')) ++i;
    if (i >= text.size()) break;
    std::size_t j = i;
    while (j < text.size() && text[j] != ' ' && text[j] != ',' && text[j] != '\t') ++j;
    values.push_back(parse_int<std::int32_t>(text.substr(i, j - i), "I/Q", line_no));
    i = j;
  }
  if (values.size() % 2 != 0) {
    fail(ErrorKind::structural,
         fmt::format("line {}: odd-length I/Q array ({} integers)", line_no, values.size()));
  }
  return values;
}

SubcarrierSelection lltf_selection(std::string name, std::size_t (*slot_of)(int)) {
  SubcarrierSelection sel{std::move(name), {}};
  sel.indices.reserve(kLltfSubcarriers);
  for (int s = -26; s <= 26; ++s) {
    if (s != 0) sel.indices.push_back(slot_of(s));
  }
  return sel;
}

}  // namespace

void ColumnMapping::bind_header(std::string_view header_line) {
  const auto fields = split_fields(header_line, delimiter);
  auto find = [&](const std::optional<std::string>& name, std::size_t& target) {
    if (!name) return;
    auto it = std::find_if(fields.begin(), fields.end(),
                           [&](const std::string& f) { return strip_quotes(f) == *name; });
    if (it == fields.end()) {
      fail(ErrorKind::structural, fmt::format("header has no column named '{}'", *name));
    }
    target = static_cast<std::size_t>(it - fields.begin());
  };
  find(column_names.seq, seq);
  find(column_names.timestamp, timestamp);
  find(column_names.csi, csi);
  if (column_names.rssi) {
    std::size_t idx = 0;
    find(column_names.rssi, idx);
    rssi = idx;
  }
}

void SubcarrierSelection::validate(std::size_t raw_slots) const {
  if (indices.size() != kLltfSubcarriers) {
    fail(ErrorKind::parameter, fmt::format("selection '{}' has {} indices, expected {}", name,
                                           indices.size(), kLltfSubcarriers));
  }
  std::set<std::size_t> seen;
  for (auto idx : indices) {
    if (idx >= raw_slots) {
      fail(ErrorKind::bounds,
           fmt::format("selection '{}' index {} outside {} raw slots", name, idx, raw_slots));
    }
    if (!seen.insert(idx).second) {
      fail(ErrorKind::parameter, fmt::format("selection '{}' repeats index {}", name, idx));
    }
  }
}

SubcarrierSelection SubcarrierSelection::lltf52() {
  return lltf_selection("lltf52", [](int s) {
    return static_cast<std::size_t>(s >= 0 ? s : 64 + s);
  });
}

SubcarrierSelection SubcarrierSelection::lltf52_centered() {
  return lltf_selection("lltf52_centered", [](int s) { return static_cast<std::size_t>(32 + s); });
}

std::optional<SubcarrierSelection> SubcarrierSelection::preset(std::string_view name) {
  if (name == "lltf52") return lltf52();
  if (name == "lltf52_centered") return lltf52_centered();
  return std::nullopt;
}

std::vector<std::string> split_fields(std::string_view line, char delimiter) {
  std::vector<std::string> out;
  std::string current;
  int depth = 0;
  bool quoted = false;
  for (char ch : line) {
    if (ch == '"') quoted = !quoted;
    if (!quoted) {
      if (ch == '[') ++depth;
      if (ch == ']' && depth > 0) --depth;
    }
    if (ch == delimiter && depth == 0 && !quoted) {
      out.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(ch);
    }
  }
  out.push_back(std::move(current));
  return out;
}

CsiRecord parse_csi_line(std::string_view line, const ColumnMapping& mapping, std::size_t line_no) {
  const auto fields = split_fields(trim_ws(line), mapping.delimiter);
  auto column = [&](std::size_t idx, std::string_view what) -> std::string_view {
    if (idx >= fields.size()) {
      fail(ErrorKind::structural, fmt::format("line {}: missing {} column (index {}, {} fields)",
                                              line_no, what, idx, fields.size()));
    }
    return fields[idx];
  };

  CsiRecord rec;
  rec.seq = parse_int<std::int64_t>(column(mapping.seq, "seq"), "seq", line_no);
  rec.timestamp_ms = parse_int<std::int64_t>(column(mapping.timestamp, "timestamp"), "timestamp", line_no);
  if (mapping.rssi && *mapping.rssi < fields.size() && !strip_quotes(fields[*mapping.rssi]).empty()) {
    rec.rssi_dbm = parse_int<std::int32_t>(fields[*mapping.rssi], "rssi", line_no);
  }
  const auto flat = parse_iq_array(column(mapping.csi, "csi"), line_no);
  rec.iq.reserve(flat.size() / 2);
  for (std::size_t i = 0; i + 1 < flat.size(); i += 2) {
    if (mapping.order == IqOrder::imag_real) {
      rec.iq.push_back({flat[i], flat[i + 1]});
    } else {
      rec.iq.push_back({flat[i + 1], flat[i]});
    }
  }
  return rec;
}

std::string format_csi_line(const CsiRecord& record, const ColumnMapping& mapping) {
  std::size_t ncols = std::max({mapping.seq, mapping.timestamp, mapping.csi}) + 1;
  if (mapping.rssi) ncols = std::max(ncols, *mapping.rssi + 1);
  std::vector<std::string> cols(ncols);

  cols[mapping.seq] = std::to_string(record.seq);
  cols[mapping.timestamp] = std::to_string(record.timestamp_ms);
  if (mapping.rssi && record.rssi_dbm) cols[*mapping.rssi] = std::to_string(*record.rssi_dbm);

  std::string csi = "[";
  for (std::size_t i = 0; i < record.iq.size(); ++i) {
    const auto& p = record.iq[i];
    const auto [a, b] = mapping.order == IqOrder::imag_real ? std::pair{p.imag, p.real}
                                                            : std::pair{p.real, p.imag};
    if (i) csi += ' ';
    csi += fmt::format("{} {}", a, b);
  }
  csi += ']';
  cols[mapping.csi] = std::move(csi);

  std::string line;
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) line += mapping.delimiter;
    line += cols[i];
  }
  return line;
}

std::vector<double> amplitudes(const CsiRecord& record, const SubcarrierSelection& sel) {
  std::vector<double> out;
  out.reserve(sel.indices.size());
  for (auto idx : sel.indices) {
    if (idx >= record.iq.size()) {
      fail(ErrorKind::bounds, fmt::format("subcarrier slot {} outside record with {} pairs", idx,
                                          record.iq.size()));
    }
    const auto& p = record.iq[idx];
    const double im = p.imag, re = p.real;
    out.push_back(std::sqrt(im * im + re * re));
  }
  return out;
}

CsiLog read_csi_log(std::istream& in, ColumnMapping mapping, std::string_view source) {
  CsiLog log;
  std::string line;
  bool header_pending = mapping.header;
  std::optional<std::int64_t> last_ts;
  while (std::getline(in, line)) {
    ++log.lines;
    if (trim_ws(line).empty()) continue;
    if (header_pending) {
      header_pending = false;
      mapping.bind_header(line);
      continue;
    }
    try {
      auto rec = parse_csi_line(line, mapping, log.lines);
      if (last_ts && rec.timestamp_ms < *last_ts) ++log.nonmonotonic_timestamps;
      last_ts = rec.timestamp_ms;
      log.records.push_back(std::move(rec));
    } catch (const Error& e) {
      std::string_view what = e.what();
      const auto own = fmt::format("line {}: ", log.lines);
      if (what.starts_with(own)) what.remove_prefix(own.size());
      throw Error(e.kind(), fmt::format("{}:{}: {}", source, log.lines, what));
    }
  }
  return log;
}

}  // namespace csiaug
