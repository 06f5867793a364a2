#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace csiaug {

/// Number of usable L-LTF subcarriers retained per packet.
inline constexpr std::size_t kLltfSubcarriers = 52;

/// One raw subcarrier slot as reported by the receiver.
struct IqPair {
  std::int32_t imag = 0;
  std::int32_t real = 0;

  friend bool operator==(const IqPair&, const IqPair&) = default;
};

/// One received CSI packet.
struct CsiRecord {
  std::int64_t timestamp_ms = 0;
  std::int64_t seq = 0;
  std::optional<std::int32_t> rssi_dbm;
  std::vector<IqPair> iq;

  friend bool operator==(const CsiRecord&, const CsiRecord&) = default;
};

enum class IqOrder { imag_real, real_imag };

/// Where each field lives in a delimiter-separated CSI log line.
///
/// Columns are addressed by zero-based index. When `header` is set the first
/// line of a log is a header row and any column given by name in
/// `column_names` is resolved against it (see bind_header).
struct ColumnMapping {
  char delimiter = ',';
  std::size_t seq = 0;
  std::size_t timestamp = 1;
  std::optional<std::size_t> rssi = 2;
  std::size_t csi = 3;
  IqOrder order = IqOrder::imag_real;
  bool header = false;

  struct Names {
    std::optional<std::string> seq, timestamp, rssi, csi;
  } column_names;

  /// Resolves named columns against a header line. Throws a structural
  /// error when a named column is absent.
  void bind_header(std::string_view header_line);
};

/// Ordered list of raw slot indices kept as spectrogram rows.
struct SubcarrierSelection {
  std::string name;
  std::vector<std::size_t> indices;

  /// Enforces exactly 52 distinct indices below `raw_slots`.
  void validate(std::size_t raw_slots) const;

  /// The 52 non-null L-LTF subcarriers of a 64-slot capture stored in FFT
  /// order (slot s for subcarrier s >= 0, slot 64 + s for s < 0), the ESP32
  /// layout. Rows are ordered by frequency: -26..-1 then 1..26.
  static SubcarrierSelection lltf52();

  /// Same subcarriers for a 64-slot capture stored with DC at slot 32.
  static SubcarrierSelection lltf52_centered();

  /// Looks up a preset by name ("lltf52", "lltf52_centered").
  static std::optional<SubcarrierSelection> preset(std::string_view name);
};

/// Splits a line on `delimiter`, ignoring delimiters inside [] or "".
std::vector<std::string> split_fields(std::string_view line, char delimiter);

/// Parses one log line. `line_no` is only used in error messages.
CsiRecord parse_csi_line(std::string_view line, const ColumnMapping& mapping,
                         std::size_t line_no = 0);

/// Renders a record so that parse_csi_line reproduces it. Unmapped columns
/// are left empty.
std::string format_csi_line(const CsiRecord& record, const ColumnMapping& mapping);

/// Per-packet amplitude vector: |imag + j real| for each selected slot.
std::vector<double> amplitudes(const CsiRecord& record, const SubcarrierSelection& sel);

struct CsiLog {
  std::vector<CsiRecord> records;
  std::size_t nonmonotonic_timestamps = 0;
  std::size_t lines = 0;
};

/// Reads a whole log. Blank lines are skipped. Errors carry `source:line`.
CsiLog read_csi_log(std::istream& in, ColumnMapping mapping, std::string_view source = "<stream>");

}  // namespace csiaug
