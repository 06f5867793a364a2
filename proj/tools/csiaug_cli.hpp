#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "csiaug/config.hpp"
#include "csiaug/error.hpp"

namespace csiaug::cli {

enum ExitCode : int {
  ok = 0,
  parse_failure = 2,    // unparseable CSI log lines
  format_failure = 3,   // corrupt spectrogram files, digest or count mismatches
  schema_failure = 4,   // invalid configuration
  runtime_failure = 5,  // I/O trouble, failed training runs
  usage_failure = 64,   // bad command line
};

int exit_code(ErrorKind kind) noexcept;

struct IngestOptions {
  std::filesystem::path out;
  std::vector<std::filesystem::path> extra_logs;  // unlabeled, appended to the config's logs
};

struct IngestResult {
  std::size_t logs = 0;
  std::size_t files = 0;
  std::filesystem::path manifest;
};

IngestResult cmd_ingest(const RunConfig& config, const IngestOptions& options, std::ostream& log);

struct AugmentOptions {
  std::filesystem::path out;
  std::uint64_t epoch = 0;
  bool draw_log = false;
  bool preview = false;
};

/// Input i is augmented under sample key (epoch, i); outputs keep the input
/// file names.
std::vector<std::filesystem::path> cmd_augment(const std::vector<std::filesystem::path>& inputs,
                                               const PipelineSpec& pipeline, const AugmentOptions& options,
                                               std::ostream& log);

void cmd_preview(const std::filesystem::path& input, const std::filesystem::path& output);

struct AblateOptions {
  std::filesystem::path out;
  std::size_t jobs = 1;
  std::string format = "md";
};

/// Writes summary.json, report.md and report.csv under options.out and
/// prints the chosen format to `report`. Returns the number of failed runs.
std::size_t cmd_ablate(const RunConfig& config, const AblateOptions& options, std::ostream& report,
                       std::ostream& log);

/// Verifies each manifest; true iff all pass.
bool cmd_verify(const std::vector<std::filesystem::path>& manifests, std::ostream& out);

/// Writes a synthetic Wallhack1.8k stand-in, a few CSI logs and a matching
/// config.json under `dir`.
void cmd_synth(const std::filesystem::path& dir, std::uint64_t seed, std::ostream& log);

/// Full command line (argv without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace csiaug::cli
