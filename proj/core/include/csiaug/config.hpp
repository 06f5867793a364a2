#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "csiaug/augment.hpp"
#include "csiaug/csi.hpp"
#include "csiaug/dataset.hpp"
#include "csiaug/harness.hpp"

namespace csiaug {

struct LogSource {
  std::filesystem::path path;
  int label = -1;
  Scenario scenario = Scenario::LOS;
  System system = System::BQ;
  std::optional<int> zone;
  std::optional<std::pair<std::size_t, std::size_t>> trim;  // [start, end) packet rows
};

struct IngestConfig {
  ColumnMapping mapping;
  SubcarrierSelection selection = SubcarrierSelection::lltf52();
  std::size_t window = kDefaultWidth;
  std::size_t hop = kDefaultWidth;
  double rate_hz = 100.0;
  std::string subset = "ingested";
  Scenario scenario = Scenario::LOS;
  System system = System::BQ;
  std::vector<LogSource> logs;
};

/// One audited configuration file per experiment. Relative paths resolve
/// against the directory holding the file.
struct RunConfig {
  std::optional<std::uint64_t> seed;
  std::filesystem::path output_dir = "out";
  IngestConfig ingest;
  PipelineSpec pipeline;
  std::map<std::string, std::filesystem::path> datasets;  // subset name -> manifest
  std::optional<ExperimentSpec> experiment;
  bool pipeline_seed_set = false;    // "pipeline.seed" given explicitly
  bool experiment_seed_set = false;  // "experiment.seed" given explicitly

  /// Parses and validates the structure. Throws a schema error listing every
  /// offending field.
  static RunConfig from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
  static RunConfig load(const std::filesystem::path& path);

  /// Applies a seed (flag override or the file's own) to the pipeline and
  /// experiment. Throws a schema error when no seed is available.
  void resolve_seed(std::optional<std::uint64_t> override_seed);

  /// Schema error unless every referenced log and manifest exists.
  void validate_paths() const;
};

PipelineSpec pipeline_from_json(const nlohmann::json& j);
ExperimentSpec experiment_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PipelineSpec& spec);

}  // namespace csiaug
