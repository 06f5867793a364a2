#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "csiaug/random.hpp"
#include "csiaug/spectrogram.hpp"

namespace csiaug {

inline constexpr std::size_t kNumClasses = 3;

/// 0 = no presence, 1 = walking, 2 = walking + arm-waving.
std::string_view class_name(int label) noexcept;

enum class Scenario { LOS, NLOS };
enum class System { PIFA, BQ };

std::string_view to_string(Scenario s) noexcept;
std::string_view to_string(System s) noexcept;
std::optional<Scenario> parse_scenario(std::string_view s) noexcept;
std::optional<System> parse_system(std::string_view s) noexcept;

struct Sample {
  Spectrogram spectrogram;
  int label = 0;
  Scenario scenario = Scenario::LOS;
  System system = System::BQ;
  std::optional<int> zone;
  std::string source_id;
};

using ClassCounts = std::array<std::size_t, kNumClasses>;

/// Subset sizes of the public Wallhack1.8k release.
struct PublishedSubset {
  std::string_view name;
  Scenario scenario;
  System system;
  int rooms;
  ClassCounts class_counts;

  constexpr std::size_t total() const noexcept {
    return class_counts[0] + class_counts[1] + class_counts[2];
  }
};

inline constexpr std::array<PublishedSubset, 4> kWallhackSubsets{{
    {"W1.8k_LB", Scenario::LOS, System::BQ, 1, {149, 154, 155}},
    {"W1.8k_LP", Scenario::LOS, System::PIFA, 1, {149, 160, 152}},
    {"W1.8k_NB", Scenario::NLOS, System::BQ, 5, {148, 150, 152}},
    {"W1.8k_NP", Scenario::NLOS, System::PIFA, 5, {143, 147, 147}},
}};

const PublishedSubset* find_published_subset(std::string_view name) noexcept;

struct ManifestEntry {
  std::string path;  // relative to the manifest's directory
  int label = 0;
  Scenario scenario = Scenario::LOS;
  System system = System::BQ;
  std::optional<int> zone;
  std::string digest;
};

/// JSON: {"subset": ..., "files": [{path, label, scenario, system, zone,
/// digest}], "counts": [n0, n1, n2]}
struct SubsetManifest {
  std::string subset;
  std::vector<ManifestEntry> files;
  ClassCounts counts{};

  /// Per-class tally of `files`.
  ClassCounts tally() const noexcept;

  static SubsetManifest load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;
};

void to_json(nlohmann::json& j, const SubsetManifest& m);
void from_json(const nlohmann::json& j, SubsetManifest& m);

struct VerificationReport {
  std::string subset;
  ClassCounts manifest_counts{};
  ClassCounts counted{};          // labels of files that were readable
  std::size_t total = 0;
  std::vector<std::string> missing;
  std::vector<std::string> digest_mismatches;
  std::vector<std::string> label_mismatches;  // header label disagrees with manifest
  std::optional<bool> matches_published;      // set for known Wallhack1.8k subsets
  bool passed = false;

  std::string to_text() const;
};

/// Reads every listed file, checks its digest and header label, and tallies
/// classes. Passes iff nothing is missing or corrupt, the tally equals the
/// manifest counts, and a known Wallhack1.8k subset has its published counts.
VerificationReport verify_manifest(const SubsetManifest& manifest, const std::filesystem::path& base_dir);

/// Loads every sample listed in a manifest. Throws a format error on a
/// digest mismatch.
std::vector<Sample> load_samples(const SubsetManifest& manifest, const std::filesystem::path& base_dir);

struct SplitSpec {
  double train_fraction = 0.8;
  bool stratified = true;
  std::uint64_t seed = 0;

  void validate() const;
};

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
};

/// Seeded partition. Each class (or the whole set, when not stratified)
/// sends ceil(fraction * n) members to train. Indices come back sorted.
SplitIndices split_indices(std::span<const int> labels, const SplitSpec& spec);

std::pair<std::vector<Sample>, std::vector<Sample>> split(const std::vector<Sample>& samples,
                                                          const SplitSpec& spec);

/// Class-uniform sampler with replacement: each draw picks a class
/// uniformly, then a uniform member of it. One epoch is ceil(N / batch)
/// batches totalling N draws (the last batch may be short).
class BalancedBatchSampler {
 public:
  BalancedBatchSampler(std::span<const int> labels, std::size_t batch, RandomStream stream);

  std::size_t batches_per_epoch() const noexcept { return batches_; }

  /// Next batch of sample indices; empty once the epoch is exhausted.
  std::vector<std::size_t> next();

  /// One class-uniform draw, outside batch bookkeeping.
  std::size_t draw();

 private:
  std::array<std::vector<std::size_t>, kNumClasses> members_;
  std::size_t total_;
  std::size_t batch_;
  std::size_t batches_;
  std::size_t emitted_ = 0;
  RandomStream stream_;
};

}  // namespace csiaug
