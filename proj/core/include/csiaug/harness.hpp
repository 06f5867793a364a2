#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "csiaug/augment.hpp"
#include "csiaug/dataset.hpp"
#include "csiaug/model.hpp"

namespace csiaug {

inline constexpr std::size_t kPaperEpochs = 400;
inline constexpr std::size_t kDeskEpochs = 50;
inline constexpr const char* kBaselineArm = "none";

struct ExperimentArm {
  std::string name;
  PipelineSpec pipeline;
};

struct ExperimentSpec {
  std::string train_subset;
  std::vector<std::string> eval_subsets;
  std::vector<ExperimentArm> arms;
  std::size_t runs = 10;
  std::size_t epochs = kDeskEpochs;
  double learning_rate = 1e-4;
  std::size_t batch = 16;
  ClassifierConfig classifier;
  std::uint64_t seed = 0;
  SplitSpec split;

  /// Throws a schema error listing every violated field.
  void validate() const;
};

struct RunRecord {
  std::size_t run_index = 0;
  bool failed = false;
  std::string error;
  std::size_t best_epoch = 0;  // 1-based
  double best_validation = 0.0;
  std::vector<double> validation_history;
  std::vector<double> loss_history;  // mean training loss per epoch
  std::map<std::string, double> test_accuracy;
};

struct SubsetStats {
  double mean = 0.0;
  double std = 0.0;    // sample standard deviation (n - 1); 0 when n < 2
  double delta = 0.0;  // mean minus the baseline arm's mean
  std::size_t n = 0;
};

struct ArmSummary {
  std::string name;
  std::vector<RunRecord> runs;
  std::map<std::string, SubsetStats> stats;

  std::size_t failed_runs() const noexcept;
};

struct RunSummary {
  std::string train_subset;
  std::vector<std::string> eval_subsets;
  std::size_t runs = 0;
  std::vector<ArmSummary> arms;

  std::size_t failed_runs() const noexcept;
};

void to_json(nlohmann::json& j, const RunSummary& s);
void from_json(const nlohmann::json& j, RunSummary& s);

/// Builds a fresh trainable model for a (width, height) input.
using ClassifierFactory =
    std::function<std::unique_ptr<TrainableClassifier>(std::size_t width, std::size_t height, std::uint64_t seed)>;

ClassifierFactory reference_classifier(const ClassifierConfig& config);

/// Seed shared by every arm's run `run_index`, so arms differ only in
/// their augmentation.
std::uint64_t run_seed(std::uint64_t experiment_seed, std::size_t run_index) noexcept;

/// 1-based epoch of the highest validation accuracy; earliest epoch on ties.
std::size_t select_best_epoch(std::span<const double> validation_accuracy);

/// Fraction of argmax-correct predictions. Throws a parameter error on an
/// empty sample list.
double evaluate(const Classifier& model, const std::vector<Sample>& samples);

struct TrainOutcome {
  RunRecord record;
  std::unique_ptr<TrainableClassifier> best;  // null when the run failed before epoch 1
};

/// Trains one model for cfg.epochs epochs with the balanced sampler,
/// augmenting training draws only. Returns the best-validation checkpoint.
TrainOutcome train_one(const PipelineSpec& arm, const std::vector<Sample>& train,
                       const std::vector<Sample>& validation, const ExperimentSpec& cfg,
                       std::size_t run_index, const ClassifierFactory& factory = {});

struct AblationData {
  std::vector<Sample> train;
  std::vector<Sample> validation;
  std::map<std::string, std::vector<Sample>> eval;
};

/// Splits cfg.train_subset into train/validation and gathers eval subsets.
AblationData prepare_ablation_data(const ExperimentSpec& cfg,
                                   const std::map<std::string, std::vector<Sample>>& subsets);

struct AblationOptions {
  std::size_t jobs = 1;
  std::optional<std::filesystem::path> checkpoint_dir;
  ClassifierFactory factory;
  std::function<void(const std::string&)> progress;
};

/// Every arm x run, evaluated on every eval subset, then aggregated.
RunSummary run_ablation(const ExperimentSpec& cfg, const AblationData& data, const AblationOptions& options = {});

/// Recomputes mean/std/delta of every arm from its run records. Failed runs
/// are excluded from the statistics.
void aggregate(RunSummary& summary);

}  // namespace csiaug
