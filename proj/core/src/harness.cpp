#include "csiaug/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <numeric>
#include <thread>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "csiaug/error.hpp"

namespace csiaug {

using nlohmann::json;

void ExperimentSpec::validate() const {
  std::vector<std::string> problems;
  if (train_subset.empty()) problems.push_back("experiment.train_subset: empty");
  if (eval_subsets.empty()) problems.push_back("experiment.eval_subsets: empty");
  if (runs < 1) problems.push_back("experiment.runs: must be >= 1");
  if (epochs < 1) problems.push_back("experiment.epochs: must be >= 1");
  if (batch < 1) problems.push_back("experiment.batch: must be >= 1");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) problems.push_back("experiment.lr: must be > 0");
  if (!(split.train_fraction > 0.0 && split.train_fraction < 1.0)) {
    problems.push_back("experiment.split.train_fraction: must lie in (0, 1)");
  }
  const auto none = std::find_if(arms.begin(), arms.end(), [](const ExperimentArm& a) { return a.name == kBaselineArm; });
  if (none == arms.end()) {
    problems.push_back("experiment.arms: no arm named \"none\"");
  } else if (!none->pipeline.operators.empty()) {
    problems.push_back("experiment.arms[none]: pipeline must be empty");
  }
  std::vector<std::string> names;
  for (const auto& a : arms) {
    if (std::find(names.begin(), names.end(), a.name) != names.end()) {
      problems.push_back(fmt::format("experiment.arms: duplicate arm \"{}\"", a.name));
    }
    names.push_back(a.name);
    try {
      a.pipeline.validate();
    } catch (const Error& e) {
      problems.push_back(fmt::format("experiment.arms[{}]: {}", a.name, e.what()));
    }
  }
  try {
    classifier.validate();
  } catch (const Error& e) {
    problems.push_back(fmt::format("experiment.classifier: {}", e.what()));
  }
  if (!problems.empty()) {
    std::string msg = "experiment does not validate:";
    for (const auto& p : problems) msg += "\n  " + p;
    fail(ErrorKind::schema, msg);
  }
}

std::size_t ArmSummary::failed_runs() const noexcept {
  return static_cast<std::size_t>(std::count_if(runs.begin(), runs.end(), [](const RunRecord& r) { return r.failed; }));
}

std::size_t RunSummary::failed_runs() const noexcept {
  std::size_t n = 0;
  for (const auto& a : arms) n += a.failed_runs();
  return n;
}

ClassifierFactory reference_classifier(const ClassifierConfig& config) {
  return [config](std::size_t w, std::size_t h, std::uint64_t seed) -> std::unique_ptr<TrainableClassifier> {
    return std::make_unique<ConvClassifier>(config, w, h, seed);
  };
}

std::uint64_t run_seed(std::uint64_t experiment_seed, std::size_t run_index) noexcept {
  return derive_seed(experiment_seed, {tag_key("run"), run_index});
}

std::size_t select_best_epoch(std::span<const double> acc) {
  if (acc.empty()) fail(ErrorKind::parameter, "select_best_epoch: no epochs");
  std::size_t best = 0;
  for (std::size_t i = 1; i < acc.size(); ++i) {
    if (acc[i] > acc[best]) best = i;
  }
  return best + 1;
}

double evaluate(const Classifier& model, const std::vector<Sample>& samples) {
  if (samples.empty()) fail(ErrorKind::parameter, "evaluate: empty sample list");
  std::size_t correct = 0;
  for (const auto& s : samples) {
    if (model.predict(s.spectrogram) == s.label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(samples.size());
}

namespace {

void require_class_complete(const std::vector<Sample>& samples, const char* what) {
  if (samples.empty()) fail(ErrorKind::parameter, fmt::format("train_one: {} set is empty", what));
  ClassCounts c{};
  for (const auto& s : samples) {
    if (s.label < 0 || s.label >= static_cast<int>(kNumClasses)) {
      fail(ErrorKind::parameter, fmt::format("train_one: {} sample with label {}", what, s.label));
    }
    ++c[static_cast<std::size_t>(s.label)];
  }
  if (std::find(c.begin(), c.end(), 0u) != c.end()) {
    fail(ErrorKind::parameter, fmt::format("train_one: {} set is missing a class", what));
  }
}

}  // namespace

TrainOutcome train_one(const PipelineSpec& arm, const std::vector<Sample>& train,
                       const std::vector<Sample>& validation, const ExperimentSpec& cfg,
                       std::size_t run_index, const ClassifierFactory& factory) {
  require_class_complete(train, "training");
  require_class_complete(validation, "validation");
  const auto w = train.front().spectrogram.width();
  const auto h = train.front().spectrogram.height();

  const auto seed = run_seed(cfg.seed, run_index);
  const auto make = factory ? factory : reference_classifier(cfg.classifier);
  auto model = make(w, h, seed);

  PipelineSpec pipeline = arm;
  pipeline.global_seed = derive_seed(seed, {tag_key("augment"), arm.global_seed});

  std::vector<int> labels;
  labels.reserve(train.size());
  for (const auto& s : train) labels.push_back(s.label);

  TrainOutcome out;
  out.record.run_index = run_index;
  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    BalancedBatchSampler sampler(labels, cfg.batch, RandomStream(derive_seed(seed, {tag_key("sampler"), epoch})));
    std::uint64_t position = 0;
    double loss_sum = 0.0;
    for (auto batch = sampler.next(); !batch.empty(); batch = sampler.next()) {
      for (auto idx : batch) {
        const auto& sample = train[idx];
        const double loss = pipeline.operators.empty()
                                ? model->accumulate_gradient(sample.spectrogram, sample.label)
                                : model->accumulate_gradient(
                                      apply_pipeline(sample.spectrogram, pipeline, {epoch, position}).output,
                                      sample.label);
        ++position;
        if (!std::isfinite(loss)) {
          out.record.failed = true;
          out.record.error = fmt::format("non-finite training loss in epoch {}", epoch);
          return out;
        }
        loss_sum += loss;
      }
      model->step(cfg.learning_rate, batch.size());
    }
    out.record.loss_history.push_back(loss_sum / static_cast<double>(position));
    const double acc = evaluate(*model, validation);
    out.record.validation_history.push_back(acc);
    if (!out.best || acc > out.record.best_validation) {
      out.record.best_validation = acc;
      out.record.best_epoch = epoch;
      out.best = model->clone();
    }
  }
  return out;
}

AblationData prepare_ablation_data(const ExperimentSpec& cfg,
                                   const std::map<std::string, std::vector<Sample>>& subsets) {
  auto find = [&](const std::string& name) -> const std::vector<Sample>& {
    const auto it = subsets.find(name);
    if (it == subsets.end()) fail(ErrorKind::schema, fmt::format("subset \"{}\" is not available", name));
    return it->second;
  };
  AblationData data;
  std::tie(data.train, data.validation) = split(find(cfg.train_subset), cfg.split);
  for (const auto& name : cfg.eval_subsets) data.eval[name] = find(name);
  return data;
}

void aggregate(RunSummary& summary) {
  for (auto& arm : summary.arms) {
    arm.stats.clear();
    for (const auto& subset : summary.eval_subsets) {
      std::vector<double> v;
      for (const auto& r : arm.runs) {
        if (r.failed) continue;
        const auto it = r.test_accuracy.find(subset);
        if (it != r.test_accuracy.end()) v.push_back(it->second);
      }
      SubsetStats st;
      st.n = v.size();
      if (!v.empty()) {
        st.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
        if (v.size() > 1) {
          double ss = 0.0;
          for (double x : v) ss += (x - st.mean) * (x - st.mean);
          st.std = std::sqrt(ss / static_cast<double>(v.size() - 1));
        }
      }
      arm.stats[subset] = st;
    }
  }
  const auto base = std::find_if(summary.arms.begin(), summary.arms.end(),
                                 [](const ArmSummary& a) { return a.name == kBaselineArm; });
  for (auto& arm : summary.arms) {
    for (auto& [subset, st] : arm.stats) {
      st.delta = base == summary.arms.end() ? 0.0 : st.mean - base->stats.at(subset).mean;
    }
  }
}

RunSummary run_ablation(const ExperimentSpec& cfg, const AblationData& data, const AblationOptions& options) {
  cfg.validate();
  RunSummary summary;
  summary.train_subset = cfg.train_subset;
  summary.eval_subsets = cfg.eval_subsets;
  summary.runs = cfg.runs;
  for (const auto& arm : cfg.arms) {
    ArmSummary a;
    a.name = arm.name;
    a.runs.resize(cfg.runs);
    summary.arms.push_back(std::move(a));
  }

  const std::size_t tasks = cfg.arms.size() * cfg.runs;
  std::atomic<std::size_t> next{0};
  std::mutex progress_mutex;

  auto worker = [&] {
    for (std::size_t t = next++; t < tasks; t = next++) {
      const std::size_t arm_index = t / cfg.runs;
      const std::size_t run_index = t % cfg.runs;
      const auto& arm = cfg.arms[arm_index];
      RunRecord record;
      try {
        auto outcome = train_one(arm.pipeline, data.train, data.validation, cfg, run_index, options.factory);
        record = std::move(outcome.record);
        if (!record.failed && outcome.best) {
          for (const auto& [name, samples] : data.eval) record.test_accuracy[name] = evaluate(*outcome.best, samples);
          if (options.checkpoint_dir) {
            const auto dir = *options.checkpoint_dir / arm.name;
            std::filesystem::create_directories(dir);
            outcome.best->save(dir / fmt::format("run_{:02}.ckpt", run_index));
          }
        }
      } catch (const std::exception& e) {
        record.run_index = run_index;
        record.failed = true;
        record.error = e.what();
      }
      summary.arms[arm_index].runs[run_index] = std::move(record);
      if (options.progress) {
        std::lock_guard lock(progress_mutex);
        options.progress(fmt::format("arm {} run {}/{} done", arm.name, run_index + 1, cfg.runs));
      }
    }
  };

  const std::size_t jobs = std::clamp<std::size_t>(options.jobs, 1, std::max<std::size_t>(tasks, 1));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < jobs; ++i) pool.emplace_back(worker);
  }
  aggregate(summary);
  return summary;
}

void to_json(json& j, const RunSummary& s) {
  json arms = json::array();
  for (const auto& a : s.arms) {
    json runs = json::array();
    for (const auto& r : a.runs) {
      json rj{{"run", r.run_index},
              {"failed", r.failed},
              {"best_epoch", r.best_epoch},
              {"best_validation", r.best_validation},
              {"validation_history", r.validation_history},
              {"loss_history", r.loss_history},
              {"test_accuracy", r.test_accuracy}};
      if (r.failed) rj["error"] = r.error;
      runs.push_back(std::move(rj));
    }
    json stats = json::object();
    for (const auto& [subset, st] : a.stats) {
      stats[subset] = {{"mean", st.mean}, {"std", st.std}, {"delta", st.delta}, {"n", st.n}};
    }
    arms.push_back({{"name", a.name}, {"runs", std::move(runs)}, {"stats", std::move(stats)}});
  }
  j = json{{"train_subset", s.train_subset}, {"eval_subsets", s.eval_subsets}, {"runs", s.runs}, {"arms", std::move(arms)}};
}

void from_json(const json& j, RunSummary& s) {
  s = RunSummary{};
  s.train_subset = j.at("train_subset").get<std::string>();
  s.eval_subsets = j.at("eval_subsets").get<std::vector<std::string>>();
  s.runs = j.at("runs").get<std::size_t>();
  for (const auto& aj : j.at("arms")) {
    ArmSummary a;
    a.name = aj.at("name").get<std::string>();
    for (const auto& rj : aj.at("runs")) {
      RunRecord r;
      r.run_index = rj.at("run").get<std::size_t>();
      r.failed = rj.at("failed").get<bool>();
      r.best_epoch = rj.at("best_epoch").get<std::size_t>();
      r.best_validation = rj.at("best_validation").get<double>();
      r.validation_history = rj.at("validation_history").get<std::vector<double>>();
      r.loss_history = rj.at("loss_history").get<std::vector<double>>();
      r.test_accuracy = rj.at("test_accuracy").get<std::map<std::string, double>>();
      if (rj.contains("error")) r.error = rj["error"].get<std::string>();
      a.runs.push_back(std::move(r));
    }
    for (const auto& [subset, st] : aj.at("stats").items()) {
      a.stats[subset] = SubsetStats{st.at("mean").get<double>(), st.at("std").get<double>(),
                                    st.at("delta").get<double>(), st.at("n").get<std::size_t>()};
    }
    s.arms.push_back(std::move(a));
  }
}

}  // namespace csiaug
