#include "csiaug_cli.hpp"

#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <nlohmann/json.hpp>

#include "csiaug/augment.hpp"
#include "csiaug/dataset.hpp"
#include "csiaug/digest.hpp"
#include "csiaug/harness.hpp"
#include "csiaug/preview.hpp"
#include "csiaug/report.hpp"
#include "csiaug/spectro.hpp"
#include "csiaug/spectrogram_file.hpp"
#include "csiaug/synthetic.hpp"

namespace csiaug::cli {

namespace fs = std::filesystem;
using nlohmann::json;

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::parse:
    case ErrorKind::structural: return parse_failure;
    case ErrorKind::format: return format_failure;
    case ErrorKind::schema:
    case ErrorKind::parameter:
    case ErrorKind::bounds:
    case ErrorKind::split: return schema_failure;
    case ErrorKind::io:
    case ErrorKind::sampler:
    case ErrorKind::runtime: return runtime_failure;
  }
  return runtime_failure;
}

namespace {

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) fail(ErrorKind::io, fmt::format("cannot write {}", path.string()));
}

void make_dirs(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorKind::io, fmt::format("cannot create {}: {}", dir.string(), ec.message()));
}

}  // namespace

IngestResult cmd_ingest(const RunConfig& config, const IngestOptions& options, std::ostream& log) {
  const auto& in = config.ingest;
  std::vector<LogSource> sources = in.logs;
  for (const auto& p : options.extra_logs) {
    LogSource s;
    s.path = p;
    s.scenario = in.scenario;
    s.system = in.system;
    sources.push_back(s);
  }
  make_dirs(options.out);

  IngestResult result;
  SubsetManifest manifest;
  manifest.subset = in.subset;
  std::set<std::string> names;
  for (const auto& src : sources) {
    std::ifstream f(src.path);
    if (!f) fail(ErrorKind::io, fmt::format("cannot open {}", src.path.string()));
    const auto csi = read_csi_log(f, in.mapping, src.path.string());
    ++result.logs;
    if (csi.nonmonotonic_timestamps > 0) {
      fmt::print(log, "warning: {}: {} non-monotonic timestamps\n", src.path.string(), csi.nonmonotonic_timestamps);
    }
    AmplitudeSeries series(kLltfSubcarriers, in.rate_hz);
    for (const auto& r : csi.records) series.push_back(amplitudes(r, in.selection));
    if (src.trim && series.size() > 0) series = trim(series, src.trim->first, src.trim->second);
    const auto segments = segment(series, in.window, in.hop);
    if (segments.empty()) {
      fmt::print(log, "warning: {}: {} packets, fewer than one {}-packet window; nothing written\n",
                 src.path.string(), series.size(), in.window);
      continue;
    }
    if (src.label < 0) {
      fmt::print(log, "warning: {}: unlabeled, segments are written but left out of the manifest\n",
                 src.path.string());
    }
    for (std::size_t i = 0; i < segments.size(); ++i) {
      const auto name = fmt::format("{}_{:03}.csis", src.path.stem().string(), i);
      if (!names.insert(name).second) {
        fail(ErrorKind::schema, fmt::format("two logs would both write {}", name));
      }
      const auto bytes = encode_spectrogram({segments[i], static_cast<std::int8_t>(src.label)});
      write_file_bytes(options.out / name, bytes);
      ++result.files;
      if (src.label < 0) continue;
      manifest.files.push_back(ManifestEntry{name, src.label, src.scenario, src.system, src.zone, sha256_digest(bytes)});
    }
  }
  manifest.counts = manifest.tally();
  result.manifest = options.out / "manifest.json";
  manifest.save(result.manifest);
  fmt::print(log, "{} logs -> {} spectrograms ({} labeled: {} / {} / {})\n", result.logs, result.files,
             manifest.files.size(), manifest.counts[0], manifest.counts[1], manifest.counts[2]);
  return result;
}

std::vector<fs::path> cmd_augment(const std::vector<fs::path>& inputs, const PipelineSpec& pipeline,
                                  const AugmentOptions& options, std::ostream& log) {
  pipeline.validate();
  std::set<std::string> names;
  for (const auto& p : inputs) {
    if (!names.insert(p.filename().string()).second) {
      fail(ErrorKind::schema, fmt::format("two inputs share the file name {}", p.filename().string()));
    }
  }
  make_dirs(options.out);
  std::vector<fs::path> outputs;
  json draws = json::array();
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const auto file = read_spectrogram(inputs[i]);
    const SampleKey key{options.epoch, i};
    auto result = apply_pipeline(file.spectrogram, pipeline, key);
    const auto out = options.out / inputs[i].filename();
    write_spectrogram(out, {result.output, file.label});
    outputs.push_back(out);
    if (options.draw_log) {
      draws.push_back({{"file", inputs[i].filename().string()}, {"epoch", key.epoch}, {"index", key.index}, {"draws", result.log}});
    }
    if (options.preview) {
      auto png = out;
      png.replace_extension(".png");
      write_png(png, side_by_side(render(file.spectrogram), render(result.output)));
    }
  }
  if (options.draw_log) write_text(options.out / "draws.json", draws.dump(2) + "\n");
  fmt::print(log, "augmented {} files into {}\n", outputs.size(), options.out.string());
  return outputs;
}

void cmd_preview(const fs::path& input, const fs::path& output) {
  write_png(output, render(read_spectrogram(input).spectrogram));
}

std::size_t cmd_ablate(const RunConfig& config, const AblateOptions& options, std::ostream& report,
                       std::ostream& log) {
  if (!config.experiment) fail(ErrorKind::schema, "config: no \"experiment\" section");
  if (options.format != "md" && options.format != "csv" && options.format != "json") {
    fail(ErrorKind::schema, fmt::format("--format: expected md, csv or json, got {}", options.format));
  }
  config.validate_paths();
  const auto& exp = *config.experiment;

  std::map<std::string, std::vector<Sample>> subsets;
  std::vector<std::string> needed = exp.eval_subsets;
  needed.push_back(exp.train_subset);
  for (const auto& name : needed) {
    if (subsets.contains(name)) continue;
    const auto& path = config.datasets.at(name);
    subsets[name] = load_samples(SubsetManifest::load(path), path.parent_path());
  }
  const auto data = prepare_ablation_data(exp, subsets);

  make_dirs(options.out);
  AblationOptions opts;
  opts.jobs = options.jobs;
  opts.checkpoint_dir = options.out / "checkpoints";
  opts.progress = [&log](const std::string& msg) { log << msg << '\n'; };
  const auto summary = run_ablation(exp, data, opts);

  json j = summary;
  const auto md = format_markdown(summary);
  const auto csv = format_csv(summary);
  write_text(options.out / "summary.json", j.dump(2) + "\n");
  write_text(options.out / "report.md", md);
  write_text(options.out / "report.csv", csv);
  if (options.format == "md") report << md;
  else if (options.format == "csv") report << csv;
  else report << j.dump(2) << '\n';
  return summary.failed_runs();
}

bool cmd_verify(const std::vector<fs::path>& manifests, std::ostream& out) {
  bool all = true;
  for (const auto& path : manifests) {
    const auto r = verify_manifest(SubsetManifest::load(path), path.parent_path());
    out << r.to_text();
    all = all && r.passed;
  }
  return all;
}

void cmd_synth(const fs::path& dir, std::uint64_t seed, std::ostream& log) {
  make_dirs(dir / "logs");
  const auto manifests = write_synthetic_wallhack(dir / "wallhack", seed);
  ColumnMapping mapping;
  json logs = json::array();
  const char* names[] = {"idle", "walk", "wave"};
  for (int label = 0; label < 3; ++label) {
    std::string text;
    for (const auto& r : synthetic_csi_records(850, label, derive_seed(seed, {tag_key("log"), static_cast<std::uint64_t>(label)}))) {
      text += format_csi_line(r, mapping) + "\n";
    }
    const auto name = fmt::format("{}.csv", names[label]);
    write_text(dir / "logs" / name, text);
    logs.push_back({{"path", "logs/" + name}, {"label", label}});
  }
  json datasets = json::object();
  for (const auto& [name, path] : manifests) datasets[name] = fs::relative(path, dir).generic_string();
  const json config = {
      {"seed", seed},
      {"output_dir", "out"},
      {"ingest", {{"subset", "ingested"}, {"scenario", "LOS"}, {"system", "BQ"}, {"logs", logs}}},
      {"pipeline",
       {{"operators", {"circular_rotation", "resized_crop", "amplitude", "contrast"}}}},
      {"datasets", datasets},
      {"experiment",
       {{"train_subset", "W1.8k_LB"},
        {"eval_subsets", {"W1.8k_LB", "W1.8k_NB"}},
        {"arms", {"none", "randomCircularRotation", "randomResizedCrop"}},
        {"runs", 2},
        {"epochs", 3},
        {"lr", 1e-3},
        {"batch", 16}}}};
  write_text(dir / "config.json", config.dump(2) + "\n");
  fmt::print(log, "wrote synthetic dataset, logs and config.json under {}\n", dir.string());
}

namespace {

RunConfig load_config(const std::string& path, std::optional<std::uint64_t> seed) {
  RunConfig cfg = path.empty() ? RunConfig{} : RunConfig::load(path);
  cfg.resolve_seed(seed);
  return cfg;
}

fs::path out_dir(const std::string& flag, const RunConfig& cfg, const char* sub) {
  return flag.empty() ? cfg.output_dir / sub : fs::path(flag);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"WiFi CSI spectrogram augmentation toolkit", "csiaug"};
  app.require_subcommand(1);

  std::string config_path, out_flag, format = "md", ops;
  std::optional<std::uint64_t> seed;
  std::size_t jobs = 1;
  std::uint64_t epoch = 0;
  bool draw_log = false, preview = false;
  std::vector<std::string> paths;

  auto* ingest = app.add_subcommand("ingest", "CSI logs -> spectrogram files + manifest");
  ingest->add_option("--config", config_path, "run configuration (JSON)")->required();
  ingest->add_option("--seed", seed, "override the configured seed");
  ingest->add_option("--out", out_flag, "output directory (default <output_dir>/spectrograms)");
  ingest->add_option("logs", paths, "extra unlabeled logs");

  auto* augment = app.add_subcommand("augment", "augment spectrogram files");
  augment->add_option("--config", config_path, "run configuration holding the pipeline");
  augment->add_option("--ops", ops, "comma-separated operators, overrides the configured pipeline");
  augment->add_option("--seed", seed, "global augmentation seed");
  augment->add_option("--epoch", epoch, "epoch component of every sample key");
  augment->add_option("--out", out_flag, "output directory (default <output_dir>/augmented)");
  augment->add_flag("--draw-log", draw_log, "write draws.json with every sampled parameter");
  augment->add_flag("--preview", preview, "write a before/after PNG next to each output");
  augment->add_option("inputs", paths, "spectrogram files")->required();

  auto* prev = app.add_subcommand("preview", "render a spectrogram file as a grayscale PNG");
  prev->add_option("files", paths, "INPUT.csis OUTPUT.png")->required()->expected(2);

  auto* ablate = app.add_subcommand("ablate", "run an augmentation ablation");
  ablate->add_option("--config", config_path, "run configuration")->required();
  ablate->add_option("--seed", seed, "override the configured seed");
  ablate->add_option("--out", out_flag, "output directory (default <output_dir>/ablation)");
  ablate->add_option("--jobs", jobs, "parallel training runs")->check(CLI::PositiveNumber);
  ablate->add_option("--format", format, "report printed to stdout")->check(CLI::IsMember({"md", "csv", "json"}));

  auto* verify = app.add_subcommand("verify", "check manifests: files, digests, class counts");
  verify->add_option("--config", config_path, "verify every dataset of this configuration");
  verify->add_option("manifests", paths, "manifest files");

  auto* synth = app.add_subcommand("synth", "write a synthetic dataset, logs and config");
  synth->add_option("--seed", seed, "generator seed")->required();
  synth->add_option("--out", out_flag, "target directory")->required();

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : usage_failure;
  }

  try {
    if (ingest->parsed()) {
      const auto cfg = load_config(config_path, seed);
      cfg.validate_paths();
      IngestOptions o{out_dir(out_flag, cfg, "spectrograms"), {paths.begin(), paths.end()}};
      cmd_ingest(cfg, o, err);
    } else if (augment->parsed()) {
      auto cfg = load_config(config_path, seed);
      if (!ops.empty()) {
        PipelineSpec p;
        p.global_seed = cfg.pipeline.global_seed;
        std::stringstream ss(ops);
        for (std::string name; std::getline(ss, name, ',');) {
          const auto kind = parse_augment_kind(name);
          if (!kind) fail(ErrorKind::schema, fmt::format("--ops: unknown operator '{}'", name));
          p.operators.push_back(AugmentationSpec{*kind, 0.5, std::nullopt, std::nullopt});
        }
        cfg.pipeline = p;
      }
      AugmentOptions o{out_dir(out_flag, cfg, "augmented"), epoch, draw_log, preview};
      cmd_augment({paths.begin(), paths.end()}, cfg.pipeline, o, err);
    } else if (prev->parsed()) {
      cmd_preview(paths[0], paths[1]);
    } else if (ablate->parsed()) {
      const auto cfg = load_config(config_path, seed);
      const auto failed = cmd_ablate(cfg, {out_dir(out_flag, cfg, "ablation"), jobs, format}, out, err);
      if (failed > 0) {
        fmt::print(err, "error: {} training runs failed\n", failed);
        return runtime_failure;
      }
    } else if (verify->parsed()) {
      std::vector<fs::path> manifests(paths.begin(), paths.end());
      if (!config_path.empty()) {
        const auto cfg = RunConfig::load(config_path);
        for (const auto& [_, p] : cfg.datasets) manifests.push_back(p);
      }
      if (manifests.empty()) fail(ErrorKind::schema, "verify: no manifests given");
      if (!cmd_verify(manifests, out)) return format_failure;
    } else if (synth->parsed()) {
      cmd_synth(out_flag, *seed, err);
    }
  } catch (const Error& e) {
    fmt::print(err, "error: {}\n", e.what());
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return runtime_failure;
  }
  return ok;
}

}  // namespace csiaug::cli
