#include <fstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "csiaug/config.hpp"
#include "csiaug/error.hpp"
#include "support.hpp"

using namespace csiaug;
using nlohmann::json;

namespace {

std::string schema_message(const json& j) {
  try {
    RunConfig::from_json(j, "/base");
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::schema);
    return e.what();
  }
  ADD_FAILURE() << "config accepted: " << j.dump();
  return {};
}

}  // namespace

TEST(Config, ParsesFullDocument) {
  const json j = json::parse(R"({
    "seed": 9,
    "output_dir": "results",
    "ingest": {
      "mapping": {"delimiter": ";", "header": true, "columns": {"seq": "id", "timestamp": 2, "rssi": null, "csi": "data"},
                  "iq_order": "real_imag"},
      "selection": "lltf52_centered",
      "window": 200, "hop": 100, "subset": "mine", "scenario": "NLOS", "system": "PIFA",
      "logs": [{"path": "a.csv", "label": 2, "zone": 3, "trim": [10, 500]}, {"path": "b.csv", "system": "BQ"}]
    },
    "pipeline": {"operators": ["randomCircularRotation", {"kind": "amplitude", "gate_p": 1.0, "lo": 0.9, "hi": 1.1}],
                 "channel_mode": "whole_image", "compress_mode": "resample"},
    "datasets": {"train": "d/train.json"},
    "experiment": {"train_subset": "train", "eval_subsets": ["train"], "arms": ["none", {"name": "amp",
                   "pipeline": {"operators": ["amplitude"]}}], "runs": 3, "epochs": 4, "lr": 0.001, "batch": 8,
                   "classifier": {"channels": [4, 8, 16], "normalization": "peak"},
                   "split": {"train_fraction": 0.75, "seed": 3}}
  })");
  auto cfg = RunConfig::from_json(j, "/base");
  EXPECT_EQ(cfg.output_dir, std::filesystem::path("/base/results"));
  EXPECT_EQ(cfg.ingest.mapping.delimiter, ';');
  EXPECT_EQ(cfg.ingest.mapping.column_names.seq, "id");
  EXPECT_EQ(cfg.ingest.mapping.timestamp, 2u);
  EXPECT_FALSE(cfg.ingest.mapping.rssi);
  EXPECT_EQ(cfg.ingest.mapping.order, IqOrder::real_imag);
  EXPECT_EQ(cfg.ingest.selection.name, "lltf52_centered");
  EXPECT_EQ(cfg.ingest.window, 200u);
  ASSERT_EQ(cfg.ingest.logs.size(), 2u);
  EXPECT_EQ(cfg.ingest.logs[0].path, std::filesystem::path("/base/a.csv"));
  EXPECT_EQ(cfg.ingest.logs[0].scenario, Scenario::NLOS);
  EXPECT_EQ(cfg.ingest.logs[0].zone, 3);
  EXPECT_EQ(cfg.ingest.logs[0].trim, (std::pair<std::size_t, std::size_t>{10, 500}));
  EXPECT_EQ(cfg.ingest.logs[1].system, System::BQ);
  EXPECT_EQ(cfg.ingest.logs[1].label, -1);
  ASSERT_EQ(cfg.pipeline.operators.size(), 2u);
  EXPECT_EQ(cfg.pipeline.operators[1].param_hi, 1.1);
  EXPECT_EQ(cfg.pipeline.channel_mode, ChannelMode::whole_image);
  ASSERT_TRUE(cfg.experiment);
  EXPECT_EQ(cfg.experiment->arms[1].pipeline.operators[0].kind, AugmentKind::amplitude);
  EXPECT_EQ(cfg.experiment->classifier.channels[2], 16u);
  EXPECT_EQ(cfg.experiment->split.train_fraction, 0.75);

  cfg.resolve_seed(std::nullopt);
  EXPECT_EQ(cfg.pipeline.global_seed, 9u);
  EXPECT_EQ(cfg.experiment->seed, 9u);
  EXPECT_EQ(cfg.experiment->split.seed, 3u);
  cfg.resolve_seed(21);
  EXPECT_EQ(cfg.pipeline.global_seed, 21u);
}

TEST(Config, ExplicitSectionSeedsWin) {
  auto cfg = RunConfig::from_json(json::parse(R"({"seed": 1, "pipeline": {"seed": 5}})"), ".");
  cfg.resolve_seed(2);
  EXPECT_EQ(cfg.pipeline.global_seed, 5u);
}

TEST(Config, MissingSeedIsSchemaError) {
  auto cfg = RunConfig::from_json(json::object(), ".");
  try {
    cfg.resolve_seed(std::nullopt);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::schema);
  }
}

TEST(Config, ReportsEveryOffendingField) {
  const auto msg = schema_message(json::parse(R"({
    "seed": -1, "colour": 1,
    "pipeline": {"operators": [{"kind": "flip"}, {"kind": "amplitude", "gate_p": 2}]},
    "ingest": {"window": 0, "logs": [{"label": 9}]},
    "experiment": {"eval_subsets": [], "arms": ["none"]}
  })"));
  for (const char* field : {"config.seed", "config.colour", "operators[0].kind", "operators[1].gate_p", "ingest.window",
                            "logs[0].path", "logs[0].label", "experiment.train_subset", "experiment.eval_subsets"}) {
    EXPECT_NE(msg.find(field), std::string::npos) << field << " not in:\n" << msg;
  }
}

TEST(Config, PathValidation) {
  csiaug::test::TempDir dir("config_paths");
  std::ofstream(dir / "m.json") << "{}";
  const json j = json::parse(R"({"seed": 1, "datasets": {"a": "m.json", "b": "missing.json"},
    "experiment": {"train_subset": "a", "eval_subsets": ["c"], "arms": ["none"]}})");
  const auto cfg = RunConfig::from_json(j, dir.path());
  try {
    cfg.validate_paths();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::schema);
    const std::string what = e.what();
    EXPECT_NE(what.find("datasets.b"), std::string::npos);
    EXPECT_NE(what.find("\"c\""), std::string::npos);
    EXPECT_EQ(what.find("datasets.a"), std::string::npos);
  }
}

TEST(Config, PipelineJsonRoundTrip) {
  auto p = PipelineSpec::of({AugmentKind::resized_crop, AugmentKind::contrast}, 44);
  p.operators[1].param_lo = 0.5;
  p.compress_mode = CompressMode::resample;
  const auto back = pipeline_from_json(to_json(p));
  EXPECT_EQ(back.global_seed, 44u);
  EXPECT_EQ(back.operators[1].param_lo, 0.5);
  EXPECT_EQ(back.compress_mode, CompressMode::resample);
}
