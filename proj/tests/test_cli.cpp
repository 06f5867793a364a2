#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "csiaug/preview.hpp"
#include "csiaug/report.hpp"
#include "csiaug/spectrogram_file.hpp"
#include "csiaug/synthetic.hpp"
#include "csiaug_cli.hpp"
#include "support.hpp"

using namespace csiaug;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

void write_log(const fs::path& path, std::size_t packets, int label) {
  std::ofstream f(path);
  for (const auto& r : synthetic_csi_records(packets, label, 5)) f << format_csi_line(r, ColumnMapping{}) << '\n';
}

void write_json(const fs::path& path, const json& j) { std::ofstream(path) << j.dump(2); }

std::vector<std::uint8_t> payload(const fs::path& p) {
  const auto bytes = read_file_bytes(p);
  return {bytes.begin() + static_cast<std::ptrdiff_t>(kSpectrogramHeaderSize), bytes.end()};
}

}  // namespace

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run_cli({}).code, cli::usage_failure);
  EXPECT_EQ(run_cli({"frobnicate"}).code, cli::usage_failure);
  EXPECT_EQ(run_cli({"ablate", "--config", "x.json", "--format", "pdf"}).code, cli::usage_failure);
  EXPECT_EQ(run_cli({"--help"}).code, cli::ok);
}

TEST(Cli, IngestSegmentsAndReportsErrors) {
  csiaug::test::TempDir dir("cli_ingest");
  write_log(dir / "walk.csv", 850, 1);
  std::ofstream(dir / "empty.csv").close();
  write_json(dir / "c.json", {{"seed", 1}, {"ingest", {{"logs", {{{"path", "walk.csv"}, {"label", 1}},
                                                                   {{"path", "empty.csv"}, {"label", 0}}}}}}});
  auto r = run_cli({"ingest", "--config", (dir / "c.json").string(), "--out", (dir / "o").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("warning"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "o/walk_000.csis"));
  EXPECT_TRUE(fs::exists(dir / "o/walk_001.csis"));
  EXPECT_FALSE(fs::exists(dir / "o/walk_002.csis"));
  const auto m = SubsetManifest::load(dir / "o/manifest.json");
  EXPECT_EQ(m.counts, (ClassCounts{0, 2, 0}));
  const auto file = read_spectrogram(dir / "o/walk_000.csis");
  EXPECT_EQ(file.spectrogram.width(), 400u);
  EXPECT_EQ(file.spectrogram.height(), 52u);
  EXPECT_EQ(file.label, 1);

  {
    std::ofstream f(dir / "walk.csv", std::ios::app);
    f << "1,2,3,[1 2 x 4]\n";
  }
  r = run_cli({"ingest", "--config", (dir / "c.json").string(), "--out", (dir / "o2").string()});
  EXPECT_EQ(r.code, cli::parse_failure);
  EXPECT_NE(r.err.find("walk.csv:851"), std::string::npos) << r.err;
}

TEST(Cli, AugmentIdentityDeterminismAndCorruptInput) {
  csiaug::test::TempDir dir("cli_augment");
  std::vector<std::string> inputs;
  for (int i = 0; i < 3; ++i) {
    const auto p = dir / ("s" + std::to_string(i) + ".csis");
    auto x = csiaug::test::random_spectrogram(40, 6, static_cast<std::uint64_t>(i), 0.5, 3.0);
    write_spectrogram(p, {x, static_cast<std::int8_t>(i)});
    inputs.push_back(p.string());
  }
  auto args = [&](std::vector<std::string> head) {
    head.insert(head.end(), inputs.begin(), inputs.end());
    return head;
  };
  auto r = run_cli(args({"augment", "--seed", "3", "--out", (dir / "id").string()}));
  ASSERT_EQ(r.code, 0) << r.err;
  for (const auto& in : inputs) EXPECT_EQ(payload(in), payload(dir / "id" / fs::path(in).filename()));

  const std::vector<std::string> ops{"--ops", "circular_rotation,resized_crop,amplitude,contrast", "--seed", "3",
                                     "--draw-log", "--preview"};
  auto a = ops, b = ops;
  a.insert(a.begin(), "augment");
  b.insert(b.begin(), "augment");
  a.insert(a.end(), {"--out", (dir / "a").string()});
  b.insert(b.end(), {"--out", (dir / "b").string()});
  ASSERT_EQ(run_cli(args(a)).code, 0);
  ASSERT_EQ(run_cli(args(b)).code, 0);
  for (const auto& in : inputs) {
    const auto name = fs::path(in).filename();
    EXPECT_EQ(read_file_bytes(dir / "a" / name), read_file_bytes(dir / "b" / name));
    EXPECT_EQ(read_spectrogram(dir / "a" / name).label, read_spectrogram(in).label);
    auto png = dir / "a" / name;
    png.replace_extension(".png");
    EXPECT_EQ(read_png(png).width, 2u * 40 + 2);
  }
  const auto draws = json::parse(std::ifstream(dir / "a/draws.json"));
  ASSERT_EQ(draws.size(), 3u);
  EXPECT_EQ(draws[2]["index"], 2);
  EXPECT_EQ(draws[0]["draws"].size(), 4u);

  auto bytes = read_file_bytes(inputs[1]);
  bytes.resize(bytes.size() - 3);
  write_file_bytes(inputs[1], bytes);
  r = run_cli(args({"augment", "--seed", "3", "--out", (dir / "c").string()}));
  EXPECT_EQ(r.code, cli::format_failure);
  EXPECT_NE(r.err.find("s1.csis"), std::string::npos) << r.err;

  r = run_cli({"augment", "--out", (dir / "d").string(), inputs[0]});
  EXPECT_EQ(r.code, cli::schema_failure);  // no seed anywhere
}

TEST(Cli, PreviewKeepsDimensions) {
  csiaug::test::TempDir dir("cli_preview");
  write_spectrogram(dir / "x.csis", {csiaug::test::random_spectrogram(400, 52, 1), -1});
  ASSERT_EQ(run_cli({"preview", (dir / "x.csis").string(), (dir / "x.png").string()}).code, 0);
  const auto img = read_png(dir / "x.png");
  EXPECT_EQ(img.width, 400u);
  EXPECT_EQ(img.height, 52u);
  EXPECT_EQ(run_cli({"preview", (dir / "x.csis").string(), "/nonexistent/x.png"}).code, cli::runtime_failure);
}

TEST(Cli, VerifyAndAblate) {
  csiaug::test::TempDir dir("cli_ablate");
  const auto manifests = write_synthetic_wallhack(dir.path(), 4, 8, 8);
  auto r = run_cli({"verify", manifests.at("W1.8k_LB").string(), manifests.at("W1.8k_NP").string()});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("total: 437"), std::string::npos);

  json cfg = {{"seed", 8},
              {"datasets", {{"LB", manifests.at("W1.8k_LB").string()}, {"NB", manifests.at("W1.8k_NB").string()}}},
              {"experiment",
               {{"train_subset", "LB"},
                {"eval_subsets", {"NB"}},
                {"arms", {"none"}},
                {"runs", 2},
                {"epochs", 1},
                {"lr", 1e-3},
                {"classifier", {{"channels", {4, 4, 4}}}}}}};
  write_json(dir / "c.json", cfg);
  r = run_cli({"ablate", "--config", (dir / "c.json").string(), "--out", (dir / "o").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("| none |"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "o/summary.json"));
  EXPECT_TRUE(fs::exists(dir / "o/checkpoints/none/run_01.ckpt"));
  const auto csv = read_file_bytes(dir / "o/report.csv");
  const auto rows = parse_report_csv(std::string(csv.begin(), csv.end()));
  EXPECT_EQ(rows.at(0).stats.at("NB").delta, 0.0);

  auto again = run_cli({"ablate", "--config", (dir / "c.json").string(), "--out", (dir / "o2").string(), "--format", "csv"});
  ASSERT_EQ(again.code, 0);
  EXPECT_EQ(read_file_bytes(dir / "o/report.csv"), read_file_bytes(dir / "o2/report.csv"));
  EXPECT_EQ(read_file_bytes(dir / "o/summary.json"), read_file_bytes(dir / "o2/summary.json"));

  cfg["datasets"]["NB"] = (dir / "nope.json").string();
  write_json(dir / "bad.json", cfg);
  r = run_cli({"ablate", "--config", (dir / "bad.json").string()});
  EXPECT_EQ(r.code, cli::schema_failure);
  EXPECT_NE(r.err.find("datasets.NB"), std::string::npos) << r.err;

  cfg["experiment"]["runs"] = 0;
  write_json(dir / "bad2.json", cfg);
  EXPECT_EQ(run_cli({"ablate", "--config", (dir / "bad2.json").string()}).code, cli::schema_failure);

  // Corrupt one file: verification fails with a format exit code.
  const auto lb_dir = manifests.at("W1.8k_LB").parent_path();
  auto bytes = read_file_bytes(lb_dir / "c0_0000.csis");
  bytes[30] ^= 0x10;
  write_file_bytes(lb_dir / "c0_0000.csis", bytes);
  r = run_cli({"verify", manifests.at("W1.8k_LB").string()});
  EXPECT_EQ(r.code, cli::format_failure);
  EXPECT_NE(r.out.find("corrupt: c0_0000.csis"), std::string::npos);
}

TEST(Cli, ExitCodeClasses) {
  EXPECT_EQ(cli::exit_code(ErrorKind::parse), 2);
  EXPECT_EQ(cli::exit_code(ErrorKind::format), 3);
  EXPECT_EQ(cli::exit_code(ErrorKind::schema), 4);
  EXPECT_EQ(cli::exit_code(ErrorKind::runtime), 5);
}
