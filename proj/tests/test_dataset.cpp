#include <fstream>
#include <numeric>

#include <gtest/gtest.h>

#include "csiaug/dataset.hpp"
#include "csiaug/digest.hpp"
#include "csiaug/error.hpp"
#include "csiaug/spectrogram_file.hpp"
#include "csiaug/synthetic.hpp"
#include "support.hpp"

using namespace csiaug;

TEST(PublishedCounts, SubsetTotals) {
  ASSERT_EQ(kWallhackSubsets.size(), 4u);
  std::size_t total = 0;
  const std::size_t expected[] = {458, 461, 450, 437};
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(kWallhackSubsets[i].total(), expected[i]);
    total += kWallhackSubsets[i].total();
  }
  EXPECT_EQ(total, 1806u);
  EXPECT_EQ(find_published_subset("W1.8k_NB")->rooms, 5);
  EXPECT_EQ(find_published_subset("W1.8k_XX"), nullptr);
}

TEST(Digest, KnownVector) {
  const std::string abc = "abc";
  const std::vector<std::uint8_t> bytes(abc.begin(), abc.end());
  EXPECT_EQ(sha256_digest(bytes), "sha256:ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Manifest, JsonRoundTripAndSchemaErrors) {
  csiaug::test::TempDir dir("manifest");
  SubsetManifest m;
  m.subset = "demo";
  m.files.push_back({"a.csis", 1, Scenario::NLOS, System::PIFA, 3, "sha256:00"});
  m.counts = m.tally();
  m.save(dir / "m.json");
  const auto back = SubsetManifest::load(dir / "m.json");
  EXPECT_EQ(back.subset, "demo");
  ASSERT_EQ(back.files.size(), 1u);
  EXPECT_EQ(back.files[0].zone, 3);
  EXPECT_EQ(back.files[0].system, System::PIFA);
  EXPECT_EQ(back.counts, (ClassCounts{0, 1, 0}));

  std::ofstream(dir / "bad.json") << R"({"subset": 3, "files": [{"path": "x", "label": 7}]})";
  try {
    SubsetManifest::load(dir / "bad.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::schema);
    const std::string what = e.what();
    EXPECT_NE(what.find("manifest.subset"), std::string::npos) << what;
    EXPECT_NE(what.find("manifest.counts"), std::string::npos) << what;
    EXPECT_NE(what.find("files[0].label"), std::string::npos) << what;
  }
}

TEST(Verify, SyntheticReleaseMatchesPublishedCounts) {
  csiaug::test::TempDir dir("verify_synth");
  const auto manifests = write_synthetic_wallhack(dir.path(), 1, 8, 8);
  ASSERT_EQ(manifests.size(), 4u);
  for (const auto& [name, path] : manifests) {
    const auto r = verify_manifest(SubsetManifest::load(path), path.parent_path());
    EXPECT_TRUE(r.passed) << r.to_text();
    ASSERT_TRUE(r.matches_published);
    EXPECT_TRUE(*r.matches_published);
    EXPECT_EQ(r.counted, find_published_subset(name)->class_counts);
  }
}

TEST(Verify, DetectsMissingCorruptAndMiscountedFiles) {
  csiaug::test::TempDir dir("verify_bad");
  SubsetManifest m;
  m.subset = "local";
  for (int i = 0; i < 3; ++i) {
    const auto bytes = encode_spectrogram({Spectrogram(8, 8, 1.0 + i), static_cast<std::int8_t>(i)});
    const auto name = "f" + std::to_string(i) + ".csis";
    write_file_bytes(dir / name, bytes);
    m.files.push_back({name, i, Scenario::LOS, System::BQ, std::nullopt, sha256_digest(bytes)});
  }
  m.counts = m.tally();
  EXPECT_TRUE(verify_manifest(m, dir.path()).passed);
  EXPECT_FALSE(verify_manifest(m, dir.path()).matches_published);

  auto miscount = m;
  miscount.counts[0] = 2;
  EXPECT_FALSE(verify_manifest(miscount, dir.path()).passed);

  auto renamed = m;
  renamed.subset = "W1.8k_LB";  // a known subset with the wrong counts
  const auto r = verify_manifest(renamed, dir.path());
  EXPECT_FALSE(r.passed);
  EXPECT_FALSE(*r.matches_published);

  std::filesystem::remove(dir / "f1.csis");
  auto bytes = read_file_bytes(dir / "f2.csis");
  bytes.back() ^= 1;
  write_file_bytes(dir / "f2.csis", bytes);
  const auto bad = verify_manifest(m, dir.path());
  EXPECT_FALSE(bad.passed);
  EXPECT_EQ(bad.missing, std::vector<std::string>{"f1.csis"});
  EXPECT_EQ(bad.digest_mismatches, std::vector<std::string>{"f2.csis"});
  EXPECT_THROW(load_samples(m, dir.path()), Error);
}

TEST(Split, StratifiedCeilTowardTrainAndSorted) {
  std::vector<int> labels;
  for (int c = 0; c < 3; ++c) labels.insert(labels.end(), static_cast<std::size_t>(10 + 3 * c), c);  // 10, 13, 16
  SplitSpec spec;
  spec.seed = 5;
  const auto s = split_indices(labels, spec);
  // ceil(0.8 * 10) = 8, ceil(0.8 * 13) = 11, ceil(0.8 * 16) = 13
  EXPECT_EQ(s.train.size(), 8u + 11u + 13u);
  EXPECT_EQ(s.validation.size(), 2u + 2u + 3u);
  EXPECT_TRUE(std::is_sorted(s.train.begin(), s.train.end()));
  std::vector<std::size_t> all = s.train;
  all.insert(all.end(), s.validation.begin(), s.validation.end());
  std::sort(all.begin(), all.end());
  std::vector<std::size_t> expect(labels.size());
  std::iota(expect.begin(), expect.end(), 0u);
  EXPECT_EQ(all, expect);
  EXPECT_EQ(split_indices(labels, spec).train, s.train);
  spec.seed = 6;
  EXPECT_NE(split_indices(labels, spec).train, s.train);
}

TEST(Split, Errors) {
  std::vector<int> labels{0, 0, 1, 1};
  SplitSpec spec;
  EXPECT_THROW(split_indices(labels, spec), Error);  // class 2 empty
  spec.stratified = false;
  EXPECT_EQ(split_indices(labels, spec).train.size(), 4u);  // ceil(3.2)
  spec.train_fraction = 1.0;
  EXPECT_THROW(split_indices(labels, spec), Error);
  std::vector<int> bad{0, 1, 5};
  EXPECT_THROW(split_indices(bad, SplitSpec{}), Error);
}

TEST(Sampler, EpochShapeAndClassUniformity) {
  std::vector<int> labels;
  labels.insert(labels.end(), 100, 0);
  labels.insert(labels.end(), 10, 1);
  labels.insert(labels.end(), 10, 2);
  BalancedBatchSampler sampler(labels, 16, RandomStream(1));
  EXPECT_EQ(sampler.batches_per_epoch(), 8u);  // ceil(120 / 16)
  std::size_t draws = 0, batches = 0;
  std::array<std::size_t, 3> per_class{};
  for (auto b = sampler.next(); !b.empty(); b = sampler.next()) {
    ++batches;
    draws += b.size();
    for (auto i : b) ++per_class[static_cast<std::size_t>(labels[i])];
  }
  EXPECT_EQ(batches, 8u);
  EXPECT_EQ(draws, 120u);
  for (auto c : per_class) EXPECT_GT(c, 15u);
  std::vector<int> missing{0, 0, 1};
  EXPECT_THROW(BalancedBatchSampler(missing, 4, RandomStream(1)), Error);
  EXPECT_THROW(BalancedBatchSampler(labels, 0, RandomStream(1)), Error);
}
