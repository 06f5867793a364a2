#include "csiaug/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "csiaug/digest.hpp"
#include "csiaug/error.hpp"
#include "csiaug/spectrogram_file.hpp"

namespace csiaug {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view class_name(int label) noexcept {
  switch (label) {
    case 0: return "no presence";
    case 1: return "walking";
    case 2: return "walking + arm-waving";
    default: return "unlabeled";
  }
}

std::string_view to_string(Scenario s) noexcept { return s == Scenario::LOS ? "LOS" : "NLOS"; }
std::string_view to_string(System s) noexcept { return s == System::PIFA ? "PIFA" : "BQ"; }

std::optional<Scenario> parse_scenario(std::string_view s) noexcept {
  if (s == "LOS") return Scenario::LOS;
  if (s == "NLOS") return Scenario::NLOS;
  return std::nullopt;
}

std::optional<System> parse_system(std::string_view s) noexcept {
  if (s == "PIFA") return System::PIFA;
  if (s == "BQ") return System::BQ;
  return std::nullopt;
}

const PublishedSubset* find_published_subset(std::string_view name) noexcept {
  for (const auto& s : kWallhackSubsets) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

ClassCounts SubsetManifest::tally() const noexcept {
  ClassCounts c{};
  for (const auto& f : files) {
    if (f.label >= 0 && f.label < static_cast<int>(kNumClasses)) ++c[static_cast<std::size_t>(f.label)];
  }
  return c;
}

void to_json(json& j, const SubsetManifest& m) {
  json files = json::array();
  for (const auto& f : m.files) {
    files.push_back({{"path", f.path},
                     {"label", f.label},
                     {"scenario", to_string(f.scenario)},
                     {"system", to_string(f.system)},
                     {"zone", f.zone ? json(*f.zone) : json(nullptr)},
                     {"digest", f.digest}});
  }
  j = json{{"subset", m.subset}, {"files", std::move(files)}, {"counts", m.counts}};
}

void from_json(const json& j, SubsetManifest& m) {
  std::vector<std::string> problems;
  auto require = [&](const json& obj, const char* key, json::value_t type, const std::string& where) -> bool {
    if (!obj.contains(key)) {
      problems.push_back(fmt::format("{}.{}: missing", where, key));
      return false;
    }
    const auto t = obj.at(key).type();
    const bool ok = t == type || (type == json::value_t::number_integer && t == json::value_t::number_unsigned);
    if (!ok) problems.push_back(fmt::format("{}.{}: wrong type", where, key));
    return ok;
  };

  if (!j.is_object()) fail(ErrorKind::schema, "manifest: top level is not an object");
  m = SubsetManifest{};
  if (require(j, "subset", json::value_t::string, "manifest")) m.subset = j["subset"].get<std::string>();
  if (require(j, "counts", json::value_t::array, "manifest")) {
    const auto& c = j["counts"];
    if (c.size() != kNumClasses || !std::all_of(c.begin(), c.end(), [](const json& v) { return v.is_number_unsigned(); })) {
      problems.push_back("manifest.counts: expected 3 non-negative integers");
    } else {
      for (std::size_t i = 0; i < kNumClasses; ++i) m.counts[i] = c[i].get<std::size_t>();
    }
  }
  if (require(j, "files", json::value_t::array, "manifest")) {
    std::size_t idx = 0;
    for (const auto& f : j["files"]) {
      const auto where = fmt::format("manifest.files[{}]", idx++);
      if (!f.is_object()) {
        problems.push_back(where + ": not an object");
        continue;
      }
      ManifestEntry e;
      if (require(f, "path", json::value_t::string, where)) e.path = f["path"].get<std::string>();
      if (require(f, "label", json::value_t::number_integer, where)) {
        e.label = f["label"].get<int>();
        if (e.label < 0 || e.label >= static_cast<int>(kNumClasses)) problems.push_back(where + ".label: not in {0,1,2}");
      }
      if (require(f, "scenario", json::value_t::string, where)) {
        if (auto s = parse_scenario(f["scenario"].get<std::string>())) e.scenario = *s;
        else problems.push_back(where + ".scenario: expected LOS or NLOS");
      }
      if (require(f, "system", json::value_t::string, where)) {
        if (auto s = parse_system(f["system"].get<std::string>())) e.system = *s;
        else problems.push_back(where + ".system: expected PIFA or BQ");
      }
      if (f.contains("zone") && !f["zone"].is_null()) {
        if (!f["zone"].is_number_integer() || f["zone"].get<int>() < 1 || f["zone"].get<int>() > 5) {
          problems.push_back(where + ".zone: expected integer 1..5 or null");
        } else {
          e.zone = f["zone"].get<int>();
        }
      }
      if (require(f, "digest", json::value_t::string, where)) e.digest = f["digest"].get<std::string>();
      m.files.push_back(std::move(e));
    }
  }
  if (!problems.empty()) {
    std::string msg = "manifest does not validate:";
    for (const auto& p : problems) msg += "\n  " + p;
    fail(ErrorKind::schema, msg);
  }
}

SubsetManifest SubsetManifest::load(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, fmt::format("cannot open manifest {}", path.string()));
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    fail(ErrorKind::schema, fmt::format("{}: invalid JSON: {}", path.string(), e.what()));
  }
  return j.get<SubsetManifest>();
}

void SubsetManifest::save(const fs::path& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail(ErrorKind::io, fmt::format("cannot write manifest {}", path.string()));
  out << json(*this).dump(2) << '\n';
}

VerificationReport verify_manifest(const SubsetManifest& manifest, const fs::path& base_dir) {
  VerificationReport r;
  r.subset = manifest.subset;
  r.manifest_counts = manifest.counts;
  for (const auto& f : manifest.files) {
    const auto path = base_dir / f.path;
    std::vector<std::uint8_t> bytes;
    try {
      bytes = read_file_bytes(path);
    } catch (const Error&) {
      r.missing.push_back(f.path);
      continue;
    }
    if (sha256_digest(bytes) != f.digest) {
      r.digest_mismatches.push_back(f.path);
      continue;
    }
    try {
      const auto file = decode_spectrogram(bytes, f.path);
      if (file.label != f.label) r.label_mismatches.push_back(f.path);
    } catch (const Error&) {
      r.digest_mismatches.push_back(f.path);
      continue;
    }
    ++r.counted[static_cast<std::size_t>(f.label)];
  }
  r.total = r.counted[0] + r.counted[1] + r.counted[2];
  if (const auto* published = find_published_subset(manifest.subset)) {
    r.matches_published = r.counted == published->class_counts;
  }
  r.passed = r.missing.empty() && r.digest_mismatches.empty() && r.label_mismatches.empty() &&
             r.counted == r.manifest_counts && r.matches_published.value_or(true);
  return r;
}

std::string VerificationReport::to_text() const {
  std::string out = fmt::format("subset {}: {}\n", subset, passed ? "OK" : "FAILED");
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    out += fmt::format("  class {} ({}): {} (manifest {})\n", c, class_name(static_cast<int>(c)), counted[c],
                       manifest_counts[c]);
  }
  out += fmt::format("  total: {}\n", total);
  if (matches_published) {
    out += fmt::format("  published counts: {}\n", *matches_published ? "match" : "MISMATCH");
  }
  for (const auto& m : missing) out += fmt::format("  missing: {}\n", m);
  for (const auto& m : digest_mismatches) out += fmt::format("  corrupt: {}\n", m);
  for (const auto& m : label_mismatches) out += fmt::format("  label mismatch: {}\n", m);
  return out;
}

std::vector<Sample> load_samples(const SubsetManifest& manifest, const fs::path& base_dir) {
  std::vector<Sample> out;
  out.reserve(manifest.files.size());
  for (const auto& f : manifest.files) {
    const auto bytes = read_file_bytes(base_dir / f.path);
    if (sha256_digest(bytes) != f.digest) {
      fail(ErrorKind::format, fmt::format("{}: digest does not match manifest", f.path));
    }
    auto file = decode_spectrogram(bytes, f.path);
    out.push_back(Sample{std::move(file.spectrogram), f.label, f.scenario, f.system, f.zone, f.path});
  }
  return out;
}

void SplitSpec::validate() const {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    fail(ErrorKind::split, fmt::format("train fraction {} outside (0, 1)", train_fraction));
  }
}

namespace {

// Fisher-Yates with the library stream so splits are platform independent.
void shuffle(std::vector<std::size_t>& v, RandomStream& stream) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(stream.below(i));
    std::swap(v[i - 1], v[j]);
  }
}

std::size_t train_share(std::size_t n, double fraction) {
  // Round toward train; the epsilon keeps exact products (0.8 * 10) exact.
  const double raw = fraction * static_cast<double>(n);
  return std::min(n, static_cast<std::size_t>(std::ceil(raw - 1e-9)));
}

}  // namespace

SplitIndices split_indices(std::span<const int> labels, const SplitSpec& spec) {
  spec.validate();
  std::vector<std::vector<std::size_t>> groups;
  if (spec.stratified) {
    groups.resize(kNumClasses);
    for (std::size_t i = 0; i < labels.size(); ++i) {
      const int l = labels[i];
      if (l < 0 || l >= static_cast<int>(kNumClasses)) {
        fail(ErrorKind::split, fmt::format("sample {} has label {} outside {{0,1,2}}", i, l));
      }
      groups[static_cast<std::size_t>(l)].push_back(i);
    }
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      if (groups[c].empty()) fail(ErrorKind::split, fmt::format("stratified split: class {} is empty", c));
    }
  } else {
    groups.emplace_back(labels.size());
    std::iota(groups[0].begin(), groups[0].end(), std::size_t{0});
  }

  SplitIndices out;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    RandomStream stream(derive_seed(spec.seed, {tag_key("split"), g}));
    auto& members = groups[g];
    shuffle(members, stream);
    const auto n_train = train_share(members.size(), spec.train_fraction);
    out.train.insert(out.train.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(n_train));
    out.validation.insert(out.validation.end(), members.begin() + static_cast<std::ptrdiff_t>(n_train), members.end());
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.validation.begin(), out.validation.end());
  return out;
}

std::pair<std::vector<Sample>, std::vector<Sample>> split(const std::vector<Sample>& samples,
                                                          const SplitSpec& spec) {
  std::vector<int> labels;
  labels.reserve(samples.size());
  for (const auto& s : samples) labels.push_back(s.label);
  const auto idx = split_indices(labels, spec);
  std::pair<std::vector<Sample>, std::vector<Sample>> out;
  for (auto i : idx.train) out.first.push_back(samples[i]);
  for (auto i : idx.validation) out.second.push_back(samples[i]);
  return out;
}

BalancedBatchSampler::BalancedBatchSampler(std::span<const int> labels, std::size_t batch, RandomStream stream)
    : total_(labels.size()), batch_(batch), stream_(stream) {
  if (batch == 0) fail(ErrorKind::sampler, "batch size must be >= 1");
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int l = labels[i];
    if (l < 0 || l >= static_cast<int>(kNumClasses)) {
      fail(ErrorKind::sampler, fmt::format("sample {} has label {} outside {{0,1,2}}", i, l));
    }
    members_[static_cast<std::size_t>(l)].push_back(i);
  }
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    if (members_[c].empty()) fail(ErrorKind::sampler, fmt::format("class {} has no samples", c));
  }
  batches_ = (total_ + batch_ - 1) / batch_;
}

std::size_t BalancedBatchSampler::draw() {
  const auto& cls = members_[stream_.below(kNumClasses)];
  return cls[stream_.below(cls.size())];
}

std::vector<std::size_t> BalancedBatchSampler::next() {
  std::vector<std::size_t> out;
  if (emitted_ >= total_) return out;
  const std::size_t n = std::min(batch_, total_ - emitted_);
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(draw());
  emitted_ += n;
  return out;
}

}  // namespace csiaug
