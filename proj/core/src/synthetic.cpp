#include "csiaug/synthetic.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "csiaug/augment.hpp"
#include "csiaug/digest.hpp"
#include "csiaug/error.hpp"
#include "csiaug/spectrogram_file.hpp"

namespace csiaug {

namespace fs = std::filesystem;

std::vector<CsiRecord> synthetic_csi_records(std::size_t packets, int label, std::uint64_t seed) {
  RandomStream rng(seed);
  const double depth = 0.15 * label;
  const double rate = 0.02 + 0.05 * label;
  std::vector<CsiRecord> out;
  out.reserve(packets);
  for (std::size_t p = 0; p < packets; ++p) {
    CsiRecord r;
    r.seq = static_cast<std::int64_t>(p);
    r.timestamp_ms = static_cast<std::int64_t>(10 * p);
    r.rssi_dbm = -40 - static_cast<std::int32_t>(rng.below(20));
    r.iq.resize(64);
    for (int s = -26; s <= 26; ++s) {
      if (s == 0) continue;
      const std::size_t slot = s >= 0 ? static_cast<std::size_t>(s) : static_cast<std::size_t>(64 + s);
      const double level = 20.0 + 5.0 * std::cos(0.1 * s) +
                           20.0 * depth * std::sin(2.0 * std::numbers::pi * rate * static_cast<double>(p) + 0.2 * s) +
                           rng.uniform(-1.0, 1.0);
      const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
      r.iq[slot].imag = static_cast<std::int32_t>(std::lround(level * std::sin(phase)));
      r.iq[slot].real = static_cast<std::int32_t>(std::lround(level * std::cos(phase)));
    }
    out.push_back(std::move(r));
  }
  return out;
}

namespace {

Spectrogram activity_spectrogram(std::size_t width, std::size_t height, int label, RandomStream& rng) {
  Spectrogram x(width, height);
  const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
  for (std::size_t t = 0; t < width; ++t) {
    for (std::size_t k = 0; k < height; ++k) {
      const double motion = 0.3 * label * std::sin(0.4 * (label + 1) * static_cast<double>(t) + phase + 0.3 * k);
      x.at(t, k) = std::max(0.0, 1.0 + motion + rng.uniform(-0.1, 0.1));
    }
  }
  return x;
}

}  // namespace

std::map<std::string, fs::path> write_synthetic_wallhack(const fs::path& dir, std::uint64_t seed, std::size_t width,
                                                         std::size_t height) {
  std::map<std::string, fs::path> manifests;
  for (const auto& published : kWallhackSubsets) {
    const std::string name(published.name);
    const fs::path subdir = dir / name;
    fs::create_directories(subdir);
    SubsetManifest m;
    m.subset = name;
    m.counts = published.class_counts;
    RandomStream rng(derive_seed(seed, {tag_key(name)}));
    for (int label = 0; label < static_cast<int>(kNumClasses); ++label) {
      for (std::size_t i = 0; i < published.class_counts[label]; ++i) {
        ManifestEntry e;
        e.path = fmt::format("c{}_{:04}.csis", label, i);
        e.label = label;
        e.scenario = published.scenario;
        e.system = published.system;
        if (published.rooms > 1) e.zone = static_cast<int>(1 + i % static_cast<std::size_t>(published.rooms));
        const auto bytes = encode_spectrogram({activity_spectrogram(width, height, label, rng), static_cast<std::int8_t>(label)});
        write_file_bytes(subdir / e.path, bytes);
        e.digest = sha256_digest(bytes);
        m.files.push_back(std::move(e));
      }
    }
    m.save(subdir / "manifest.json");
    manifests[name] = subdir / "manifest.json";
  }
  return manifests;
}

std::vector<Sample> separable_blobs(std::size_t per_class, std::size_t width, std::size_t height,
                                    std::uint64_t seed) {
  if (height < kNumClasses) fail(ErrorKind::parameter, "separable_blobs: height must be >= 3");
  RandomStream rng(seed);
  std::vector<Sample> out;
  const std::size_t band = height / kNumClasses;
  for (int label = 0; label < static_cast<int>(kNumClasses); ++label) {
    for (std::size_t i = 0; i < per_class; ++i) {
      Spectrogram x(width, height);
      for (std::size_t t = 0; t < width; ++t) {
        for (std::size_t k = 0; k < height; ++k) {
          const bool lit = k / band == static_cast<std::size_t>(label);
          x.at(t, k) = (lit ? 1.0 : 0.2) + rng.uniform(0.0, 0.1);
        }
      }
      out.push_back(Sample{std::move(x), label, Scenario::LOS, System::BQ, std::nullopt, fmt::format("blob{}_{}", label, i)});
    }
  }
  return out;
}

Spectrogram ShiftOracle::pattern(int label, std::size_t offset, RandomStream& rng) const {
  if (width < 4 * blob || height < 4) fail(ErrorKind::parameter, "ShiftOracle: needs width >= 4 * blob and height >= 4");
  Spectrogram x(width, height);
  for (double& v : x.values()) v = 0.1 + rng.uniform(0.0, noise);
  const std::size_t band = height * 3 / 8;
  auto paint = [&](bool top, std::size_t start) {
    for (std::size_t t = start; t < start + blob; ++t) {
      for (std::size_t k = 0; k < band; ++k) x.at((t + offset) % width, top ? k : height - 1 - k) += 1.0;
    }
  };
  switch (label) {
    case 0: paint(true, 0); paint(false, blob); break;
    case 1: paint(false, 0); paint(true, blob); break;
    case 2: paint(true, 0); paint(false, width / 2); break;
    default: fail(ErrorKind::parameter, "ShiftOracle: label must be 0, 1 or 2");
  }
  return x;
}

std::vector<Sample> ShiftOracle::fixed(std::size_t per_class, std::size_t offset, std::uint64_t seed) const {
  RandomStream rng(seed);
  std::vector<Sample> out;
  for (int label = 0; label < static_cast<int>(kNumClasses); ++label) {
    for (std::size_t i = 0; i < per_class; ++i) {
      out.push_back(Sample{pattern(label, offset, rng), label, Scenario::LOS, System::BQ, std::nullopt,
                           fmt::format("fixed{}_{}", label, i)});
    }
  }
  return out;
}

std::vector<Sample> ShiftOracle::shifted(std::size_t per_class, std::uint64_t seed) const {
  RandomStream rng(seed);
  std::vector<Sample> out;
  for (int label = 0; label < static_cast<int>(kNumClasses); ++label) {
    for (std::size_t i = 0; i < per_class; ++i) {
      const std::size_t offset = rng.below(width);
      out.push_back(Sample{pattern(label, offset, rng), label, Scenario::LOS, System::BQ, std::nullopt,
                           fmt::format("shifted{}_{}", label, i)});
    }
  }
  return out;
}

}  // namespace csiaug
