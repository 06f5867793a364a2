#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "csiaug/csi.hpp"
#include "csiaug/dataset.hpp"

namespace csiaug {

/// Packets of a 64-slot capture (FFT order, null DC and guard slots) whose
/// amplitudes move more for higher activity labels.
std::vector<CsiRecord> synthetic_csi_records(std::size_t packets, int label, std::uint64_t seed);

/// Writes a stand-in for the Wallhack1.8k release: one directory and
/// manifest.json per subset with exactly the published class counts.
/// Spectrograms are small (width x height) and class-dependent. Returns
/// subset name -> manifest path.
std::map<std::string, std::filesystem::path> write_synthetic_wallhack(const std::filesystem::path& dir,
                                                                      std::uint64_t seed, std::size_t width = 16,
                                                                      std::size_t height = 8);

/// Three classes, each a constant level on a different row band plus small
/// noise. Linearly separable.
std::vector<Sample> separable_blobs(std::size_t per_class, std::size_t width, std::size_t height,
                                    std::uint64_t seed);

/// Two bright row bands A (top) and B (bottom), each `blob` columns long.
/// Class 0 puts A directly before B in time, class 1 puts B directly before
/// A, class 2 keeps them half the width apart. The pattern is then rotated
/// circularly by `offset`, or by a uniform offset when `offset` is absent.
struct ShiftOracle {
  std::size_t width = 64;
  std::size_t height = 8;
  std::size_t blob = 12;
  double noise = 0.05;

  Spectrogram pattern(int label, std::size_t offset, RandomStream& stream) const;

  /// `per_class` samples of every class at a fixed circular offset.
  std::vector<Sample> fixed(std::size_t per_class, std::size_t offset, std::uint64_t seed) const;

  /// `per_class` samples of every class at uniformly random offsets.
  std::vector<Sample> shifted(std::size_t per_class, std::uint64_t seed) const;
};

}  // namespace csiaug
