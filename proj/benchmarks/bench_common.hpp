#pragma once

#include "csiaug/random.hpp"
#include "csiaug/spectrogram.hpp"

namespace csiaug::bench {

inline Spectrogram noise(std::size_t w = kDefaultWidth, std::size_t h = kDefaultHeight, std::uint64_t seed = 1) {
  RandomStream rng(seed);
  std::vector<double> v(w * h);
  for (auto& x : v) x = rng.uniform(0.0, 40.0);
  return Spectrogram(w, h, std::move(v));
}

}  // namespace csiaug::bench
