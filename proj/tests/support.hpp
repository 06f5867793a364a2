#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <string>

#include "csiaug/random.hpp"
#include "csiaug/spectrogram.hpp"

namespace csiaug::test {

inline Spectrogram random_spectrogram(std::size_t w, std::size_t h, std::uint64_t seed, double lo = 0.0,
                                      double hi = 10.0) {
  RandomStream rng(seed);
  Spectrogram x(w, h);
  for (double& v : x.values()) v = rng.uniform(lo, hi);
  return x;
}

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& name)
      : path_(std::filesystem::temp_directory_path() / ("csiaug_" + name)) {
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  std::filesystem::path path_;
};

/// Kolmogorov distribution tail P(K > lambda), with the finite-n
/// correction lambda = (sqrt(n) + 0.12 + 0.11 / sqrt(n)) * D.
inline double ks_pvalue(double d, std::size_t n) {
  const double rn = std::sqrt(static_cast<double>(n));
  const double lambda = (rn + 0.12 + 0.11 / rn) * d;
  if (lambda < 1e-3) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

}  // namespace csiaug::test
