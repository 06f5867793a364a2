#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace csiaug {

inline constexpr std::size_t kDefaultWidth = 400;   // packets per segment
inline constexpr std::size_t kDefaultHeight = 52;   // subcarriers per packet

/// Time x subcarrier amplitude matrix stored time-major: the `height` values
/// of time column t are contiguous at [t * height, (t + 1) * height).
class Spectrogram {
 public:
  Spectrogram() = default;
  Spectrogram(std::size_t width, std::size_t height, double fill = 0.0);
  Spectrogram(std::size_t width, std::size_t height, std::vector<double> values);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  bool empty() const noexcept { return values_.empty(); }

  double& at(std::size_t t, std::size_t k) noexcept { return values_[t * height_ + k]; }
  double at(std::size_t t, std::size_t k) const noexcept { return values_[t * height_ + k]; }

  std::span<double> column(std::size_t t) noexcept { return {values_.data() + t * height_, height_}; }
  std::span<const double> column(std::size_t t) const noexcept {
    return {values_.data() + t * height_, height_};
  }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  /// Time-mean of subcarrier row k.
  double row_mean(std::size_t k) const noexcept;

  /// True when every entry is finite and non-negative.
  bool is_valid_amplitude() const noexcept;

  friend bool operator==(const Spectrogram&, const Spectrogram&) = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<double> values_;
};

}  // namespace csiaug
