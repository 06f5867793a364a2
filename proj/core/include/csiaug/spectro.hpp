#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "csiaug/spectrogram.hpp"

namespace csiaug {

/// Time-ordered per-packet amplitude vectors of identical length.
class AmplitudeSeries {
 public:
  explicit AmplitudeSeries(std::size_t channels, double rate_hz = 100.0);

  /// Appends one packet. Throws a parameter error on a length mismatch or a
  /// negative/non-finite value.
  void push_back(std::span<const double> row);

  std::size_t size() const noexcept { return channels_ ? data_.size() / channels_ : 0; }
  std::size_t channels() const noexcept { return channels_; }
  double rate_hz() const noexcept { return rate_hz_; }

  std::span<const double> row(std::size_t i) const noexcept {
    return {data_.data() + i * channels_, channels_};
  }
  std::span<const double> data() const noexcept { return data_; }

  friend bool operator==(const AmplitudeSeries&, const AmplitudeSeries&) = default;

 private:
  friend AmplitudeSeries trim(const AmplitudeSeries&, std::size_t, std::size_t);

  std::size_t channels_;
  double rate_hz_;
  std::vector<double> data_;
};

/// Rows [start, end). Throws a bounds error unless 0 <= start < end <= size.
AmplitudeSeries trim(const AmplitudeSeries& series, std::size_t start, std::size_t end);

/// Number of windows segment() emits for a series of `length` rows.
std::size_t segment_count(std::size_t length, std::size_t window, std::size_t hop) noexcept;

/// Cuts the series into window-row spectrograms starting every `hop` rows.
/// The trailing remainder shorter than a window is dropped.
std::vector<Spectrogram> segment(const AmplitudeSeries& series, std::size_t window = kDefaultWidth,
                                 std::size_t hop = kDefaultWidth);

}  // namespace csiaug
