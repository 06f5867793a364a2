#include "csiaug/spectro.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "csiaug/error.hpp"

namespace csiaug {

Spectrogram::Spectrogram(std::size_t width, std::size_t height, double fill)
    : width_(width), height_(height), values_(width * height, fill) {}

Spectrogram::Spectrogram(std::size_t width, std::size_t height, std::vector<double> values)
    : width_(width), height_(height), values_(std::move(values)) {
  if (values_.size() != width_ * height_) {
    fail(ErrorKind::parameter, fmt::format("spectrogram {}x{} needs {} values, got {}", width_,
                                           height_, width_ * height_, values_.size()));
  }
}

double Spectrogram::row_mean(std::size_t k) const noexcept {
  double sum = 0.0;
  for (std::size_t t = 0; t < width_; ++t) sum += at(t, k);
  return width_ ? sum / static_cast<double>(width_) : 0.0;
}

bool Spectrogram::is_valid_amplitude() const noexcept {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return std::isfinite(v) && v >= 0.0; });
}

AmplitudeSeries::AmplitudeSeries(std::size_t channels, double rate_hz)
    : channels_(channels), rate_hz_(rate_hz) {
  if (channels == 0) fail(ErrorKind::parameter, "amplitude series needs at least one channel");
}

void AmplitudeSeries::push_back(std::span<const double> row) {
  if (row.size() != channels_) {
    fail(ErrorKind::parameter,
         fmt::format("amplitude row has {} values, series has {} channels", row.size(), channels_));
  }
  for (double v : row) {
    if (!std::isfinite(v) || v < 0.0) {
      fail(ErrorKind::parameter, fmt::format("amplitude value {} is not finite and non-negative", v));
    }
  }
  data_.insert(data_.end(), row.begin(), row.end());
}

AmplitudeSeries trim(const AmplitudeSeries& series, std::size_t start, std::size_t end) {
  if (!(start < end && end <= series.size())) {
    fail(ErrorKind::bounds,
         fmt::format("trim [{}, {}) invalid for series of {} rows", start, end, series.size()));
  }
  AmplitudeSeries out(series.channels(), series.rate_hz());
  const auto first = series.data_.begin() + static_cast<std::ptrdiff_t>(start * series.channels_);
  const auto last = series.data_.begin() + static_cast<std::ptrdiff_t>(end * series.channels_);
  out.data_.assign(first, last);
  return out;
}

std::size_t segment_count(std::size_t length, std::size_t window, std::size_t hop) noexcept {
  if (window == 0 || hop == 0 || length < window) return 0;
  return (length - window) / hop + 1;
}

std::vector<Spectrogram> segment(const AmplitudeSeries& series, std::size_t window, std::size_t hop) {
  if (window < 1 || hop < 1) {
    fail(ErrorKind::parameter, fmt::format("segment window {} and hop {} must be >= 1", window, hop));
  }
  const std::size_t n = segment_count(series.size(), window, hop);
  const std::size_t h = series.channels();
  std::vector<Spectrogram> out;
  out.reserve(n);
  const auto data = series.data();
  for (std::size_t s = 0; s < n; ++s) {
    const auto first = data.begin() + static_cast<std::ptrdiff_t>(s * hop * h);
    out.emplace_back(window, h, std::vector<double>(first, first + static_cast<std::ptrdiff_t>(window * h)));
  }
  return out;
}

}  // namespace csiaug
