#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <vector>

#include "csiaug/spectrogram.hpp"

namespace csiaug {

/// Anything that scores a spectrogram against the activity classes.
class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual std::vector<double> scores(const Spectrogram& x) const = 0;

  /// argmax of scores(); the lowest index wins ties.
  int predict(const Spectrogram& x) const;
};

/// A classifier the training harness can optimize.
class TrainableClassifier : public Classifier {
 public:
  /// Adds the cross-entropy gradient of one sample to the internal
  /// accumulator and returns its loss.
  virtual double accumulate_gradient(const Spectrogram& x, int label) = 0;

  /// One optimizer step on the mean of the accumulated gradients, then
  /// clears the accumulator.
  virtual void step(double learning_rate, std::size_t batch_size) = 0;

  virtual std::unique_ptr<TrainableClassifier> clone() const = 0;
  virtual void save(const std::filesystem::path& path) const = 0;
};

enum class InputNormalization {
  none,  // feed amplitudes as they are
  peak,  // divide each spectrogram by its maximum value
};

/// Compact reference CNN:
///   input 1 x h x w
///   3 x [conv 3x3 same-padding -> ReLU -> 2x2 average pool] (16/32/64 maps)
///   global average pool -> affine -> 3 class scores
/// trained with softmax cross-entropy and Adam.
struct ClassifierConfig {
  std::array<std::size_t, 3> channels{16, 32, 64};
  std::size_t classes = 3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  InputNormalization normalization = InputNormalization::none;

  void validate() const;
};

class ConvClassifier final : public TrainableClassifier {
 public:
  /// Requires width >= 8 and height >= 8 so three poolings leave >= 1 cell.
  ConvClassifier(const ClassifierConfig& config, std::size_t width, std::size_t height, std::uint64_t seed);

  std::vector<double> scores(const Spectrogram& x) const override;
  double accumulate_gradient(const Spectrogram& x, int label) override;
  void step(double learning_rate, std::size_t batch_size) override;
  std::unique_ptr<TrainableClassifier> clone() const override;
  void save(const std::filesystem::path& path) const override;

  static ConvClassifier load(const std::filesystem::path& path);

  /// Cross-entropy of one sample without touching the accumulator.
  double loss(const Spectrogram& x, int label) const;

  std::span<double> parameters() noexcept { return params_; }
  std::span<const double> parameters() const noexcept { return params_; }
  std::span<const double> gradient() const noexcept { return grad_; }
  void zero_gradient() noexcept;

  const ClassifierConfig& config() const noexcept { return config_; }
  std::size_t input_width() const noexcept { return width_; }
  std::size_t input_height() const noexcept { return height_; }

  /// Offsets of each parameter block inside parameters():
  /// conv weights/biases for the three blocks, then the affine layer.
  struct Layout {
    std::array<std::size_t, 3> conv_weight, conv_bias;
    std::size_t fc_weight, fc_bias, total;
  };
  const Layout& layout() const noexcept { return layout_; }

 private:
  struct Forward;

  void forward(const Spectrogram& x, Forward& f) const;

  ClassifierConfig config_;
  std::size_t width_, height_;
  Layout layout_{};
  std::vector<double> params_, grad_, adam_m_, adam_v_;
  std::uint64_t adam_steps_ = 0;
};

}  // namespace csiaug
