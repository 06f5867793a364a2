#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "csiaug/random.hpp"
#include "csiaug/spectrogram.hpp"

namespace csiaug {

// --- deterministic cores ----------------------------------------------------

/// Shifts every column n steps toward positive time; column t lands at
/// (t + n) mod w. Requires 0 <= n <= w.
Spectrogram circular_rotate(const Spectrogram& x, std::size_t n);

enum class ResizeMode {
  crop_stretch,      // take c columns from `start`, stretch to w
  compress_tile,     // squeeze all w columns into c, repeat circularly to w
  compress_stretch,  // squeeze all w columns into c, stretch back to w
};

/// Time-axis resize. All resampling is endpoint-aligned linear
/// interpolation: output column j of m drawn from n input columns samples
/// input position j * (n - 1) / (m - 1) (position 0 when m == 1).
/// Requires ceil(w/2) <= c <= w and, for crop_stretch, start <= w - c.
Spectrogram resized_crop(const Spectrogram& x, ResizeMode mode, std::size_t c, std::size_t start = 0);

/// output(t, k) = factors[k] * x(t, k). Factors must be finite and > 0.
Spectrogram amplitude_scale(const Spectrogram& x, std::span<const double> factors);

/// output(t, k) = max(0, mu_k + factors[k] * (x(t, k) - mu_k)) where mu_k is
/// the time-mean of row k. Factors must be finite and > 0.
Spectrogram contrast_scale(const Spectrogram& x, std::span<const double> factors);

// --- seeded wrappers --------------------------------------------------------

/// Draws n uniformly from {1, ..., w} and rotates.
Spectrogram random_circular_rotation(const Spectrogram& x, RandomStream& stream);

/// Fair coin between crop_stretch and compress_tile, c = round(U[w/2, w])
/// clamped to [ceil(w/2), w], start uniform on {0, ..., w - c}.
Spectrogram random_resized_crop(const Spectrogram& x, RandomStream& stream);

/// h independent draws from U[lo, hi], in row order.
std::vector<double> random_channel_factors(RandomStream& stream, std::size_t h, double lo, double hi);

// --- pipeline ---------------------------------------------------------------

enum class AugmentKind : std::uint8_t { circular_rotation, resized_crop, amplitude, contrast };

inline constexpr AugmentKind kAllAugmentKinds[] = {
    AugmentKind::circular_rotation, AugmentKind::resized_crop, AugmentKind::amplitude,
    AugmentKind::contrast};

std::string_view to_string(AugmentKind kind) noexcept;
/// Accepts the snake_case names and the camelCase arm labels
/// ("randomCircularRotation", ...).
std::optional<AugmentKind> parse_augment_kind(std::string_view name) noexcept;
/// Arm label used in reports, e.g. "randomResizedCrop".
std::string_view display_name(AugmentKind kind) noexcept;

std::string_view to_string(ResizeMode mode) noexcept;

/// How the compress branch of resized crop refills width w.
enum class CompressMode { tile, resample };
/// Whether amplitude/contrast draw one factor per subcarrier or broadcast
/// the first draw to the whole spectrogram.
enum class ChannelMode { per_subcarrier, whole_image };

struct AugmentationSpec {
  AugmentKind kind = AugmentKind::circular_rotation;
  double gate_p = 0.5;
  /// Factor bounds; unset means the kind's default for width w:
  /// rotation (1, w), resized crop (w/2, w), amplitude/contrast (0.75, 1.25).
  std::optional<double> param_lo;
  std::optional<double> param_hi;

  std::pair<double, double> bounds(std::size_t width) const;
  void validate() const;
};

struct PipelineSpec {
  std::vector<AugmentationSpec> operators;
  std::uint64_t global_seed = 0;
  ChannelMode channel_mode = ChannelMode::per_subcarrier;
  CompressMode compress_mode = CompressMode::tile;

  /// Kinds unique, each operator valid. Throws a parameter error.
  void validate() const;

  /// Default-parameter pipeline over the given kinds (gate_p = 0.5).
  static PipelineSpec of(std::initializer_list<AugmentKind> kinds, std::uint64_t seed = 0);
};

/// Identifies one augmentation draw: the n-th sample seen in an epoch.
struct SampleKey {
  std::uint64_t epoch = 0;
  std::uint64_t index = 0;
};

/// Everything one operator drew for one sample. Fields that do not belong
/// to `kind` stay at their defaults.
struct OperatorDraw {
  AugmentKind kind = AugmentKind::circular_rotation;
  double gate = 0.0;
  bool applied = false;
  std::size_t shift = 0;                          // circular_rotation
  ResizeMode mode = ResizeMode::crop_stretch;     // resized_crop
  std::size_t columns = 0;                        // resized_crop
  std::size_t start = 0;                          // resized_crop
  std::vector<double> factors;                    // amplitude, contrast

  friend bool operator==(const OperatorDraw&, const OperatorDraw&) = default;
};

using DrawLog = std::vector<OperatorDraw>;

struct AugmentResult {
  Spectrogram output;
  DrawLog log;
};

/// Seed of the per-sample stream: derive_seed(global_seed, {epoch, index}).
std::uint64_t sample_seed(std::uint64_t global_seed, SampleKey key) noexcept;

/// Seed of one operator's stream within a sample:
/// derive_seed(sample_seed, {kind}). Each operator kind owns its stream, so
/// adding or removing another operator never shifts its draws.
std::uint64_t operator_seed(std::uint64_t sample_seed, AugmentKind kind) noexcept;

/// Draws gate and parameters for one operator without applying it.
OperatorDraw draw_operator(const AugmentationSpec& op, const PipelineSpec& spec,
                           std::size_t width, std::size_t height, std::uint64_t sample_seed);

/// Applies one recorded draw (a no-op when the gate did not pass).
Spectrogram apply_draw(const Spectrogram& x, const OperatorDraw& draw);

/// Runs the pipeline for one sample. Operators run in the fixed order
/// rotation -> resized crop -> amplitude -> contrast regardless of their
/// position in `spec.operators`. Gate and parameters are always drawn; the
/// operator applies only when gate < gate_p. An empty spec is the identity.
AugmentResult apply_pipeline(const Spectrogram& x, const PipelineSpec& spec, SampleKey key);

/// Re-applies a recorded log. Reproduces apply_pipeline's output exactly.
Spectrogram replay(const Spectrogram& x, const DrawLog& log);

void to_json(nlohmann::json& j, const OperatorDraw& draw);
void from_json(const nlohmann::json& j, OperatorDraw& draw);

}  // namespace csiaug
