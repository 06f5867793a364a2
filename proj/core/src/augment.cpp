#include "csiaug/augment.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "csiaug/error.hpp"

namespace csiaug {
namespace {

std::size_t half_width_ceil(std::size_t w) { return (w + 1) / 2; }

void check_factors(std::span<const double> factors, std::size_t h, std::string_view op) {
  if (factors.size() != h) {
    fail(ErrorKind::parameter,
         fmt::format("{}: {} factors for a spectrogram of height {}", op, factors.size(), h));
  }
  for (double f : factors) {
    if (!std::isfinite(f) || f <= 0.0) {
      fail(ErrorKind::parameter, fmt::format("{}: factor {} must be finite and > 0", op, f));
    }
  }
}

// Endpoint-aligned linear resampling of columns [begin, begin + count) of x
// into m columns.
Spectrogram resample_columns(const Spectrogram& x, std::size_t begin, std::size_t count, std::size_t m) {
  const std::size_t h = x.height();
  Spectrogram out(m, h);
  for (std::size_t j = 0; j < m; ++j) {
    const double pos = m == 1 ? 0.0
                              : static_cast<double>(j * (count - 1)) / static_cast<double>(m - 1);
    const auto i0 = static_cast<std::size_t>(std::floor(pos));
    auto dst = out.column(j);
    if (i0 + 1 >= count) {
      const auto src = x.column(begin + count - 1);
      std::copy(src.begin(), src.end(), dst.begin());
      continue;
    }
    const double frac = pos - static_cast<double>(i0);
    const auto a = x.column(begin + i0);
    const auto b = x.column(begin + i0 + 1);
    for (std::size_t k = 0; k < h; ++k) dst[k] = a[k] + frac * (b[k] - a[k]);
  }
  return out;
}

}  // namespace

Spectrogram circular_rotate(const Spectrogram& x, std::size_t n) {
  const std::size_t w = x.width();
  if (n > w) fail(ErrorKind::parameter, fmt::format("rotation {} outside [0, {}]", n, w));
  Spectrogram out(w, x.height());
  for (std::size_t t = 0; t < w; ++t) {
    const auto src = x.column(t);
    std::copy(src.begin(), src.end(), out.column((t + n) % w).begin());
  }
  return out;
}

Spectrogram resized_crop(const Spectrogram& x, ResizeMode mode, std::size_t c, std::size_t start) {
  const std::size_t w = x.width();
  if (w == 0) fail(ErrorKind::parameter, "resized_crop on an empty spectrogram");
  if (c < half_width_ceil(w) || c > w) {
    fail(ErrorKind::parameter, fmt::format("resized_crop: c = {} outside [{}, {}]", c, half_width_ceil(w), w));
  }
  switch (mode) {
    case ResizeMode::crop_stretch:
      if (start > w - c) {
        fail(ErrorKind::parameter, fmt::format("resized_crop: start {} outside [0, {}]", start, w - c));
      }
      return resample_columns(x, start, c, w);
    case ResizeMode::compress_tile: {
      const auto compressed = resample_columns(x, 0, w, c);
      Spectrogram out(w, x.height());
      for (std::size_t t = 0; t < w; ++t) {
        const auto src = compressed.column(t % c);
        std::copy(src.begin(), src.end(), out.column(t).begin());
      }
      return out;
    }
    case ResizeMode::compress_stretch: {
      const auto compressed = resample_columns(x, 0, w, c);
      return resample_columns(compressed, 0, c, w);
    }
  }
  fail(ErrorKind::parameter, "resized_crop: unknown mode");
}

Spectrogram amplitude_scale(const Spectrogram& x, std::span<const double> factors) {
  check_factors(factors, x.height(), "amplitude_scale");
  Spectrogram out = x;
  for (std::size_t t = 0; t < x.width(); ++t) {
    auto col = out.column(t);
    for (std::size_t k = 0; k < col.size(); ++k) col[k] *= factors[k];
  }
  return out;
}

Spectrogram contrast_scale(const Spectrogram& x, std::span<const double> factors) {
  check_factors(factors, x.height(), "contrast_scale");
  const std::size_t h = x.height();
  std::vector<double> mean(h);
  for (std::size_t k = 0; k < h; ++k) mean[k] = x.row_mean(k);
  Spectrogram out(x.width(), h);
  for (std::size_t t = 0; t < x.width(); ++t) {
    const auto src = x.column(t);
    auto dst = out.column(t);
    for (std::size_t k = 0; k < h; ++k) {
      dst[k] = std::max(0.0, mean[k] + factors[k] * (src[k] - mean[k]));
    }
  }
  return out;
}

Spectrogram random_circular_rotation(const Spectrogram& x, RandomStream& stream) {
  const auto w = static_cast<std::int64_t>(x.width());
  return circular_rotate(x, static_cast<std::size_t>(stream.between(1, w)));
}

namespace {

std::size_t draw_crop_columns(RandomStream& stream, std::size_t w, double lo, double hi) {
  const double u = stream.uniform(lo, hi);
  const auto rounded = static_cast<std::int64_t>(std::llround(u));
  return static_cast<std::size_t>(std::clamp<std::int64_t>(
      rounded, static_cast<std::int64_t>(half_width_ceil(w)), static_cast<std::int64_t>(w)));
}

}  // namespace

Spectrogram random_resized_crop(const Spectrogram& x, RandomStream& stream) {
  const std::size_t w = x.width();
  const bool crop = stream.uniform() < 0.5;
  const std::size_t c = draw_crop_columns(stream, w, static_cast<double>(w) / 2.0, static_cast<double>(w));
  const auto start = static_cast<std::size_t>(stream.between(0, static_cast<std::int64_t>(w - c)));
  return resized_crop(x, crop ? ResizeMode::crop_stretch : ResizeMode::compress_tile, c, start);
}

std::vector<double> random_channel_factors(RandomStream& stream, std::size_t h, double lo, double hi) {
  std::vector<double> out(h);
  for (auto& f : out) f = stream.uniform(lo, hi);
  return out;
}

std::string_view to_string(AugmentKind kind) noexcept {
  switch (kind) {
    case AugmentKind::circular_rotation: return "circular_rotation";
    case AugmentKind::resized_crop: return "resized_crop";
    case AugmentKind::amplitude: return "amplitude";
    case AugmentKind::contrast: return "contrast";
  }
  return "?";
}

std::string_view display_name(AugmentKind kind) noexcept {
  switch (kind) {
    case AugmentKind::circular_rotation: return "randomCircularRotation";
    case AugmentKind::resized_crop: return "randomResizedCrop";
    case AugmentKind::amplitude: return "randomAmplitude";
    case AugmentKind::contrast: return "randomContrast";
  }
  return "?";
}

std::optional<AugmentKind> parse_augment_kind(std::string_view name) noexcept {
  for (auto kind : kAllAugmentKinds) {
    if (name == to_string(kind) || name == display_name(kind)) return kind;
  }
  return std::nullopt;
}

std::string_view to_string(ResizeMode mode) noexcept {
  switch (mode) {
    case ResizeMode::crop_stretch: return "crop_stretch";
    case ResizeMode::compress_tile: return "compress_tile";
    case ResizeMode::compress_stretch: return "compress_stretch";
  }
  return "?";
}

std::pair<double, double> AugmentationSpec::bounds(std::size_t width) const {
  const auto w = static_cast<double>(width);
  std::pair<double, double> def;
  switch (kind) {
    case AugmentKind::circular_rotation: def = {1.0, w}; break;
    case AugmentKind::resized_crop: def = {w / 2.0, w}; break;
    case AugmentKind::amplitude:
    case AugmentKind::contrast: def = {0.75, 1.25}; break;
  }
  return {param_lo.value_or(def.first), param_hi.value_or(def.second)};
}

void AugmentationSpec::validate() const {
  if (!(gate_p >= 0.0 && gate_p <= 1.0)) {
    fail(ErrorKind::parameter, fmt::format("{}: gate_p {} outside [0, 1]", to_string(kind), gate_p));
  }
  if (param_lo && param_hi && *param_lo > *param_hi) {
    fail(ErrorKind::parameter,
         fmt::format("{}: param_lo {} > param_hi {}", to_string(kind), *param_lo, *param_hi));
  }
  if (kind == AugmentKind::amplitude || kind == AugmentKind::contrast) {
    const auto [lo, hi] = bounds(1);
    if (!(lo > 0.0) || !std::isfinite(hi) || lo > hi) {
      fail(ErrorKind::parameter,
           fmt::format("{}: factor bounds must satisfy 0 < lo <= hi", to_string(kind)));
    }
  }
}

void PipelineSpec::validate() const {
  std::vector<AugmentKind> seen;
  for (const auto& op : operators) {
    op.validate();
    if (std::find(seen.begin(), seen.end(), op.kind) != seen.end()) {
      fail(ErrorKind::parameter, fmt::format("operator {} listed twice", to_string(op.kind)));
    }
    seen.push_back(op.kind);
  }
}

PipelineSpec PipelineSpec::of(std::initializer_list<AugmentKind> kinds, std::uint64_t seed) {
  PipelineSpec spec;
  spec.global_seed = seed;
  for (auto k : kinds) spec.operators.push_back(AugmentationSpec{k, 0.5, std::nullopt, std::nullopt});
  return spec;
}

std::uint64_t sample_seed(std::uint64_t global_seed, SampleKey key) noexcept {
  return derive_seed(global_seed, {key.epoch, key.index});
}

std::uint64_t operator_seed(std::uint64_t sample_seed, AugmentKind kind) noexcept {
  return derive_seed(sample_seed, {static_cast<std::uint64_t>(kind)});
}

OperatorDraw draw_operator(const AugmentationSpec& op, const PipelineSpec& spec, std::size_t width,
                           std::size_t height, std::uint64_t seed) {
  RandomStream stream(operator_seed(seed, op.kind));
  OperatorDraw d;
  d.kind = op.kind;
  d.gate = stream.uniform();
  d.applied = d.gate < op.gate_p;
  const auto [lo, hi] = op.bounds(width);
  const auto w = static_cast<std::int64_t>(width);

  switch (op.kind) {
    case AugmentKind::circular_rotation: {
      const auto n_lo = std::clamp<std::int64_t>(static_cast<std::int64_t>(std::ceil(lo)), 0, w);
      const auto n_hi = std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor(hi)), n_lo, w);
      d.shift = static_cast<std::size_t>(stream.between(n_lo, n_hi));
      break;
    }
    case AugmentKind::resized_crop: {
      const bool crop = stream.uniform() < 0.5;
      d.mode = crop ? ResizeMode::crop_stretch
                    : (spec.compress_mode == CompressMode::tile ? ResizeMode::compress_tile
                                                                : ResizeMode::compress_stretch);
      d.columns = draw_crop_columns(stream, width, lo, hi);
      const auto s = stream.between(0, w - static_cast<std::int64_t>(d.columns));
      d.start = crop ? static_cast<std::size_t>(s) : 0;
      break;
    }
    case AugmentKind::amplitude:
    case AugmentKind::contrast: {
      d.factors = random_channel_factors(stream, height, lo, hi);
      if (spec.channel_mode == ChannelMode::whole_image && !d.factors.empty()) {
        std::fill(d.factors.begin(), d.factors.end(), d.factors.front());
      }
      break;
    }
  }
  return d;
}

Spectrogram apply_draw(const Spectrogram& x, const OperatorDraw& d) {
  if (!d.applied) return x;
  switch (d.kind) {
    case AugmentKind::circular_rotation: return circular_rotate(x, d.shift);
    case AugmentKind::resized_crop: return resized_crop(x, d.mode, d.columns, d.start);
    case AugmentKind::amplitude: return amplitude_scale(x, d.factors);
    case AugmentKind::contrast: return contrast_scale(x, d.factors);
  }
  return x;
}

AugmentResult apply_pipeline(const Spectrogram& x, const PipelineSpec& spec, SampleKey key) {
  AugmentResult result{x, {}};
  if (spec.operators.empty()) return result;
  const auto seed = sample_seed(spec.global_seed, key);
  for (auto kind : kAllAugmentKinds) {
    const auto it = std::find_if(spec.operators.begin(), spec.operators.end(),
                                 [kind](const AugmentationSpec& op) { return op.kind == kind; });
    if (it == spec.operators.end()) continue;
    auto draw = draw_operator(*it, spec, x.width(), x.height(), seed);
    if (draw.applied) result.output = apply_draw(result.output, draw);
    result.log.push_back(std::move(draw));
  }
  return result;
}

Spectrogram replay(const Spectrogram& x, const DrawLog& log) {
  Spectrogram out = x;
  for (const auto& d : log) {
    if (d.applied) out = apply_draw(out, d);
  }
  return out;
}

void to_json(nlohmann::json& j, const OperatorDraw& d) {
  j = nlohmann::json{{"kind", to_string(d.kind)}, {"gate", d.gate}, {"applied", d.applied}};
  switch (d.kind) {
    case AugmentKind::circular_rotation: j["shift"] = d.shift; break;
    case AugmentKind::resized_crop:
      j["mode"] = to_string(d.mode);
      j["columns"] = d.columns;
      j["start"] = d.start;
      break;
    case AugmentKind::amplitude:
    case AugmentKind::contrast: j["factors"] = d.factors; break;
  }
}

void from_json(const nlohmann::json& j, OperatorDraw& d) {
  const auto kind = parse_augment_kind(j.at("kind").get<std::string>());
  if (!kind) fail(ErrorKind::schema, "draw log: unknown operator kind");
  d = OperatorDraw{};
  d.kind = *kind;
  d.gate = j.at("gate").get<double>();
  d.applied = j.at("applied").get<bool>();
  switch (d.kind) {
    case AugmentKind::circular_rotation: d.shift = j.at("shift").get<std::size_t>(); break;
    case AugmentKind::resized_crop: {
      const auto mode = j.at("mode").get<std::string>();
      if (mode == "crop_stretch") d.mode = ResizeMode::crop_stretch;
      else if (mode == "compress_tile") d.mode = ResizeMode::compress_tile;
      else if (mode == "compress_stretch") d.mode = ResizeMode::compress_stretch;
      else fail(ErrorKind::schema, fmt::format("draw log: unknown resize mode '{}'", mode));
      d.columns = j.at("columns").get<std::size_t>();
      d.start = j.at("start").get<std::size_t>();
      break;
    }
    case AugmentKind::amplitude:
    case AugmentKind::contrast: d.factors = j.at("factors").get<std::vector<double>>(); break;
  }
}

}  // namespace csiaug
