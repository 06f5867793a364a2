#include "csiaug/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>

#include <fmt/format.h>

#include "csiaug/error.hpp"
#include "csiaug/random.hpp"
#include "csiaug/spectrogram_file.hpp"

namespace csiaug {

int Classifier::predict(const Spectrogram& x) const {
  const auto s = scores(x);
  return static_cast<int>(std::max_element(s.begin(), s.end()) - s.begin());
}

void ClassifierConfig::validate() const {
  for (auto c : channels) {
    if (c == 0) fail(ErrorKind::parameter, "classifier: feature counts must be >= 1");
  }
  if (classes < 2) fail(ErrorKind::parameter, "classifier: needs at least two classes");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0) || !(epsilon > 0.0)) {
    fail(ErrorKind::parameter, "classifier: Adam hyperparameters out of range");
  }
}

namespace {

constexpr std::size_t kBlocks = 3;

// Shapes are (channels, a, b) with a = time, b = subcarrier.
struct Shape {
  std::size_t c, a, b;
  std::size_t plane() const { return a * b; }
  std::size_t size() const { return c * a * b; }
};

// out[co] = bias[co] + sum_ci conv3x3(in[ci], w[co][ci]) with zero padding.
void conv3x3_forward(const double* in, Shape is, const double* w, const double* bias, std::size_t cout,
                     double* out) {
  const std::size_t A = is.a, B = is.b, P = is.plane();
  for (std::size_t co = 0; co < cout; ++co) {
    double* o = out + co * P;
    std::fill(o, o + P, bias[co]);
    for (std::size_t ci = 0; ci < is.c; ++ci) {
      const double* x = in + ci * P;
      const double* k = w + (co * is.c + ci) * 9;
      for (int dy = -1; dy <= 1; ++dy) {
        const std::size_t a0 = dy < 0 ? 1 : 0;
        const std::size_t a1 = dy > 0 ? A - 1 : A;
        for (int dx = -1; dx <= 1; ++dx) {
          const double kv = k[(dy + 1) * 3 + (dx + 1)];
          const std::size_t b0 = dx < 0 ? 1 : 0;
          const std::size_t b1 = dx > 0 ? B - 1 : B;
          for (std::size_t a = a0; a < a1; ++a) {
            double* orow = o + a * B;
            // Output row a reads input row a + dy, shifted by dx.
            const double* xrow = x + static_cast<std::size_t>(static_cast<std::ptrdiff_t>(a) + dy) * B;
            const std::size_t shift = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(b0) + dx);
            const double* src = xrow + shift;
            for (std::size_t b = b0; b < b1; ++b) orow[b] += kv * src[b - b0];
          }
        }
      }
    }
  }
}

// Accumulates dW, dbias and (when din != nullptr) din from dout.
void conv3x3_backward(const double* in, Shape is, const double* w, std::size_t cout, const double* dout,
                      double* dw, double* dbias, double* din) {
  const std::size_t A = is.a, B = is.b, P = is.plane();
  for (std::size_t co = 0; co < cout; ++co) {
    const double* g = dout + co * P;
    double gsum = 0.0;
    for (std::size_t i = 0; i < P; ++i) gsum += g[i];
    dbias[co] += gsum;
    for (std::size_t ci = 0; ci < is.c; ++ci) {
      const double* x = in + ci * P;
      const double* k = w + (co * is.c + ci) * 9;
      double* dk = dw + (co * is.c + ci) * 9;
      double* dx_plane = din ? din + ci * P : nullptr;
      for (int dy = -1; dy <= 1; ++dy) {
        const std::size_t a0 = dy < 0 ? 1 : 0;
        const std::size_t a1 = dy > 0 ? A - 1 : A;
        for (int dx = -1; dx <= 1; ++dx) {
          const std::size_t kidx = static_cast<std::size_t>((dy + 1) * 3 + (dx + 1));
          const double kv = k[kidx];
          const std::size_t b0 = dx < 0 ? 1 : 0;
          const std::size_t b1 = dx > 0 ? B - 1 : B;
          double acc = 0.0;
          for (std::size_t a = a0; a < a1; ++a) {
            const double* grow = g + a * B;
            const std::size_t src = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(a) + dy) * B;
            const double* xrow = x + src;
            for (std::size_t b = b0; b < b1; ++b) {
              const std::size_t bb = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(b) + dx);
              acc += grow[b] * xrow[bb];
            }
            if (dx_plane) {
              double* drow = dx_plane + src;
              for (std::size_t b = b0; b < b1; ++b) {
                drow[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(b) + dx)] += kv * grow[b];
              }
            }
          }
          dk[kidx] += acc;
        }
      }
    }
  }
}

void avgpool2_forward(const double* in, Shape is, double* out) {
  const std::size_t A2 = is.a / 2, B2 = is.b / 2;
  for (std::size_t c = 0; c < is.c; ++c) {
    const double* x = in + c * is.plane();
    double* o = out + c * A2 * B2;
    for (std::size_t a = 0; a < A2; ++a) {
      const double* r0 = x + (2 * a) * is.b;
      const double* r1 = r0 + is.b;
      for (std::size_t b = 0; b < B2; ++b) {
        o[a * B2 + b] = 0.25 * (r0[2 * b] + r0[2 * b + 1] + r1[2 * b] + r1[2 * b + 1]);
      }
    }
  }
}

void avgpool2_backward(Shape is, const double* dout, double* din) {
  const std::size_t A2 = is.a / 2, B2 = is.b / 2;
  std::fill(din, din + is.size(), 0.0);
  for (std::size_t c = 0; c < is.c; ++c) {
    const double* g = dout + c * A2 * B2;
    double* d = din + c * is.plane();
    for (std::size_t a = 0; a < A2; ++a) {
      double* r0 = d + (2 * a) * is.b;
      double* r1 = r0 + is.b;
      for (std::size_t b = 0; b < B2; ++b) {
        const double v = 0.25 * g[a * B2 + b];
        r0[2 * b] = v;
        r0[2 * b + 1] = v;
        r1[2 * b] = v;
        r1[2 * b + 1] = v;
      }
    }
  }
}

}  // namespace

struct ConvClassifier::Forward {
  std::array<Shape, kBlocks> in_shape{};
  std::array<std::vector<double>, kBlocks> input;    // block input
  std::array<std::vector<double>, kBlocks> relu;     // conv output after ReLU
  std::vector<double> pooled;                        // last block output
  Shape pooled_shape{};
  std::vector<double> features;                      // global average pool
  std::vector<double> logits;
};

ConvClassifier::ConvClassifier(const ClassifierConfig& config, std::size_t width, std::size_t height,
                               std::uint64_t seed)
    : config_(config), width_(width), height_(height) {
  config_.validate();
  if (width < 8 || height < 8) {
    fail(ErrorKind::parameter, fmt::format("classifier input {}x{} is smaller than 8x8", width, height));
  }
  std::size_t offset = 0;
  std::size_t cin = 1;
  for (std::size_t l = 0; l < kBlocks; ++l) {
    const std::size_t cout = config_.channels[l];
    layout_.conv_weight[l] = offset;
    offset += cout * cin * 9;
    layout_.conv_bias[l] = offset;
    offset += cout;
    cin = cout;
  }
  layout_.fc_weight = offset;
  offset += config_.classes * cin;
  layout_.fc_bias = offset;
  offset += config_.classes;
  layout_.total = offset;

  params_.assign(offset, 0.0);
  grad_.assign(offset, 0.0);
  adam_m_.assign(offset, 0.0);
  adam_v_.assign(offset, 0.0);

  // He-uniform for the ReLU convolutions, 1/sqrt(fan_in) for the affine map.
  RandomStream init(derive_seed(seed, {tag_key("classifier-init")}));
  cin = 1;
  for (std::size_t l = 0; l < kBlocks; ++l) {
    const std::size_t cout = config_.channels[l];
    const double bound = std::sqrt(6.0 / static_cast<double>(cin * 9));
    for (std::size_t i = 0; i < cout * cin * 9; ++i) params_[layout_.conv_weight[l] + i] = init.uniform(-bound, bound);
    cin = cout;
  }
  const double fc_bound = 1.0 / std::sqrt(static_cast<double>(cin));
  for (std::size_t i = 0; i < config_.classes * cin; ++i) params_[layout_.fc_weight + i] = init.uniform(-fc_bound, fc_bound);
}

void ConvClassifier::forward(const Spectrogram& x, Forward& f) const {
  if (x.width() != width_ || x.height() != height_) {
    fail(ErrorKind::parameter, fmt::format("classifier expects {}x{} input, got {}x{}", width_, height_,
                                           x.width(), x.height()));
  }
  Shape shape{1, width_, height_};
  f.input[0].assign(x.values().begin(), x.values().end());
  if (config_.normalization == InputNormalization::peak) {
    const double peak = *std::max_element(f.input[0].begin(), f.input[0].end());
    if (peak > 0.0) {
      for (auto& v : f.input[0]) v /= peak;
    }
  }
  for (std::size_t l = 0; l < kBlocks; ++l) {
    f.in_shape[l] = shape;
    const std::size_t cout = config_.channels[l];
    const Shape conv_shape{cout, shape.a, shape.b};
    f.relu[l].assign(conv_shape.size(), 0.0);
    conv3x3_forward(f.input[l].data(), shape, &params_[layout_.conv_weight[l]], &params_[layout_.conv_bias[l]],
                    cout, f.relu[l].data());
    for (auto& v : f.relu[l]) v = v > 0.0 ? v : 0.0;
    const Shape pooled{cout, shape.a / 2, shape.b / 2};
    auto& next = l + 1 < kBlocks ? f.input[l + 1] : f.pooled;
    next.assign(pooled.size(), 0.0);
    avgpool2_forward(f.relu[l].data(), conv_shape, next.data());
    shape = pooled;
  }
  f.pooled_shape = shape;
  f.features.assign(shape.c, 0.0);
  for (std::size_t c = 0; c < shape.c; ++c) {
    double s = 0.0;
    for (std::size_t i = 0; i < shape.plane(); ++i) s += f.pooled[c * shape.plane() + i];
    f.features[c] = s / static_cast<double>(shape.plane());
  }
  f.logits.assign(config_.classes, 0.0);
  for (std::size_t k = 0; k < config_.classes; ++k) {
    double s = params_[layout_.fc_bias + k];
    for (std::size_t c = 0; c < shape.c; ++c) s += params_[layout_.fc_weight + k * shape.c + c] * f.features[c];
    f.logits[k] = s;
  }
}

namespace {

std::vector<double> softmax(const std::vector<double>& logits) {
  const double m = *std::max_element(logits.begin(), logits.end());
  std::vector<double> p(logits.size());
  double z = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) z += p[i] = std::exp(logits[i] - m);
  for (auto& v : p) v /= z;
  return p;
}

double cross_entropy(const std::vector<double>& logits, int label) {
  const double m = *std::max_element(logits.begin(), logits.end());
  double z = 0.0;
  for (double l : logits) z += std::exp(l - m);
  return std::log(z) + m - logits[static_cast<std::size_t>(label)];
}

}  // namespace

std::vector<double> ConvClassifier::scores(const Spectrogram& x) const {
  Forward f;
  forward(x, f);
  return f.logits;
}

double ConvClassifier::loss(const Spectrogram& x, int label) const {
  Forward f;
  forward(x, f);
  return cross_entropy(f.logits, label);
}

double ConvClassifier::accumulate_gradient(const Spectrogram& x, int label) {
  if (label < 0 || static_cast<std::size_t>(label) >= config_.classes) {
    fail(ErrorKind::parameter, fmt::format("label {} outside [0, {})", label, config_.classes));
  }
  Forward f;
  forward(x, f);
  const double loss_value = cross_entropy(f.logits, label);

  auto dlogits = softmax(f.logits);
  dlogits[static_cast<std::size_t>(label)] -= 1.0;

  const Shape ps = f.pooled_shape;
  std::vector<double> dfeatures(ps.c, 0.0);
  for (std::size_t k = 0; k < config_.classes; ++k) {
    grad_[layout_.fc_bias + k] += dlogits[k];
    for (std::size_t c = 0; c < ps.c; ++c) {
      grad_[layout_.fc_weight + k * ps.c + c] += dlogits[k] * f.features[c];
      dfeatures[c] += params_[layout_.fc_weight + k * ps.c + c] * dlogits[k];
    }
  }

  std::vector<double> dpooled(ps.size());
  for (std::size_t c = 0; c < ps.c; ++c) {
    const double g = dfeatures[c] / static_cast<double>(ps.plane());
    std::fill(dpooled.begin() + static_cast<std::ptrdiff_t>(c * ps.plane()),
              dpooled.begin() + static_cast<std::ptrdiff_t>((c + 1) * ps.plane()), g);
  }

  std::vector<double> dconv, dinput;
  for (std::size_t l = kBlocks; l-- > 0;) {
    const Shape in = f.in_shape[l];
    const std::size_t cout = config_.channels[l];
    const Shape conv_shape{cout, in.a, in.b};
    dconv.resize(conv_shape.size());
    avgpool2_backward(conv_shape, dpooled.data(), dconv.data());
    for (std::size_t i = 0; i < dconv.size(); ++i) {
      if (f.relu[l][i] <= 0.0) dconv[i] = 0.0;
    }
    double* din = nullptr;
    if (l > 0) {
      dinput.assign(in.size(), 0.0);
      din = dinput.data();
    }
    conv3x3_backward(f.input[l].data(), in, &params_[layout_.conv_weight[l]], cout, dconv.data(),
                     &grad_[layout_.conv_weight[l]], &grad_[layout_.conv_bias[l]], din);
    if (l > 0) dpooled.swap(dinput);
  }
  return loss_value;
}

void ConvClassifier::zero_gradient() noexcept { std::fill(grad_.begin(), grad_.end(), 0.0); }

void ConvClassifier::step(double learning_rate, std::size_t batch_size) {
  if (batch_size == 0) return;
  ++adam_steps_;
  const double b1 = config_.beta1, b2 = config_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(adam_steps_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(adam_steps_));
  const double scale = 1.0 / static_cast<double>(batch_size);
  for (std::size_t i = 0; i < params_.size(); ++i) {
    const double g = grad_[i] * scale;
    adam_m_[i] = b1 * adam_m_[i] + (1.0 - b1) * g;
    adam_v_[i] = b2 * adam_v_[i] + (1.0 - b2) * g * g;
    const double mhat = adam_m_[i] / c1;
    const double vhat = adam_v_[i] / c2;
    params_[i] -= learning_rate * mhat / (std::sqrt(vhat) + config_.epsilon);
  }
  zero_gradient();
}

std::unique_ptr<TrainableClassifier> ConvClassifier::clone() const {
  return std::make_unique<ConvClassifier>(*this);
}

namespace {

constexpr char kModelMagic[4] = {'C', 'S', 'I', 'M'};

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t get_u64(std::span<const std::uint8_t> b, std::size_t& off) {
  if (off + 8 > b.size()) fail(ErrorKind::format, "checkpoint truncated");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[off + static_cast<std::size_t>(i)]) << (8 * i);
  off += 8;
  return v;
}

}  // namespace

// Checkpoint: "CSIM", then u64 LE fields (width, height, 3 channel counts,
// classes, normalization, parameter count) and the parameters as binary64.
void ConvClassifier::save(const std::filesystem::path& path) const {
  std::vector<std::uint8_t> out(kModelMagic, kModelMagic + 4);
  put_u64(out, width_);
  put_u64(out, height_);
  for (auto c : config_.channels) put_u64(out, c);
  put_u64(out, config_.classes);
  put_u64(out, static_cast<std::uint64_t>(config_.normalization));
  put_u64(out, params_.size());
  for (double p : params_) put_u64(out, std::bit_cast<std::uint64_t>(p));
  write_file_bytes(path, out);
}

ConvClassifier ConvClassifier::load(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kModelMagic, 4) != 0) {
    fail(ErrorKind::format, fmt::format("{}: not a classifier checkpoint", path.string()));
  }
  std::size_t off = 4;
  const auto w = get_u64(bytes, off);
  const auto h = get_u64(bytes, off);
  ClassifierConfig cfg;
  for (auto& c : cfg.channels) c = get_u64(bytes, off);
  cfg.classes = get_u64(bytes, off);
  cfg.normalization = static_cast<InputNormalization>(get_u64(bytes, off));
  ConvClassifier model(cfg, w, h, 0);
  const auto n = get_u64(bytes, off);
  if (n != model.params_.size()) fail(ErrorKind::format, fmt::format("{}: parameter count mismatch", path.string()));
  for (auto& p : model.params_) p = std::bit_cast<double>(get_u64(bytes, off));
  return model;
}

}  // namespace csiaug
