#include "oet/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "oet/config.hpp"
#include "oet/error.hpp"

namespace oet {

namespace {

// Separable Gaussian blur with replicated borders.
Matrix blur(const Matrix& in, double sigma) {
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(static_cast<size_t>(2 * radius + 1));
  double total = 0.0;
  for (int k = -radius; k <= radius; ++k) {
    kernel[static_cast<size_t>(k + radius)] = std::exp(-0.5 * k * k / (sigma * sigma));
    total += kernel[static_cast<size_t>(k + radius)];
  }
  for (double& v : kernel) v /= total;

  const auto rows = static_cast<int>(in.rows());
  const auto cols = static_cast<int>(in.cols());
  Matrix tmp(rows, cols);
  for (int y = 0; y < rows; ++y) {
    for (int x = 0; x < cols; ++x) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) {
        acc += kernel[static_cast<size_t>(k + radius)] * in(y, std::clamp(x + k, 0, cols - 1));
      }
      tmp(y, x) = acc;
    }
  }
  Matrix out(rows, cols);
  for (int y = 0; y < rows; ++y) {
    for (int x = 0; x < cols; ++x) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) {
        acc += kernel[static_cast<size_t>(k + radius)] * tmp(std::clamp(y + k, 0, rows - 1), x);
      }
      out(y, x) = acc;
    }
  }
  return out;
}

Matrix smooth_texture(int rows, int cols, double sigma, double lo, double hi,
                      std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  Matrix noise(rows, cols);
  for (int y = 0; y < rows; ++y) {
    for (int x = 0; x < cols; ++x) noise(y, x) = uniform(rng);
  }
  Matrix smooth = blur(noise, sigma);
  const double mn = smooth.minCoeff();
  const double mx = smooth.maxCoeff();
  const double span = mx > mn ? mx - mn : 1.0;
  return ((smooth.array() - mn) / span * (hi - lo) + lo).matrix();
}

double sample_clamped(const Matrix& img, double u, double v) {
  const double x = std::clamp(u, 0.0, img.cols() - 1.0);
  const double y = std::clamp(v, 0.0, img.rows() - 1.0);
  const int x0 = static_cast<int>(std::floor(x));
  const int y0 = static_cast<int>(std::floor(y));
  const int x1 = std::min<int>(x0 + 1, static_cast<int>(img.cols()) - 1);
  const int y1 = std::min<int>(y0 + 1, static_cast<int>(img.rows()) - 1);
  const double fx = x - x0;
  const double fy = y - y0;
  const double top = img(y0, x0) + fx * (img(y0, x1) - img(y0, x0));
  const double bottom = img(y1, x0) + fx * (img(y1, x1) - img(y1, x0));
  return top + fy * (bottom - top);
}

// Fraction of the unit pixel [p, p+1) covered by [lo, hi).
double coverage(double p, double lo, double hi) {
  return std::clamp(std::min(p + 1.0, hi) - std::max(p, lo), 0.0, 1.0);
}

std::vector<double> parse_list(const KeyValue& kv, size_t expected) {
  std::vector<double> values = parse_double_list(kv);
  if (values.size() != expected) {
    throw ConfigError(kv.key, "expected " + std::to_string(expected) +
                                  " comma-separated values");
  }
  return values;
}

}  // namespace

void SynthSpec::validate() const {
  if (width < 32 || height < 32) throw InvalidSpec("frame must be at least 32x32");
  if (length < 1) throw InvalidSpec("length must be at least 1");
  if (!initial_box.valid()) throw InvalidSpec("patch box must have positive extents");
  if (!(noise_std >= 0.0)) throw InvalidSpec("noise_std must be non-negative");
  if (occlusion) {
    if (!(occlusion->fraction >= 0.0 && occlusion->fraction <= 1.0)) {
      throw InvalidSpec("occlusion fraction must lie in [0, 1]");
    }
    if (occlusion->last_frame < occlusion->first_frame) {
      throw InvalidSpec("occlusion range is empty");
    }
    if (!(occlusion->intensity >= 0.0 && occlusion->intensity <= 1.0)) {
      throw InvalidSpec("occlusion intensity must lie in [0, 1]");
    }
  }
  if (illumination &&
      !(illumination->gain_start > 0.0 && illumination->gain_end > 0.0)) {
    throw InvalidSpec("illumination gains must be positive");
  }
  // Linear motion: checking both ends covers every frame.
  for (int t : {0, length - 1}) {
    const BoundingBox b = box_at(t);
    if (b.x < 0.0 || b.y < 0.0 || b.x + b.w > width || b.y + b.h > height) {
      throw InvalidSpec("trajectory leaves the frame at frame " + std::to_string(t));
    }
  }
}

BoundingBox SynthSpec::box_at(int t) const {
  BoundingBox b = initial_box;
  b.x += t * vx;
  b.y += t * vy;
  return b;
}

double SynthSpec::gain_at(int t) const {
  if (!illumination) return 1.0;
  if (length <= 1) return illumination->gain_start;
  const double s = static_cast<double>(t) / (length - 1);
  return illumination->gain_start + s * (illumination->gain_end - illumination->gain_start);
}

SyntheticSequence generate_sequence(const SynthSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  const int pw = static_cast<int>(std::ceil(spec.initial_box.w));
  const int ph = static_cast<int>(std::ceil(spec.initial_box.h));
  const Matrix texture = smooth_texture(ph, pw, 1.5, 0.1, 0.9, rng);
  const Matrix background =
      smooth_texture(spec.height, spec.width, 4.0, 0.3, 0.7, rng);
  std::normal_distribution<double> noise(0.0, 1.0);

  SyntheticSequence out;
  out.frames.reserve(static_cast<size_t>(spec.length));
  for (int t = 0; t < spec.length; ++t) {
    const BoundingBox box = spec.box_at(t);
    const double gain = spec.gain_at(t);
    Matrix pixels = background;

    const int x_lo = std::max(0, static_cast<int>(std::floor(box.x)));
    const int x_hi = std::min(spec.width, static_cast<int>(std::ceil(box.x + box.w)));
    const int y_lo = std::max(0, static_cast<int>(std::floor(box.y)));
    const int y_hi = std::min(spec.height, static_cast<int>(std::ceil(box.y + box.h)));
    for (int y = y_lo; y < y_hi; ++y) {
      const double cover_y = coverage(y, box.y, box.y + box.h);
      for (int x = x_lo; x < x_hi; ++x) {
        const double alpha = cover_y * coverage(x, box.x, box.x + box.w);
        if (alpha <= 0.0) continue;
        const double value =
            gain * sample_clamped(texture, (x - box.x) * pw / box.w,
                                  (y - box.y) * ph / box.h);
        pixels(y, x) = alpha * value + (1.0 - alpha) * pixels(y, x);
      }
    }

    if (spec.occlusion && t >= spec.occlusion->first_frame &&
        t <= spec.occlusion->last_frame && spec.occlusion->fraction > 0.0) {
      const double side = std::sqrt(spec.occlusion->fraction);
      const double ow = side * box.w;
      const double oh = side * box.h;
      const double ox = box.center_x() - 0.5 * ow;
      const double oy = box.center_y() - 0.5 * oh;
      for (int y = std::max(0, static_cast<int>(std::floor(oy)));
           y < std::min(spec.height, static_cast<int>(std::ceil(oy + oh))); ++y) {
        const double cover_y = coverage(y, oy, oy + oh);
        for (int x = std::max(0, static_cast<int>(std::floor(ox)));
             x < std::min(spec.width, static_cast<int>(std::ceil(ox + ow))); ++x) {
          const double alpha = cover_y * coverage(x, ox, ox + ow);
          pixels(y, x) = alpha * spec.occlusion->intensity + (1.0 - alpha) * pixels(y, x);
        }
      }
    }

    for (int y = 0; y < spec.height; ++y) {
      for (int x = 0; x < spec.width; ++x) {
        const double n = noise(rng);
        pixels(y, x) = std::clamp(pixels(y, x) + spec.noise_std * n, 0.0, 1.0);
      }
    }
    out.frames.push_back(Frame{std::move(pixels), t});
    out.ground_truth.push_back(box);
  }
  return out;
}

SynthSpec parse_synth_spec(std::string_view text) {
  SynthSpec spec;
  for (const KeyValue& kv : parse_key_values(text)) {
    const std::string& k = kv.key;
    if (k == "width") {
      spec.width = parse_int(kv);
    } else if (k == "height") {
      spec.height = parse_int(kv);
    } else if (k == "box") {
      const auto v = parse_list(kv, 4);
      spec.initial_box = {v[0], v[1], v[2], v[3]};
    } else if (k == "vx") {
      spec.vx = parse_double(kv);
    } else if (k == "vy") {
      spec.vy = parse_double(kv);
    } else if (k == "occlusion") {
      if (kv.value == "none") {
        spec.occlusion.reset();
      } else {
        const auto v = parse_list(kv, 3);
        const double intensity = spec.occlusion ? spec.occlusion->intensity : 0.5;
        spec.occlusion = Occlusion{static_cast<int>(v[0]), static_cast<int>(v[1]),
                                   v[2], intensity};
      }
    } else if (k == "occlusion_intensity") {
      if (!spec.occlusion) spec.occlusion = Occlusion{};
      spec.occlusion->intensity = parse_double(kv);
    } else if (k == "illumination") {
      if (kv.value == "none") {
        spec.illumination.reset();
      } else {
        const auto v = parse_list(kv, 2);
        spec.illumination = IlluminationRamp{v[0], v[1]};
      }
    } else if (k == "noise_std") {
      spec.noise_std = parse_double(kv);
    } else if (k == "length") {
      spec.length = parse_int(kv);
    } else if (k == "seed") {
      spec.seed = parse_u64(kv);
    } else {
      throw ConfigError(k, "unknown synth key (line " + std::to_string(kv.line) + ")");
    }
  }
  spec.validate();
  return spec;
}

SynthSpec load_synth_spec(const std::filesystem::path& path) {
  return parse_synth_spec(read_text_file(path));
}

}  // namespace oet
