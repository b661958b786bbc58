#include "wmarena/attacks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "wmarena/codecs.hpp"
#include "wmarena/error.hpp"
#include "wmarena/transforms.hpp"

namespace wmarena {

const char* to_string(AttackKind k) {
  switch (k) {
    case AttackKind::identity: return "identity";
    case AttackKind::rewatermark: return "rewatermark";
    case AttackKind::noise: return "noise";
    case AttackKind::blur: return "blur";
    case AttackKind::jpeg_quant: return "jpeg_quant";
    case AttackKind::resize_restore: return "resize_restore";
  }
  return "identity";
}

namespace {

std::string format_level(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

const char* prefix(AttackKind k) {
  switch (k) {
    case AttackKind::noise: return "noise";
    case AttackKind::blur: return "blur";
    case AttackKind::jpeg_quant: return "jpeg";
    case AttackKind::resize_restore: return "resize";
    default: return "";
  }
}

ImagePlane channel(const RgbImage& img, int c) {
  ImagePlane p(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) p.at(x, y) = img.at(x, y, c);
  return p;
}

void set_channel(RgbImage& img, int c, const ImagePlane& p) {
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) img.at(x, y, c) = p.at(x, y);
}

// Bilinear resampling with pixel-centre alignment and edge clamping.
ImagePlane resample(const ImagePlane& src, int w, int h) {
  ImagePlane out(w, h);
  const double sx = static_cast<double>(src.width()) / w;
  const double sy = static_cast<double>(src.height()) / h;
  for (int y = 0; y < h; ++y) {
    const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, src.height() - 1.0);
    const int y0 = static_cast<int>(std::floor(fy));
    const int y1 = std::min(y0 + 1, src.height() - 1);
    const double ty = fy - y0;
    for (int x = 0; x < w; ++x) {
      const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, src.width() - 1.0);
      const int x0 = static_cast<int>(std::floor(fx));
      const int x1 = std::min(x0 + 1, src.width() - 1);
      const double tx = fx - x0;
      out.at(x, y) = (1 - ty) * ((1 - tx) * src.at(x0, y0) + tx * src.at(x1, y0)) +
                     ty * ((1 - tx) * src.at(x0, y1) + tx * src.at(x1, y1));
    }
  }
  return out;
}

}  // namespace

AttackSpec identity_attack() { return AttackSpec{"identity", AttackKind::identity, "", 1.0, 0.0}; }

AttackSpec rewatermark_attack(const std::string& codec_id, double strength) {
  const auto& d = descriptor(codec_id);
  if (!d.attack_capable)
    throw ValidationError("codec '" + codec_id + "' cannot be applied to existing images");
  if (!(strength > 0.0)) throw ValidationError("rewatermark strength must be positive");
  std::string id = "rw:" + codec_id;
  if (strength != 1.0) id += "@" + format_level(strength);
  return AttackSpec{id, AttackKind::rewatermark, codec_id, strength, 0.0};
}

AttackSpec baseline_attack(AttackKind kind, double level) {
  switch (kind) {
    case AttackKind::noise:
    case AttackKind::blur:
    case AttackKind::jpeg_quant:
      if (!(level > 0.0)) throw ValidationError("baseline level must be positive");
      break;
    case AttackKind::resize_restore:
      if (!(level > 0.0 && level < 1.0)) throw ValidationError("resize scale must lie in (0, 1)");
      break;
    default:
      throw ValidationError("not a baseline attack kind");
  }
  return AttackSpec{std::string(prefix(kind)) + ":" + format_level(level), kind, "", 1.0, level};
}

AttackSpec parse_attack(const std::string& id) {
  if (id == "identity") return identity_attack();
  const auto colon = id.find(':');
  if (colon == std::string::npos) throw ValidationError("malformed attack id '" + id + "'");
  const std::string head = id.substr(0, colon);
  const std::string tail = id.substr(colon + 1);
  if (head == "rw") {
    const auto at = tail.find('@');
    if (at == std::string::npos) return rewatermark_attack(tail);
    return rewatermark_attack(tail.substr(0, at), std::stod(tail.substr(at + 1)));
  }
  double level = 0.0;
  try {
    std::size_t used = 0;
    level = std::stod(tail, &used);
    if (used != tail.size()) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw ValidationError("malformed attack level in '" + id + "'");
  }
  if (head == "noise") return baseline_attack(AttackKind::noise, level);
  if (head == "blur") return baseline_attack(AttackKind::blur, level);
  if (head == "jpeg") return baseline_attack(AttackKind::jpeg_quant, level);
  if (head == "resize") return baseline_attack(AttackKind::resize_restore, level);
  throw ValidationError("unknown attack kind '" + head + "'");
}

std::vector<AttackSpec> baseline_sweep(AttackKind kind, const std::vector<double>& levels) {
  if (levels.empty()) throw ValidationError("baseline sweep needs at least one level");
  std::vector<AttackSpec> out;
  for (double l : levels) out.push_back(baseline_attack(kind, l));
  return out;
}

std::vector<AttackSpec> default_baselines() {
  std::vector<AttackSpec> out;
  for (auto& s : baseline_sweep(AttackKind::noise, {0.01, 0.02, 0.05})) out.push_back(s);
  for (auto& s : baseline_sweep(AttackKind::blur, {0.5, 1.0, 2.0})) out.push_back(s);
  for (auto& s : baseline_sweep(AttackKind::jpeg_quant, {4, 8, 16})) out.push_back(s);
  for (auto& s : baseline_sweep(AttackKind::resize_restore, {0.5, 0.75})) out.push_back(s);
  return out;
}

std::vector<AttackSpec> rewatermark_attacks() {
  std::vector<AttackSpec> out;
  for (const auto& d : registry())
    if (d.attack_capable) out.push_back(rewatermark_attack(d.id));
  return out;
}

RgbImage add_gaussian_noise(const RgbImage& img, double sigma, const WatermarkKey& rng_key) {
  KeyedStream rng(rng_key, lanes::kAux);
  RgbImage out = img;
  for (double& v : out.samples()) v = std::clamp(v + sigma * rng.gaussian(), 0.0, 1.0);
  return out;
}

RgbImage gaussian_blur(const RgbImage& img, double sigma) {
  const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  std::vector<double> k(2 * radius + 1);
  double s = 0.0;
  for (int i = -radius; i <= radius; ++i) s += k[i + radius] = std::exp(-i * i / (2.0 * sigma * sigma));
  for (double& v : k) v /= s;
  const int w = img.width();
  const int h = img.height();
  RgbImage tmp(w, h);
  RgbImage out(w, h);
  for (int c = 0; c < 3; ++c) {
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        double acc = 0.0;
        for (int i = -radius; i <= radius; ++i) acc += k[i + radius] * img.at(std::clamp(x + i, 0, w - 1), y, c);
        tmp.at(x, y, c) = acc;
      }
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        double acc = 0.0;
        for (int i = -radius; i <= radius; ++i) acc += k[i + radius] * tmp.at(x, std::clamp(y + i, 0, h - 1), c);
        out.at(x, y, c) = acc;
      }
  }
  return out.clamped();
}

RgbImage jpeg_quantize(const RgbImage& img, double step) {
  const double q = step / 255.0;
  RgbImage out = img;
  for (int c = 0; c < 3; ++c) {
    BlockDct d = block_dct(channel(img, c));
    for (auto& block : d.blocks)
      for (double& v : block) v = std::nearbyint(v / q) * q;
    set_channel(out, c, block_idct(d));
  }
  return out.clamped();
}

RgbImage resize_restore(const RgbImage& img, double scale) {
  const int sw = std::max(1, static_cast<int>(std::lround(img.width() * scale)));
  const int sh = std::max(1, static_cast<int>(std::lround(img.height() * scale)));
  RgbImage out = img;
  for (int c = 0; c < 3; ++c) set_channel(out, c, resample(resample(channel(img, c), sw, sh), img.width(), img.height()));
  return out.clamped();
}

WatermarkKey rewatermark_key(const AttackSpec& spec, const WatermarkKey& rng_key) {
  return WatermarkKey{derive_seed(rng_key.seed, "rewatermark", spec.codec_id), spec.codec_id};
}

AttackResult apply_attack(const AttackSpec& spec, const RgbImage& img, const WatermarkKey& rng_key) {
  AttackResult r{img, {spec.id, std::nullopt, std::nullopt}};
  switch (spec.kind) {
    case AttackKind::identity:
      break;
    case AttackKind::rewatermark: {
      const auto& d = descriptor(spec.codec_id);
      if (!d.attack_capable)
        throw ValidationError("codec '" + spec.codec_id + "' cannot be applied to existing images");
      WatermarkKey key = rewatermark_key(spec, rng_key);
      auto message = random_message(spec.codec_id, key);
      r.image = embed(spec.codec_id, img, key, message, spec.strength);
      r.receipt.attacker_key = std::move(key);
      r.receipt.attacker_payload = std::move(message);
      break;
    }
    case AttackKind::noise:
      r.image = add_gaussian_noise(img, spec.level, rng_key);
      break;
    case AttackKind::blur:
      r.image = gaussian_blur(img, spec.level);
      break;
    case AttackKind::jpeg_quant:
      r.image = jpeg_quantize(img, spec.level);
      break;
    case AttackKind::resize_restore:
      r.image = resize_restore(img, spec.level);
      break;
  }
  return r;
}

}  // namespace wmarena
